#pragma once

#include <cstdint>
#include <vector>

#include "gcfx/evaluation.hpp"
#include "gcfx/graph.hpp"

namespace gcfx {

/// Ground-truth generative factors for the recovery benchmark. The graph-wise
/// common factor is the class (stored as the graph label); the local factors
/// are per-node categoricals (stored as node labels and one-hot features).
struct SyntheticSpec {
  enum class Kind { density, motif };

  Kind kind = Kind::density;
  int classes = 2;
  std::vector<double> edge_probability = {0.2, 0.6};  // density: one per class
  int node_categories = 3;
  double motif_background = 0.05;  // extra edge rate in motif mode

  void validate() const;
};

/// Sample n graphs: class uniform in [0,K), |V| uniform in [min_nodes,
/// max_nodes], edges i.i.d. Bernoulli(p[class]) over unordered pairs (density
/// mode) or planted triangles/stars plus background noise (motif mode).
/// Edgeless or disconnected results are kept.
std::vector<Graph> generate_synthetic(const SyntheticSpec& spec, int n_graphs,
                                      int min_nodes, int max_nodes,
                                      std::uint64_t seed);

/// Linear probe on z_c alone (alpha = 1) under the standard CV protocol.
double probe_recovery(const std::vector<EmbeddingRecord>& records,
                      const DatasetSplit& split,
                      const ClassifierConfig& cfg = {});

/// Ceiling check: records whose z_c is the observed edge density scalar.
std::vector<EmbeddingRecord> density_feature_records(
    const std::vector<Graph>& graphs);

}  // namespace gcfx
