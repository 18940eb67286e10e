#pragma once

#include <cstdint>
#include <vector>

#include "gcfx/checkpoint.hpp"
#include "gcfx/graph.hpp"

namespace gcfx {

struct SpearmanResult {
  double value = 0.0;
  bool degenerate = false;  // a constant input; value reported as 0
};

/// Rank correlation with average ranks for ties.
SpearmanResult spearman(const std::vector<double>& x,
                        const std::vector<double>& y);

/// Scalar diagnostics per ACCUM iteration: mean over nodes of the absolute
/// Spearman correlation between z_c and, respectively, the local latents, the
/// patch-wise common latents (H_c rows through the common head) and the
/// per-node decoder codes. Iteration 0 is the seeded random-filter baseline.
/// A comparison with no elementwise pairing (decoder code width differing
/// from d_latent) is recorded as 0 with a degeneracy bump.
struct CorrelationTrace {
  std::vector<double> corr_local;         // size m_max + 1
  std::vector<double> corr_common_patch;
  std::vector<double> corr_decoder;
  int degenerate_points = 0;
};

CorrelationTrace correlation_vs_iterations(const Graph& g,
                                           const Checkpoint& ckpt, int m_max,
                                           std::uint64_t seed);

/// (2/(P(P-1))) * sum_{u<v} (1/d) * sum_k |rows(u,k) - rows(v,k)|.
double mapd(const Mat& rows);

struct MapdReport {
  double mapd_common_mean = 0.0;
  double mapd_local_mean = 0.0;
  std::vector<int> graph_ids;           // graphs that entered the means
  std::vector<double> per_graph_common;
  std::vector<double> per_graph_local;
  int skipped_single_node = 0;
  double fraction_common_lower = 0.0;   // graphs with mapd_common < mapd_local
};

MapdReport mapd_report(const std::vector<Graph>& dataset,
                       const Checkpoint& ckpt);

struct CorrelationMatrixResult {
  Mat grid;                    // |spearman|, common dims x local dims
  int degenerate_entries = 0;
};

/// Each column of `common_samples` and `local_samples` is one latent
/// dimension sampled across graphs (one row per graph).
CorrelationMatrixResult correlation_matrix(const Mat& common_samples,
                                           const Mat& local_samples);

/// GVAE-style baseline: split one latent's columns into halves and correlate
/// the halves against each other.
CorrelationMatrixResult correlation_matrix_split_half(const Mat& latent_samples);

}  // namespace gcfx
