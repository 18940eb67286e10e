#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gcfx/common.hpp"

namespace gcfx {

/// One input sample: nodes, undirected edges and a node feature matrix.
/// Node ids are 0-indexed and contiguous within the graph. The stored edge
/// set holds each undirected edge once as (u, v) with u < v; the adjacency
/// derived from it is symmetric 0/1 with no self-loops.
struct Graph {
  int graph_id = 0;
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;  // u < v, sorted, unique
  Mat node_features;                       // node_count x d_in
  std::optional<int> label;
  std::optional<std::vector<int>> node_labels;

  int edge_count() const { return static_cast<int>(edges.size()); }

  /// Throws on self-loops, out-of-range endpoints, duplicate edges or a
  /// feature matrix whose row count disagrees with node_count.
  void validate() const;

  Mat dense_adjacency() const;        // node_count x node_count, 0/1
  std::vector<int> degrees() const;
};

/// Canonicalize an arbitrary undirected edge list: orient u < v, drop
/// self-loops, sort, and deduplicate.
std::vector<std::pair<int, int>> canonical_edges(
    std::vector<std::pair<int, int>> edges);

/// Block-diagonal minibatch. Node j of graph r lives at global row
/// node_offsets[r] + j; there are never cross-graph edges.
struct GraphBatch {
  std::vector<Graph> graphs;
  std::vector<int> node_offsets;  // size graphs.size() + 1, strictly increasing
  int total_nodes = 0;

  static GraphBatch from_graphs(std::vector<Graph> graphs);

  Mat batch_features() const;      // total_nodes x d_in
  Mat batch_adjacency() const;     // block-diagonal
  std::vector<Graph> unbatch() const { return graphs; }

  /// Rows [node_offsets[r], node_offsets[r+1]) of a per-node matrix.
  Mat rows_of(const Mat& per_node, std::size_t r) const;
};

/// Fold partition for k-fold cross validation.
struct DatasetSplit {
  std::vector<int> fold_assignments;  // per graph, in [0, k)
  int k = 0;
  std::uint64_t seed = 0;
  bool stratified = false;
  bool stratification_fallback = false;  // a class had fewer than k members
};

/// Deterministic k-fold assignment; stratified by label when every class has
/// at least k members, otherwise unstratified with the fallback flag set.
/// Fold sizes differ by at most one.
DatasetSplit make_folds(const std::vector<Graph>& graphs, int k,
                        std::uint64_t seed);

}  // namespace gcfx
