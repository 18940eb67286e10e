#include "gcfx/graph.hpp"

#include <algorithm>
#include <string>

namespace gcfx {

void Graph::validate() const {
  if (node_count < 0)
    throw Error(ErrorKind::validation, "graph_data",
                "graph " + std::to_string(graph_id) + ": negative node count");
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count)
      throw Error(ErrorKind::validation, "graph_data",
                  "graph " + std::to_string(graph_id) + ": edge (" +
                      std::to_string(u) + ", " + std::to_string(v) +
                      ") out of range for " + std::to_string(node_count) +
                      " nodes");
    if (u == v)
      throw Error(ErrorKind::validation, "graph_data",
                  "graph " + std::to_string(graph_id) + ": self-loop at node " +
                      std::to_string(u));
    if (u > v)
      throw Error(ErrorKind::validation, "graph_data",
                  "graph " + std::to_string(graph_id) +
                      ": edge not canonical (u >= v)");
  }
  if (!std::is_sorted(edges.begin(), edges.end()))
    throw Error(ErrorKind::validation, "graph_data",
                "graph " + std::to_string(graph_id) + ": edges not sorted");
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw Error(ErrorKind::validation, "graph_data",
                "graph " + std::to_string(graph_id) + ": duplicate edge");
  if (node_features.size() > 0 && node_features.rows() != node_count)
    throw Error(ErrorKind::validation, "graph_data",
                "graph " + std::to_string(graph_id) + ": feature matrix has " +
                    std::to_string(node_features.rows()) + " rows, expected " +
                    std::to_string(node_count));
  if (node_labels && static_cast<int>(node_labels->size()) != node_count)
    throw Error(ErrorKind::validation, "graph_data",
                "graph " + std::to_string(graph_id) + ": node label count " +
                    std::to_string(node_labels->size()) + ", expected " +
                    std::to_string(node_count));
}

Mat Graph::dense_adjacency() const {
  Mat a = Mat::Zero(node_count, node_count);
  for (const auto& [u, v] : edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(node_count, 0);
  for (const auto& [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

std::vector<std::pair<int, int>> canonical_edges(
    std::vector<std::pair<int, int>> edges) {
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

GraphBatch GraphBatch::from_graphs(std::vector<Graph> graphs) {
  GraphBatch b;
  b.graphs = std::move(graphs);
  b.node_offsets.resize(b.graphs.size() + 1);
  b.node_offsets[0] = 0;
  Eigen::Index d_in = -1;
  for (std::size_t r = 0; r < b.graphs.size(); ++r) {
    const Graph& g = b.graphs[r];
    g.validate();
    if (g.node_count == 0)
      throw Error(ErrorKind::validation, "graph_data",
                  "graph " + std::to_string(g.graph_id) +
                      ": cannot batch an empty graph");
    if (d_in < 0)
      d_in = g.node_features.cols();
    else if (g.node_features.cols() != d_in)
      throw Error(ErrorKind::validation, "graph_data",
                  "graph " + std::to_string(g.graph_id) +
                      ": feature width mismatch within batch");
    b.node_offsets[r + 1] = b.node_offsets[r] + g.node_count;
  }
  b.total_nodes = b.node_offsets.back();
  return b;
}

Mat GraphBatch::batch_features() const {
  if (graphs.empty()) return Mat(0, 0);
  Mat x(total_nodes, graphs[0].node_features.cols());
  for (std::size_t r = 0; r < graphs.size(); ++r)
    x.middleRows(node_offsets[r], graphs[r].node_count) =
        graphs[r].node_features;
  return x;
}

Mat GraphBatch::batch_adjacency() const {
  Mat a = Mat::Zero(total_nodes, total_nodes);
  for (std::size_t r = 0; r < graphs.size(); ++r) {
    const int off = node_offsets[r];
    for (const auto& [u, v] : graphs[r].edges) {
      a(off + u, off + v) = 1.0;
      a(off + v, off + u) = 1.0;
    }
  }
  return a;
}

Mat GraphBatch::rows_of(const Mat& per_node, std::size_t r) const {
  if (r >= graphs.size())
    throw Error(ErrorKind::argument, "graph_data", "batch row index out of range");
  if (per_node.rows() != total_nodes)
    throw Error(ErrorKind::argument, "graph_data",
                "per-node matrix has " + std::to_string(per_node.rows()) +
                    " rows, batch has " + std::to_string(total_nodes));
  return per_node.middleRows(node_offsets[r], graphs[r].node_count);
}

}  // namespace gcfx
