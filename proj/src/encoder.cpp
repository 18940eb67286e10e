#include "gcfx/encoder.hpp"

#include <cmath>

#include "gcfx/tape.hpp"

namespace gcfx {

Mat normalized_adjacency(const Mat& adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw Error(ErrorKind::argument, "encoder", "adjacency must be square");
  const Eigen::Index n = adjacency.rows();
  Mat a = adjacency;
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) += 1.0;
  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double deg = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) deg += a(i, j);
    dinv(i) = 1.0 / std::sqrt(deg);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) *= dinv(i) * dinv(j);
  return a;
}

Mat gnn_layer(const Mat& H_prev, const Mat& a_hat, const Mat& W) {
  return la::matmul(a_hat, la::matmul(H_prev, W)).cwiseMax(0.0);
}

namespace {

Mat run_layers(Mat h, const Mat& a_hat, const ModelParams& params) {
  if (params.encoder.empty())
    throw Error(ErrorKind::config, "encoder", "encoder needs at least 1 layer");
  for (const Mat& w : params.encoder) h = gnn_layer(h, a_hat, w);
  return h;
}

}  // namespace

Mat encode(const Graph& g, const ModelParams& params) {
  g.validate();
  if (g.node_features.size() == 0)
    throw Error(ErrorKind::argument, "encoder",
                "graph " + std::to_string(g.graph_id) + " is not featurized");
  return run_layers(g.node_features, normalized_adjacency(g.dense_adjacency()),
                    params);
}

Mat encode(const GraphBatch& batch, const ModelParams& params) {
  return run_layers(batch.batch_features(),
                    normalized_adjacency(batch.batch_adjacency()), params);
}

}  // namespace gcfx
