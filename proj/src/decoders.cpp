#include "gcfx/decoders.hpp"

#include <algorithm>
#include <cmath>

#include "gcfx/tape.hpp"

namespace gcfx {
namespace {

Mat add_rowvec(Mat x, const Mat& row) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i) += row.row(0);
  return x;
}

Mat mlp_tanh(const Mat& x, const MlpParams& mlp) {
  // tanh hidden: decoder codes must not ride a relu that can die when the
  // latents are small
  Mat h = add_rowvec(la::matmul(x, mlp.W1), mlp.b1).array().tanh().matrix();
  return add_rowvec(la::matmul(h, mlp.W2), mlp.b2);
}

Mat gram_sigmoid(const Mat& codes) {
  Mat probs = la::matmul_nt(codes, codes);
  for (Eigen::Index i = 0; i < probs.rows(); ++i)
    for (Eigen::Index j = 0; j < probs.cols(); ++j)
      probs(i, j) = 1.0 / (1.0 + std::exp(-probs(i, j)));
  return probs;
}

Mat concat_broadcast(const Mat& z_c, const Mat& rows) {
  Mat x(rows.rows(), z_c.cols() + rows.cols());
  for (Eigen::Index v = 0; v < rows.rows(); ++v) {
    x.row(v).head(z_c.cols()) = z_c.row(0);
    x.row(v).tail(rows.cols()) = rows.row(v);
  }
  return x;
}

}  // namespace

Mat decode_agg_codes(const Mat& z_c, const Mat& Z_l, const MlpParams& agg_mlp) {
  if (z_c.rows() != 1)
    throw Error(ErrorKind::argument, "decoders", "z_c must be a single row");
  return mlp_tanh(concat_broadcast(z_c, Z_l), agg_mlp);
}

Mat decode_agg(const Mat& z_c, const Mat& Z_l, const MlpParams& agg_mlp) {
  return gram_sigmoid(decode_agg_codes(z_c, Z_l, agg_mlp));
}

Mat decode_reg(const Mat& z_c, const Mat& noise_rows, const MlpParams& reg_mlp,
               RegMode mode) {
  if (z_c.rows() != 1)
    throw Error(ErrorKind::argument, "decoders", "z_c must be a single row");
  const Mat rows = mode == RegMode::uniform
                       ? Mat(Mat::Zero(noise_rows.rows(), noise_rows.cols()))
                       : noise_rows;
  return gram_sigmoid(mlp_tanh(concat_broadcast(z_c, rows), reg_mlp));
}

double default_pos_weight(const Mat& adjacency) {
  const Eigen::Index n = adjacency.rows();
  double edges = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && adjacency(i, j) != 0.0) edges += 1.0;
  const double slots = static_cast<double>(n) * (n - 1);
  if (edges == 0.0) return 1.0;
  return (slots - edges) / edges;
}

double reconstruction_loss(const Mat& probs, const Mat& adjacency,
                           double pos_weight) {
  const Eigen::Index n = adjacency.rows();
  if (probs.rows() != n || probs.cols() != n)
    throw Error(ErrorKind::argument, "decoders",
                "probs and adjacency disagree on node count");
  if (n < 2) return 0.0;
  if (pos_weight <= 0.0) pos_weight = default_pos_weight(adjacency);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      const double p = std::clamp(probs(j, k), kProbClamp, 1.0 - kProbClamp);
      if (adjacency(j, k) != 0.0)
        total += -pos_weight * std::log(p);
      else
        total += -std::log(1.0 - p);
    }
  return total / static_cast<double>(n * (n - 1));
}

}  // namespace gcfx
