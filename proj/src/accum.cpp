#include "gcfx/accum.hpp"

#include <cmath>
#include <random>
#include <string>

#include "gcfx/rng.hpp"
#include "gcfx/tape.hpp"

namespace gcfx {
namespace {

Mat sigmoid(Mat x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      x(i, j) = 1.0 / (1.0 + std::exp(-x(i, j)));
  return x;
}

Mat add_rowvec(Mat x, const Mat& row) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) x.row(i) += row.row(0);
  return x;
}

Mat fs_forward(const Mat& x, const MlpParams& fs) {
  Mat h = add_rowvec(la::matmul(x, fs.W1), fs.b1);
  h = h.array().tanh().matrix();
  return add_rowvec(la::matmul(h, fs.W2), fs.b2);
}

}  // namespace

Mat similarity_scores(const Mat& H, const Mat& q_c, const AccumParams& params) {
  if (!H.allFinite() || !q_c.allFinite())
    throw Error(ErrorKind::numeric, "accum",
                "non-finite input to similarity_scores");
  const Mat keys = la::matmul(H, params.Wk);
  const Mat query = la::matmul(q_c, params.Wq);
  Mat x(H.rows(), keys.cols() + query.cols());
  for (Eigen::Index v = 0; v < H.rows(); ++v) {
    x.row(v).head(keys.cols()) = keys.row(v);
    x.row(v).tail(query.cols()) = query.row(0);
  }
  return sigmoid(fs_forward(x, params.fs));
}

Mat compute_masks(const Mat& H, const Mat& delta, const AccumParams& params) {
  const Mat key_gate = sigmoid(la::matmul(H, params.Wk));
  if (key_gate.rows() != delta.rows() || key_gate.cols() != delta.cols())
    throw Error(ErrorKind::argument, "accum", "delta shape mismatch");
  Mat m_c(delta.rows(), delta.cols());
  for (Eigen::Index v = 0; v < delta.rows(); ++v)
    for (Eigen::Index k = 0; k < delta.cols(); ++k)
      m_c(v, k) = key_gate(v, k) >= delta(v, k) ? 1.0 : 0.0;
  return m_c;
}

Mat compute_masks_soft(const Mat& H, const Mat& delta,
                       const AccumParams& params, double tau) {
  const Mat key_gate = sigmoid(la::matmul(H, params.Wk));
  if (key_gate.rows() != delta.rows() || key_gate.cols() != delta.cols())
    throw Error(ErrorKind::argument, "accum", "delta shape mismatch");
  return sigmoid((key_gate - delta) * (1.0 / tau));
}

void split_features(const Mat& H, const Mat& m_c, const AccumParams& params,
                    Mat& H_c, Mat& H_l) {
  const Mat values = la::matmul(H, params.Wv);
  if (m_c.rows() != values.rows() || m_c.cols() != values.cols())
    throw Error(ErrorKind::argument, "accum", "mask shape mismatch");
  H_c = m_c.cwiseProduct(values);
  H_l = (Mat::Ones(m_c.rows(), m_c.cols()) - m_c).cwiseProduct(values);
}

Mat gru_step(const Mat& x, const Mat& q, const GruParams& g) {
  const Mat r = sigmoid(la::matmul(x, g.Wr) + la::matmul(q, g.Ur) + g.br);
  const Mat u = sigmoid(la::matmul(x, g.Wu) + la::matmul(q, g.Uu) + g.bu);
  const Mat cand = (la::matmul(x, g.Wn) +
                    r.cwiseProduct(la::matmul(q, g.Un) + g.bn))
                       .array()
                       .tanh()
                       .matrix();
  return (Mat::Ones(1, q.cols()) - u).cwiseProduct(q) + u.cwiseProduct(cand);
}

CommonQueryState accumulate(const Mat& H_c, const CommonQueryState& prev,
                            const AccumParams& params) {
  Mat q_update = Mat::Zero(1, H_c.cols());
  for (Eigen::Index v = 0; v < H_c.rows(); ++v)
    for (Eigen::Index k = 0; k < H_c.cols(); ++k)
      q_update(0, k) += H_c(v, k);
  return {gru_step(q_update, prev.q_c, params.gru), prev.iteration + 1};
}

AccumResult run_accum(const Mat& H, const AccumParams& params, int iters,
                      MaskMode mode, double tau) {
  if (iters < 1)
    throw Error(ErrorKind::argument, "accum",
                "run_accum needs at least 1 iteration, got " +
                    std::to_string(iters) +
                    " (use run_accum_random for the baseline)");
  AccumResult out;
  CommonQueryState state{params.q_init, 0};
  out.trace.push_back(state);
  for (int i = 1; i <= iters; ++i) {
    const Mat delta = similarity_scores(H, state.q_c, params);
    const Mat m_c = mode == MaskMode::hard
                        ? compute_masks(H, delta, params)
                        : compute_masks_soft(H, delta, params, tau);
    split_features(H, m_c, params, out.H_c, out.H_l);
    state = accumulate(out.H_c, state, params);
    out.trace.push_back(state);
  }
  out.h_c = state.q_c;
  return out;
}

AccumResult run_accum_with_mask(const Mat& H, const AccumParams& params,
                                const Mat& m_c) {
  AccumResult out;
  CommonQueryState state{params.q_init, 0};
  out.trace.push_back(state);
  split_features(H, m_c, params, out.H_c, out.H_l);
  state = accumulate(out.H_c, state, params);
  out.trace.push_back(state);
  out.h_c = state.q_c;
  return out;
}

Mat random_mask(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  auto eng = rng::stream(seed, rng::kRandomMask);
  std::bernoulli_distribution coin(0.5);
  Mat m_c(rows, cols);
  for (Eigen::Index v = 0; v < rows; ++v)
    for (Eigen::Index k = 0; k < cols; ++k) m_c(v, k) = coin(eng) ? 1.0 : 0.0;
  return m_c;
}

AccumResult run_accum_random(const Mat& H, const AccumParams& params,
                             std::uint64_t seed) {
  return run_accum_with_mask(
      H, params, random_mask(H.rows(), params.Wv.cols(), seed));
}

}  // namespace gcfx
