#include "gcfx/latent.hpp"

#include <cmath>

#include "gcfx/tape.hpp"

namespace gcfx {
namespace {

Mat clamp_log_var(Mat lv) {
  return lv.cwiseMax(-kLogVarClamp).cwiseMin(kLogVarClamp);
}

}  // namespace

GaussianPosterior posterior_common(const Mat& h_c, const GaussianHead& head) {
  GaussianPosterior p;
  p.mu = la::matmul(h_c, head.W_mu) + head.b_mu;
  p.log_var = clamp_log_var(la::matmul(h_c, head.W_lv) + head.b_lv);
  return p;
}

std::vector<GaussianPosterior> posterior_locals(const Mat& H_l,
                                                const GaussianHead& head) {
  const Mat mu = la::matmul(H_l, head.W_mu);
  const Mat lv = la::matmul(H_l, head.W_lv);
  std::vector<GaussianPosterior> out(H_l.rows());
  for (Eigen::Index v = 0; v < H_l.rows(); ++v) {
    out[v].mu = mu.row(v) + head.b_mu;
    out[v].log_var = clamp_log_var(lv.row(v) + head.b_lv);
  }
  return out;
}

Mat sample(const GaussianPosterior& p, const Mat& noise) {
  if (noise.rows() != p.mu.rows() || noise.cols() != p.mu.cols())
    throw Error(ErrorKind::argument, "latent", "noise shape mismatch");
  Mat z = p.mu;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      z(i, j) += std::exp(0.5 * p.log_var(i, j)) * noise(i, j);
  return z;
}

double kl_to_standard_normal(const GaussianPosterior& p) {
  double kl = 0.0;
  for (Eigen::Index j = 0; j < p.mu.cols(); ++j) {
    const double mu = p.mu(0, j);
    const double lv = p.log_var(0, j);
    kl += mu * mu + std::exp(lv) - 1.0 - lv;
  }
  return 0.5 * kl;
}

}  // namespace gcfx
