#pragma once

#include <vector>

#include "gcfx/model.hpp"

namespace gcfx {

struct GaussianPosterior {
  Mat mu;       // 1 x d_latent
  Mat log_var;  // 1 x d_latent, clamped to [-10, 10]
};

struct LatentSample {
  Mat z_c;  // 1 x d_latent
  Mat Z_l;  // |V| x d_latent
};

inline constexpr double kLogVarClamp = 10.0;

/// Linear heads on h_c and on each local row, with separate parameters.
/// log_var is clamped on the way out.
GaussianPosterior posterior_common(const Mat& h_c, const GaussianHead& head);
std::vector<GaussianPosterior> posterior_locals(const Mat& H_l,
                                                const GaussianHead& head);

/// z = mu + exp(0.5 * log_var) ⊙ noise. Noise is caller-supplied so runs are
/// reproducible.
Mat sample(const GaussianPosterior& p, const Mat& noise);

/// 0.5 * Σ_k (mu_k^2 + exp(log_var_k) - 1 - log_var_k), always >= 0.
double kl_to_standard_normal(const GaussianPosterior& p);

}  // namespace gcfx
