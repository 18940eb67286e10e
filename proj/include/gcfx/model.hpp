#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gcfx/common.hpp"

namespace gcfx {

enum class MaskMode { soft, hard };
enum class RegMode { noise, uniform };

const char* mask_mode_name(MaskMode m);
MaskMode mask_mode_from_name(const std::string& s);
const char* reg_mode_name(RegMode m);
RegMode reg_mode_from_name(const std::string& s);

/// Widths and behavioural switches. d_latent must stay d_hidden-compatible
/// only through the heads; the alpha gating in evaluation needs z_c and
/// sum(z_l) conformable, which holds because both are d_latent wide.
struct ModelConfig {
  int d_in = 0;
  int d_hidden = 32;
  int d_latent = 32;
  int d_dec = 32;
  int n_layers = 3;
  int accum_iters = 3;        // M; 0 selects the random-filter baseline
  double soft_mask_tau = 0.1;
  MaskMode mask_mode = MaskMode::soft;  // training default; inference uses hard
  RegMode reg_mode = RegMode::noise;

  void validate() const;
};

/// One-hidden-layer map: activation(x W1 + b1) W2 + b2.
struct MlpParams {
  Mat W1, b1, W2, b2;
};

struct GruParams {
  Mat Wr, Ur, br;  // reset gate
  Mat Wu, Uu, bu;  // update gate
  Mat Wn, Un, bn;  // candidate
};

struct AccumParams {
  Mat Wk, Wq, Wv;    // d_hidden x d_hidden projections
  MlpParams fs;      // 2*d_hidden -> d_hidden, tanh hidden
  GruParams gru;     // state width d_hidden
  Mat q_init;        // 1 x d_hidden, learned
};

/// Linear mu/log-var maps for a diagonal Gaussian.
struct GaussianHead {
  Mat W_mu, b_mu;
  Mat W_lv, b_lv;
};

struct ModelParams {
  std::vector<Mat> encoder;  // layer n: (n ? d_hidden : d_in) x d_hidden
  AccumParams accum;
  GaussianHead head_common;  // d_hidden -> d_latent
  GaussianHead head_local;
  MlpParams agg_mlp;         // 2*d_latent -> d_dec, relu hidden
  MlpParams reg_mlp;         // 2*d_latent (z_c ++ noise) -> d_dec, relu hidden
};

/// Deterministic Glorot-uniform init; q_init from N(0, 0.01^2); biases zero.
ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed);

/// Enumerate every parameter tensor in a fixed documented order. The same
/// order backs checkpoints, the optimizer state and gradient checking.
void visit_params(ModelParams& p,
                  const std::function<void(const std::string&, Mat&)>& f);
void visit_params(const ModelParams& p,
                  const std::function<void(const std::string&, const Mat&)>& f);

int param_count(const ModelParams& p);  // total scalar count

/// Throws when any tensor shape disagrees with cfg or any entry is non-finite.
void check_params(const ModelParams& p, const ModelConfig& cfg);

}  // namespace gcfx
