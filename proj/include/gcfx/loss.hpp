#pragma once

#include <cstdint>

#include "gcfx/graph.hpp"
#include "gcfx/model.hpp"

namespace gcfx {

struct LossOptions {
  double beta = 0.5;
  double gamma = 0.1;
  double pos_weight = 0.0;  // <= 0: per-graph default
};

struct LossParts {
  double total = 0.0;
  double l_agg = 0.0;
  double l_c_prior = 0.0;   // unweighted KL(common)
  double l_l_prior = 0.0;   // unweighted sum of local KLs
  double l_reg = 0.0;
};

/// All stochastic inputs of one loss evaluation, drawn up front so the plain
/// and taped paths (and any re-run) see identical randomness.
struct NoiseBundle {
  Mat eps_c;      // 1 x d_latent
  Mat eps_l;      // |V| x d_latent
  Mat reg_rows;   // |V| x d_latent
  Mat rand_mask;  // |V| x d_hidden, used only when accum_iters == 0
};

NoiseBundle make_noise(const ModelConfig& cfg, int node_count,
                       std::uint64_t seed, int graph_id, int epoch);

/// Forward-only loss assembled from the plain module functions.
/// total = L_agg + beta*KL_c + gamma*sum_j KL_l(j) + L_reg.
LossParts loss_deepgcfx(const Graph& g, const ModelParams& params,
                        const ModelConfig& cfg, const LossOptions& opt,
                        const NoiseBundle& noise);

/// Taped loss: same value, plus parameter gradients accumulated into `grad`
/// (shaped like `params`; caller zeroes it when accumulation is unwanted).
LossParts backprop_loss(const Graph& g, const ModelParams& params,
                        const ModelConfig& cfg, const LossOptions& opt,
                        const NoiseBundle& noise, ModelParams& grad);

/// Parameter container of matching shapes, all zero.
ModelParams zero_like(const ModelParams& params);

}  // namespace gcfx
