#pragma once

#include "gcfx/latent.hpp"
#include "gcfx/model.hpp"

namespace gcfx {

inline constexpr double kProbClamp = 1e-7;

/// Per-node decoder codes d_j = agg_mlp(concat(z_c, z_l(j))), one row each.
Mat decode_agg_codes(const Mat& z_c, const Mat& Z_l, const MlpParams& agg_mlp);

/// probs[j][k] = sigmoid(d_j · d_k) over the codes above. Symmetric; the
/// diagonal is present but never enters the loss.
Mat decode_agg(const Mat& z_c, const Mat& Z_l, const MlpParams& agg_mlp);

/// e_j = reg_mlp(concat(z_c, noise_rows[j])); probs = sigmoid(e eᵀ).
/// The uniform mode substitutes zero rows for the noise, collapsing every
/// e_j to the same code.
Mat decode_reg(const Mat& z_c, const Mat& noise_rows, const MlpParams& reg_mlp,
               RegMode mode);

/// Mean over off-diagonal ordered pairs of weighted BCE with probabilities
/// clamped to [1e-7, 1-1e-7]. pos_weight <= 0 selects the per-graph default
/// (#non-edges / #edges, 1 when edgeless).
double reconstruction_loss(const Mat& probs, const Mat& adjacency,
                           double pos_weight = 0.0);

double default_pos_weight(const Mat& adjacency);

}  // namespace gcfx
