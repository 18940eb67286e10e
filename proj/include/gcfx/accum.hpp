#pragma once

#include <cstdint>
#include <vector>

#include "gcfx/model.hpp"

namespace gcfx {

struct CommonQueryState {
  Mat q_c;        // 1 x d_hidden
  int iteration = 0;
};

struct AccumResult {
  Mat h_c;                             // 1 x d_hidden, = q_c(M)
  Mat H_l;                             // |V| x d_hidden, final local parts
  Mat H_c;                             // |V| x d_hidden, final common parts
  std::vector<CommonQueryState> trace; // states 0..M (index = iteration)
};

/// delta_v = sigmoid(f_s(concat(h_v Wk, q_c Wq))), every entry in (0,1).
Mat similarity_scores(const Mat& H, const Mat& q_c, const AccumParams& params);

/// Hard masks: m_c[v][k] = 1 iff sigmoid(h_v Wk)[k] >= delta[v][k].
Mat compute_masks(const Mat& H, const Mat& delta, const AccumParams& params);

/// Soft relaxation sigmoid((sigmoid(h Wk) - delta) / tau), used in training.
Mat compute_masks_soft(const Mat& H, const Mat& delta,
                       const AccumParams& params, double tau);

/// H_c = m_c ⊙ (H Wv), H_l = (1 - m_c) ⊙ (H Wv). With 0/1 masks the two
/// parts partition H Wv bitwise.
void split_features(const Mat& H, const Mat& m_c, const AccumParams& params,
                    Mat& H_c, Mat& H_l);

/// One GRU step with input x and hidden state q (both 1 x d_hidden).
Mat gru_step(const Mat& x, const Mat& q, const GruParams& g);

/// q_update = column sum of H_c; new state = GRU(q_update, q_prev).
CommonQueryState accumulate(const Mat& H_c, const CommonQueryState& prev,
                            const AccumParams& params);

/// Full M-iteration loop from the learned q_init. Requires M >= 1.
AccumResult run_accum(const Mat& H, const AccumParams& params, int iters,
                      MaskMode mode, double tau);

/// One split + accumulate pass with a caller-supplied mask matrix.
AccumResult run_accum_with_mask(const Mat& H, const AccumParams& params,
                                const Mat& m_c);

/// i.i.d. Bernoulli(0.5) 0/1 matrix from the random-mask stream of `seed`.
Mat random_mask(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

/// Random-filter baseline: masks i.i.d. Bernoulli(0.5), one accumulate step.
AccumResult run_accum_random(const Mat& H, const AccumParams& params,
                             std::uint64_t seed);

}  // namespace gcfx
