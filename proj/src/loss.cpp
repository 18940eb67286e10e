#include "gcfx/loss.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>

#include "gcfx/accum.hpp"
#include "gcfx/decoders.hpp"
#include "gcfx/encoder.hpp"
#include "gcfx/latent.hpp"
#include "gcfx/rng.hpp"
#include "gcfx/tape.hpp"

namespace gcfx {
namespace {

Mat normal_matrix(Eigen::Index rows, Eigen::Index cols,
                  std::mt19937_64& eng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(eng);
  return m;
}

void check_input(const Graph& g, const ModelConfig& cfg,
                 const NoiseBundle& noise) {
  if (g.node_features.cols() != cfg.d_in)
    throw Error(ErrorKind::config, "objective_trainer",
                "graph " + std::to_string(g.graph_id) + " has feature width " +
                    std::to_string(g.node_features.cols()) +
                    ", config expects " + std::to_string(cfg.d_in));
  if (noise.eps_c.cols() != cfg.d_latent ||
      noise.eps_l.rows() != g.node_count ||
      noise.reg_rows.rows() != g.node_count)
    throw Error(ErrorKind::argument, "objective_trainer",
                "noise bundle does not match graph " +
                    std::to_string(g.graph_id));
  if (cfg.accum_iters == 0 && (noise.rand_mask.rows() != g.node_count ||
                               noise.rand_mask.cols() != cfg.d_hidden))
    throw Error(ErrorKind::argument, "objective_trainer",
                "random-mask bundle does not match graph " +
                    std::to_string(g.graph_id));
}

void check_finite(const LossParts& parts) {
  const std::pair<const char*, double> named[] = {
      {"L_agg", parts.l_agg},
      {"L_c_prior", parts.l_c_prior},
      {"L_l_prior", parts.l_l_prior},
      {"L_reg", parts.l_reg},
      {"total", parts.total},
  };
  for (const auto& [name, v] : named)
    if (!std::isfinite(v))
      throw Error(ErrorKind::numeric, "objective_trainer",
                  std::string("non-finite loss component ") + name);
}

}  // namespace

NoiseBundle make_noise(const ModelConfig& cfg, int node_count,
                       std::uint64_t seed, int graph_id, int epoch) {
  NoiseBundle nb;
  {
    auto eng = rng::stream(seed, rng::kLatentNoise,
                           static_cast<std::uint64_t>(graph_id),
                           static_cast<std::uint64_t>(epoch));
    nb.eps_c = normal_matrix(1, cfg.d_latent, eng);
    nb.eps_l = normal_matrix(node_count, cfg.d_latent, eng);
  }
  {
    auto eng = rng::stream(seed, rng::kRegNoise,
                           static_cast<std::uint64_t>(graph_id),
                           static_cast<std::uint64_t>(epoch));
    nb.reg_rows = normal_matrix(node_count, cfg.d_latent, eng);
  }
  if (cfg.accum_iters == 0)
    nb.rand_mask =
        random_mask(node_count, cfg.d_hidden,
                    rng::derive(seed, rng::kRandomMask,
                                static_cast<std::uint64_t>(graph_id),
                                static_cast<std::uint64_t>(epoch)));
  return nb;
}

LossParts loss_deepgcfx(const Graph& g, const ModelParams& params,
                        const ModelConfig& cfg, const LossOptions& opt,
                        const NoiseBundle& noise) {
  check_input(g, cfg, noise);
  const Mat H = encode(g, params);
  const AccumResult ar =
      cfg.accum_iters == 0
          ? run_accum_with_mask(H, params.accum, noise.rand_mask)
          : run_accum(H, params.accum, cfg.accum_iters, cfg.mask_mode,
                      cfg.soft_mask_tau);
  const GaussianPosterior post_c = posterior_common(ar.h_c, params.head_common);
  const std::vector<GaussianPosterior> post_l =
      posterior_locals(ar.H_l, params.head_local);

  const Mat z_c = sample(post_c, noise.eps_c);
  Mat Z_l(g.node_count, cfg.d_latent);
  for (int v = 0; v < g.node_count; ++v)
    Z_l.row(v) = sample(post_l[v], noise.eps_l.row(v));

  const Mat A = g.dense_adjacency();
  const double posw =
      opt.pos_weight > 0.0 ? opt.pos_weight : default_pos_weight(A);

  LossParts parts;
  parts.l_agg =
      reconstruction_loss(decode_agg(z_c, Z_l, params.agg_mlp), A, posw);
  parts.l_reg = reconstruction_loss(
      decode_reg(z_c, noise.reg_rows, params.reg_mlp, cfg.reg_mode), A, posw);
  parts.l_c_prior = kl_to_standard_normal(post_c);
  parts.l_l_prior = 0.0;
  for (const auto& p : post_l) parts.l_l_prior += kl_to_standard_normal(p);
  parts.total = parts.l_agg + opt.beta * parts.l_c_prior +
                opt.gamma * parts.l_l_prior + parts.l_reg;
  check_finite(parts);
  return parts;
}

LossParts backprop_loss(const Graph& g, const ModelParams& params,
                        const ModelConfig& cfg, const LossOptions& opt,
                        const NoiseBundle& noise, ModelParams& grad) {
  check_input(g, cfg, noise);
  const int n = g.node_count;

  Tape t;
  std::map<std::string, Tape::NodeId> pid;
  visit_params(params, [&](const std::string& name, const Mat& m) {
    pid.emplace(name, t.param(m));
  });
  const auto P = [&](const std::string& name) { return pid.at(name); };

  // encoder
  Tape::NodeId a_hat = t.constant(normalized_adjacency(g.dense_adjacency()));
  Tape::NodeId H = t.constant(g.node_features);
  for (int l = 0; l < cfg.n_layers; ++l)
    H = t.relu(t.matmul(a_hat, t.matmul(H, P("encoder.W" + std::to_string(l)))));

  // products reused by every ACCUM iteration
  Tape::NodeId keys = t.matmul(H, P("accum.Wk"));
  Tape::NodeId keygate = t.sigmoid(keys);
  Tape::NodeId values = t.matmul(H, P("accum.Wv"));

  const auto gru = [&](Tape::NodeId x, Tape::NodeId h) {
    Tape::NodeId r = t.sigmoid(t.add(
        t.add(t.matmul(x, P("accum.gru.Wr")), t.matmul(h, P("accum.gru.Ur"))),
        P("accum.gru.br")));
    Tape::NodeId u = t.sigmoid(t.add(
        t.add(t.matmul(x, P("accum.gru.Wu")), t.matmul(h, P("accum.gru.Uu"))),
        P("accum.gru.bu")));
    Tape::NodeId cand = t.tanh_fn(t.add(
        t.matmul(x, P("accum.gru.Wn")),
        t.mul(r, t.add(t.matmul(h, P("accum.gru.Un")), P("accum.gru.bn")))));
    return t.add(t.mul(t.rsub_scalar(1.0, u), h), t.mul(u, cand));
  };

  Tape::NodeId q = P("accum.q_init");
  Tape::NodeId H_l = -1;
  if (cfg.accum_iters == 0) {
    Tape::NodeId m_c = t.constant(noise.rand_mask);
    Tape::NodeId H_c = t.mul(m_c, values);
    H_l = t.mul(t.rsub_scalar(1.0, m_c), values);
    q = gru(t.colsum(H_c), q);
  } else {
    for (int i = 1; i <= cfg.accum_iters; ++i) {
      Tape::NodeId query = t.matmul(q, P("accum.Wq"));
      Tape::NodeId x = t.hcat(keys, t.row_broadcast(query, n));
      Tape::NodeId fs_h = t.tanh_fn(
          t.add_rowvec(t.matmul(x, P("accum.fs.W1")), P("accum.fs.b1")));
      Tape::NodeId delta = t.sigmoid(
          t.add_rowvec(t.matmul(fs_h, P("accum.fs.W2")), P("accum.fs.b2")));
      Tape::NodeId m_c;
      if (cfg.mask_mode == MaskMode::hard) {
        // detached indicator, rebuilt as a constant from current values
        const Mat& kg = t.value(keygate);
        const Mat& dl = t.value(delta);
        Mat hard(kg.rows(), kg.cols());
        for (Eigen::Index r = 0; r < kg.rows(); ++r)
          for (Eigen::Index c = 0; c < kg.cols(); ++c)
            hard(r, c) = kg(r, c) >= dl(r, c) ? 1.0 : 0.0;
        m_c = t.constant(hard);
      } else {
        m_c = t.sigmoid(
            t.scale(t.sub(keygate, delta), 1.0 / cfg.soft_mask_tau));
      }
      Tape::NodeId H_c = t.mul(m_c, values);
      H_l = t.mul(t.rsub_scalar(1.0, m_c), values);
      q = gru(t.colsum(H_c), q);
    }
  }

  // posterior heads, clamped log-variance
  Tape::NodeId mu_c =
      t.add(t.matmul(q, P("head_common.W_mu")), P("head_common.b_mu"));
  Tape::NodeId lv_c =
      t.clamp(t.add(t.matmul(q, P("head_common.W_lv")), P("head_common.b_lv")),
              -kLogVarClamp, kLogVarClamp);
  Tape::NodeId mu_l = t.add_rowvec(t.matmul(H_l, P("head_local.W_mu")),
                                   P("head_local.b_mu"));
  Tape::NodeId lv_l =
      t.clamp(t.add_rowvec(t.matmul(H_l, P("head_local.W_lv")),
                           P("head_local.b_lv")),
              -kLogVarClamp, kLogVarClamp);

  // reparameterized samples
  Tape::NodeId z_c = t.add(
      mu_c, t.mul(t.exp_fn(t.scale(lv_c, 0.5)), t.constant(noise.eps_c)));
  Tape::NodeId Z_l = t.add(
      mu_l, t.mul(t.exp_fn(t.scale(lv_l, 0.5)), t.constant(noise.eps_l)));

  // adjacency targets and BCE weights (diagonal weight zero on both sides)
  const Mat A = g.dense_adjacency();
  const double posw =
      opt.pos_weight > 0.0 ? opt.pos_weight : default_pos_weight(A);
  Mat w_pos = posw * A;
  Mat w_neg = Mat::Ones(n, n) - A;
  for (int i = 0; i < n; ++i) w_neg(i, i) = 0.0;
  const double slots = static_cast<double>(n) * (n - 1);

  const auto bce = [&](Tape::NodeId codes) {
    Tape::NodeId probs = t.clamp(t.sigmoid(t.matmul_nt(codes, codes)),
                                 kProbClamp, 1.0 - kProbClamp);
    Tape::NodeId term =
        t.add(t.mul(t.constant(w_pos), t.log_fn(probs)),
              t.mul(t.constant(w_neg), t.log_fn(t.rsub_scalar(1.0, probs))));
    return t.scale(t.sum_all(term), slots > 0.0 ? -1.0 / slots : 0.0);
  };
  const auto mlp = [&](Tape::NodeId x, const std::string& prefix) {
    Tape::NodeId h = t.tanh_fn(
        t.add_rowvec(t.matmul(x, P(prefix + ".W1")), P(prefix + ".b1")));
    return t.add_rowvec(t.matmul(h, P(prefix + ".W2")), P(prefix + ".b2"));
  };

  Tape::NodeId x_agg = t.hcat(t.row_broadcast(z_c, n), Z_l);
  Tape::NodeId l_agg = bce(mlp(x_agg, "agg_mlp"));

  const Mat reg_rows = cfg.reg_mode == RegMode::uniform
                           ? Mat(Mat::Zero(n, cfg.d_latent))
                           : noise.reg_rows;
  Tape::NodeId x_reg = t.hcat(t.row_broadcast(z_c, n), t.constant(reg_rows));
  Tape::NodeId l_reg = bce(mlp(x_reg, "reg_mlp"));

  const auto kl = [&](Tape::NodeId mu, Tape::NodeId lv) {
    Tape::NodeId ones = t.constant(Mat::Ones(t.value(mu).rows(),
                                             t.value(mu).cols()));
    Tape::NodeId elem =
        t.sub(t.sub(t.add(t.square(mu), t.exp_fn(lv)), ones), lv);
    return t.scale(t.sum_all(elem), 0.5);
  };
  Tape::NodeId kl_c = kl(mu_c, lv_c);
  Tape::NodeId kl_l = kl(mu_l, lv_l);

  Tape::NodeId total =
      t.add(t.add(l_agg, t.scale(kl_c, opt.beta)),
            t.add(t.scale(kl_l, opt.gamma), l_reg));

  LossParts parts;
  parts.l_agg = t.value(l_agg)(0, 0);
  parts.l_reg = t.value(l_reg)(0, 0);
  parts.l_c_prior = t.value(kl_c)(0, 0);
  parts.l_l_prior = t.value(kl_l)(0, 0);
  parts.total = t.value(total)(0, 0);
  check_finite(parts);

  t.backward(total);
  visit_params(grad, [&](const std::string& name, Mat& m) {
    const Tape::NodeId id = pid.at(name);
    if (t.has_grad(id)) m += t.grad(id);
  });
  return parts;
}

ModelParams zero_like(const ModelParams& params) {
  ModelParams z = params;
  visit_params(z, [](const std::string&, Mat& m) { m.setZero(); });
  return z;
}

}  // namespace gcfx
