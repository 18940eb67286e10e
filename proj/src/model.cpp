#include "gcfx/model.hpp"

#include <cmath>
#include <random>

#include "gcfx/rng.hpp"

namespace gcfx {

const char* mask_mode_name(MaskMode m) {
  return m == MaskMode::soft ? "soft" : "hard";
}

MaskMode mask_mode_from_name(const std::string& s) {
  if (s == "soft") return MaskMode::soft;
  if (s == "hard") return MaskMode::hard;
  throw Error(ErrorKind::config, "model",
              "unknown mask mode \"" + s + "\" (expected soft or hard)");
}

const char* reg_mode_name(RegMode m) {
  return m == RegMode::noise ? "noise" : "uniform";
}

RegMode reg_mode_from_name(const std::string& s) {
  if (s == "noise") return RegMode::noise;
  if (s == "uniform") return RegMode::uniform;
  throw Error(ErrorKind::config, "model",
              "unknown reg mode \"" + s + "\" (expected noise or uniform)");
}

void ModelConfig::validate() const {
  auto positive = [](int v, const char* what) {
    if (v <= 0)
      throw Error(ErrorKind::config, "model",
                  std::string(what) + " must be positive, got " +
                      std::to_string(v));
  };
  positive(d_in, "d_in");
  positive(d_hidden, "d_hidden");
  positive(d_latent, "d_latent");
  positive(d_dec, "d_dec");
  positive(n_layers, "n_layers");
  if (accum_iters < 0)
    throw Error(ErrorKind::config, "model",
                "accum_iters must be >= 0, got " + std::to_string(accum_iters));
  if (!(soft_mask_tau > 0))
    throw Error(ErrorKind::config, "model", "soft_mask_tau must be positive");
}

namespace {

Mat glorot(int rows, int cols, std::mt19937_64& eng) {
  const double limit = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> u(-limit, limit);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(eng);
  return m;
}

MlpParams init_mlp(int d_in, int d_hidden, int d_out, std::mt19937_64& eng) {
  MlpParams mlp;
  mlp.W1 = glorot(d_in, d_hidden, eng);
  mlp.b1 = Mat::Zero(1, d_hidden);
  mlp.W2 = glorot(d_hidden, d_out, eng);
  mlp.b2 = Mat::Zero(1, d_out);
  return mlp;
}

GruParams init_gru(int d, std::mt19937_64& eng) {
  GruParams g;
  g.Wr = glorot(d, d, eng);  g.Ur = glorot(d, d, eng);  g.br = Mat::Zero(1, d);
  g.Wu = glorot(d, d, eng);  g.Uu = glorot(d, d, eng);  g.bu = Mat::Zero(1, d);
  g.Wn = glorot(d, d, eng);  g.Un = glorot(d, d, eng);  g.bn = Mat::Zero(1, d);
  return g;
}

GaussianHead init_head(int d_in, int d_out, std::mt19937_64& eng) {
  GaussianHead h;
  h.W_mu = glorot(d_in, d_out, eng);
  h.b_mu = Mat::Zero(1, d_out);
  h.W_lv = glorot(d_in, d_out, eng);
  h.b_lv = Mat::Zero(1, d_out);
  return h;
}

}  // namespace

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  auto eng = rng::stream(seed, rng::kInitWeights);
  ModelParams p;
  for (int n = 0; n < cfg.n_layers; ++n)
    p.encoder.push_back(
        glorot(n == 0 ? cfg.d_in : cfg.d_hidden, cfg.d_hidden, eng));
  p.accum.Wk = glorot(cfg.d_hidden, cfg.d_hidden, eng);
  p.accum.Wq = glorot(cfg.d_hidden, cfg.d_hidden, eng);
  p.accum.Wv = glorot(cfg.d_hidden, cfg.d_hidden, eng);
  p.accum.fs = init_mlp(2 * cfg.d_hidden, cfg.d_hidden, cfg.d_hidden, eng);
  p.accum.gru = init_gru(cfg.d_hidden, eng);
  std::normal_distribution<double> tiny(0.0, 0.01);
  p.accum.q_init = Mat(1, cfg.d_hidden);
  for (int j = 0; j < cfg.d_hidden; ++j) p.accum.q_init(0, j) = tiny(eng);
  p.head_common = init_head(cfg.d_hidden, cfg.d_latent, eng);
  p.head_local = init_head(cfg.d_hidden, cfg.d_latent, eng);
  p.agg_mlp = init_mlp(2 * cfg.d_latent, cfg.d_dec, cfg.d_dec, eng);
  p.reg_mlp = init_mlp(2 * cfg.d_latent, cfg.d_dec, cfg.d_dec, eng);
  return p;
}

namespace {

template <class P, class F>
void visit_impl(P& p, F&& f) {
  for (std::size_t n = 0; n < p.encoder.size(); ++n)
    f("encoder.W" + std::to_string(n), p.encoder[n]);
  f("accum.Wk", p.accum.Wk);
  f("accum.Wq", p.accum.Wq);
  f("accum.Wv", p.accum.Wv);
  f("accum.fs.W1", p.accum.fs.W1);
  f("accum.fs.b1", p.accum.fs.b1);
  f("accum.fs.W2", p.accum.fs.W2);
  f("accum.fs.b2", p.accum.fs.b2);
  f("accum.gru.Wr", p.accum.gru.Wr);
  f("accum.gru.Ur", p.accum.gru.Ur);
  f("accum.gru.br", p.accum.gru.br);
  f("accum.gru.Wu", p.accum.gru.Wu);
  f("accum.gru.Uu", p.accum.gru.Uu);
  f("accum.gru.bu", p.accum.gru.bu);
  f("accum.gru.Wn", p.accum.gru.Wn);
  f("accum.gru.Un", p.accum.gru.Un);
  f("accum.gru.bn", p.accum.gru.bn);
  f("accum.q_init", p.accum.q_init);
  f("head_common.W_mu", p.head_common.W_mu);
  f("head_common.b_mu", p.head_common.b_mu);
  f("head_common.W_lv", p.head_common.W_lv);
  f("head_common.b_lv", p.head_common.b_lv);
  f("head_local.W_mu", p.head_local.W_mu);
  f("head_local.b_mu", p.head_local.b_mu);
  f("head_local.W_lv", p.head_local.W_lv);
  f("head_local.b_lv", p.head_local.b_lv);
  f("agg_mlp.W1", p.agg_mlp.W1);
  f("agg_mlp.b1", p.agg_mlp.b1);
  f("agg_mlp.W2", p.agg_mlp.W2);
  f("agg_mlp.b2", p.agg_mlp.b2);
  f("reg_mlp.W1", p.reg_mlp.W1);
  f("reg_mlp.b1", p.reg_mlp.b1);
  f("reg_mlp.W2", p.reg_mlp.W2);
  f("reg_mlp.b2", p.reg_mlp.b2);
}

}  // namespace

void visit_params(ModelParams& p,
                  const std::function<void(const std::string&, Mat&)>& f) {
  visit_impl(p, f);
}

void visit_params(const ModelParams& p,
                  const std::function<void(const std::string&, const Mat&)>& f) {
  visit_impl(p, f);
}

int param_count(const ModelParams& p) {
  int n = 0;
  visit_params(p, [&](const std::string&, const Mat& m) {
    n += static_cast<int>(m.size());
  });
  return n;
}

void check_params(const ModelParams& p, const ModelConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(p.encoder.size()) != cfg.n_layers)
    throw Error(ErrorKind::validation, "model",
                "encoder has " + std::to_string(p.encoder.size()) +
                    " layers, config says " + std::to_string(cfg.n_layers));
  auto expect = [](const Mat& m, int rows, int cols, const std::string& name) {
    if (m.rows() != rows || m.cols() != cols)
      throw Error(ErrorKind::validation, "model",
                  name + " is " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", expected " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    if (!m.allFinite())
      throw Error(ErrorKind::numeric, "model", name + " has non-finite entries");
  };
  for (int n = 0; n < cfg.n_layers; ++n)
    expect(p.encoder[n], n == 0 ? cfg.d_in : cfg.d_hidden, cfg.d_hidden,
           "encoder.W" + std::to_string(n));
  const int dh = cfg.d_hidden, dl = cfg.d_latent, dd = cfg.d_dec;
  expect(p.accum.Wk, dh, dh, "accum.Wk");
  expect(p.accum.Wq, dh, dh, "accum.Wq");
  expect(p.accum.Wv, dh, dh, "accum.Wv");
  expect(p.accum.fs.W1, 2 * dh, dh, "accum.fs.W1");
  expect(p.accum.fs.b1, 1, dh, "accum.fs.b1");
  expect(p.accum.fs.W2, dh, dh, "accum.fs.W2");
  expect(p.accum.fs.b2, 1, dh, "accum.fs.b2");
  for (const auto* g : {&p.accum.gru}) {
    expect(g->Wr, dh, dh, "accum.gru.Wr");
    expect(g->Ur, dh, dh, "accum.gru.Ur");
    expect(g->br, 1, dh, "accum.gru.br");
    expect(g->Wu, dh, dh, "accum.gru.Wu");
    expect(g->Uu, dh, dh, "accum.gru.Uu");
    expect(g->bu, 1, dh, "accum.gru.bu");
    expect(g->Wn, dh, dh, "accum.gru.Wn");
    expect(g->Un, dh, dh, "accum.gru.Un");
    expect(g->bn, 1, dh, "accum.gru.bn");
  }
  expect(p.accum.q_init, 1, dh, "accum.q_init");
  for (const auto& [head, name] :
       {std::pair{&p.head_common, "head_common"},
        std::pair{&p.head_local, "head_local"}}) {
    expect(head->W_mu, dh, dl, std::string(name) + ".W_mu");
    expect(head->b_mu, 1, dl, std::string(name) + ".b_mu");
    expect(head->W_lv, dh, dl, std::string(name) + ".W_lv");
    expect(head->b_lv, 1, dl, std::string(name) + ".b_lv");
  }
  expect(p.agg_mlp.W1, 2 * dl, dd, "agg_mlp.W1");
  expect(p.agg_mlp.b1, 1, dd, "agg_mlp.b1");
  expect(p.agg_mlp.W2, dd, dd, "agg_mlp.W2");
  expect(p.agg_mlp.b2, 1, dd, "agg_mlp.b2");
  expect(p.reg_mlp.W1, 2 * dl, dd, "reg_mlp.W1");
  expect(p.reg_mlp.b1, 1, dd, "reg_mlp.b1");
  expect(p.reg_mlp.W2, dd, dd, "reg_mlp.W2");
  expect(p.reg_mlp.b2, 1, dd, "reg_mlp.b2");
}

}  // namespace gcfx
