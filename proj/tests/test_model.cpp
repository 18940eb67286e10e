#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gcfx/accum.hpp"
#include "gcfx/decoders.hpp"
#include "gcfx/encoder.hpp"
#include "gcfx/latent.hpp"
#include "gcfx/rng.hpp"
#include "gcfx/tape.hpp"

using namespace gcfx;

namespace {

Graph path3(int d_in) {
  Graph g;
  g.graph_id = 0;
  g.node_count = 3;
  g.edges = {{0, 1}, {1, 2}};
  g.node_features = Mat::Zero(3, d_in);
  for (int i = 0; i < 3; ++i) g.node_features(i, i % d_in) = 1.0;
  return g;
}

ModelConfig tiny_config(int d_in = 3, int d_hidden = 4) {
  ModelConfig c;
  c.d_in = d_in;
  c.d_hidden = d_hidden;
  c.d_latent = d_hidden;
  c.d_dec = d_hidden;
  c.n_layers = 2;
  c.accum_iters = 2;
  return c;
}

Mat random_mat(int r, int c, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = u(eng);
  return m;
}

void zero_mlp(MlpParams& m) {
  m.W1.setZero();
  m.b1.setZero();
  m.W2.setZero();
  m.b2.setZero();
}

double sigma(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("normalized adjacency of a 3-path matches the closed form") {
  const Graph g = path3(3);
  const Mat a_hat = normalized_adjacency(g.dense_adjacency());
  const double s6 = 1.0 / std::sqrt(6.0);
  Mat want(3, 3);
  want << 0.5, s6, 0.0, s6, 1.0 / 3.0, s6, 0.0, s6, 0.5;
  CHECK((a_hat - want).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("isolated node through one identity layer") {
  ModelConfig cfg = tiny_config(2, 2);
  cfg.n_layers = 1;
  ModelParams p = init_params(cfg, 1);
  p.encoder[0] = Mat::Identity(2, 2);

  Graph g;
  g.graph_id = 0;
  g.node_count = 1;
  g.node_features = Mat(1, 2);
  g.node_features << 1.0, -1.0;

  const Mat h = encode(g, p);
  CHECK(h(0, 0) == 1.0);  // a_hat is the 1x1 identity, relu drops the -1
  CHECK(h(0, 1) == 0.0);
}

TEST_CASE("zero features stay zero through the encoder") {
  const ModelConfig cfg = tiny_config();
  const ModelParams p = init_params(cfg, 3);
  Graph g = path3(3);
  g.node_features.setZero();
  CHECK(encode(g, p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("batched encoding is bitwise equal to per-graph encoding") {
  const ModelConfig cfg = tiny_config();
  const ModelParams p = init_params(cfg, 4);

  Graph a = path3(3);
  Graph b;
  b.graph_id = 1;
  b.node_count = 4;
  b.edges = {{0, 1}, {0, 2}, {0, 3}, {2, 3}};
  b.node_features = random_mat(4, 3, 5).cwiseAbs();

  const GraphBatch batch = GraphBatch::from_graphs({a, b});
  const Mat H = encode(batch, p);
  const Mat ha = encode(a, p);
  const Mat hb = encode(b, p);
  CHECK((batch.rows_of(H, 0) - ha).cwiseAbs().maxCoeff() == 0.0);
  CHECK((batch.rows_of(H, 1) - hb).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("encoder is permutation equivariant") {
  const ModelConfig cfg = tiny_config();
  const ModelParams p = init_params(cfg, 6);
  Graph g;
  g.graph_id = 0;
  g.node_count = 4;
  g.edges = {{0, 1}, {1, 2}, {1, 3}};
  g.node_features = random_mat(4, 3, 7);

  const std::vector<int> perm = {2, 0, 3, 1};  // perm[old] = new
  Graph pg;
  pg.graph_id = 0;
  pg.node_count = 4;
  for (auto [u, v] : g.edges) pg.edges.push_back({perm[u], perm[v]});
  pg.edges = canonical_edges(pg.edges);
  pg.node_features = Mat(4, 3);
  for (int v = 0; v < 4; ++v) pg.node_features.row(perm[v]) = g.node_features.row(v);

  const Mat h = encode(g, p);
  const Mat hp = encode(pg, p);
  for (int v = 0; v < 4; ++v)
    CHECK((hp.row(perm[v]) - h.row(v)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("similarity scores live strictly inside (0,1)") {
  const ModelConfig cfg = tiny_config();
  ModelParams p = init_params(cfg, 8);
  const Mat H = random_mat(5, 4, 9);
  const Mat q = random_mat(1, 4, 10);
  const Mat delta = similarity_scores(H, q, p.accum);
  CHECK(delta.rows() == 5);
  CHECK(delta.cols() == 4);
  CHECK(delta.minCoeff() > 0.0);
  CHECK(delta.maxCoeff() < 1.0);

  // zeroed scorer pins every threshold at one half
  zero_mlp(p.accum.fs);
  const Mat half = similarity_scores(H, q, p.accum);
  CHECK((half.array() - 0.5).abs().maxCoeff() == 0.0);
}

TEST_CASE("hard masks threshold the key gate, boundary inclusive") {
  const ModelConfig cfg = tiny_config(3, 3);
  ModelParams p = init_params(cfg, 11);
  p.accum.Wk = Mat::Identity(3, 3);
  Mat H(1, 3);
  H << 0.3, -0.2, 0.0;
  const Mat delta = Mat::Constant(1, 3, 0.5);
  const Mat m = compute_masks(H, delta, p.accum);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == 0.0);
  CHECK(m(0, 2) == 1.0);  // sigmoid(0) = 0.5 >= 0.5

  // soft masks approach the hard ones as tau shrinks, except exactly on the
  // boundary where the relaxation sits at one half for every tau
  const Mat soft = compute_masks_soft(H, delta, p.accum, 1e-3);
  CHECK(std::abs(soft(0, 0) - 1.0) < 1e-6);
  CHECK(std::abs(soft(0, 1) - 0.0) < 1e-6);
  CHECK(soft(0, 2) == 0.5);
}

TEST_CASE("split partitions the value projection bitwise under 0/1 masks") {
  const ModelConfig cfg = tiny_config();
  ModelParams p = init_params(cfg, 12);
  const Mat H = random_mat(6, 4, 13);
  const Mat m = random_mask(6, 4, 99);
  Mat H_c, H_l;
  split_features(H, m, p.accum, H_c, H_l);
  const Mat hv = la::matmul(H, p.accum.Wv);
  CHECK(((H_c + H_l) - hv).cwiseAbs().maxCoeff() == 0.0);
  CHECK((H_c.cwiseProduct(H_l)).cwiseAbs().maxCoeff() == 0.0);

  // worked 1x2 example with the identity value projection
  ModelParams q = init_params(tiny_config(2, 2), 14);
  q.accum.Wv = Mat::Identity(2, 2);
  Mat h(1, 2), mask(1, 2);
  h << 2.0, -3.0;
  mask << 1.0, 0.0;
  split_features(h, mask, q.accum, H_c, H_l);
  CHECK(H_c(0, 0) == 2.0);
  CHECK(H_c(0, 1) == 0.0);
  CHECK(H_l(0, 0) == 0.0);
  CHECK(H_l(0, 1) == -3.0);
}

TEST_CASE("gru step matches a scalar hand computation") {
  GruParams g;
  g.Wr = Mat::Constant(1, 1, 0.4);
  g.Ur = Mat::Constant(1, 1, -0.3);
  g.br = Mat::Constant(1, 1, 0.1);
  g.Wu = Mat::Constant(1, 1, -0.2);
  g.Uu = Mat::Constant(1, 1, 0.5);
  g.bu = Mat::Constant(1, 1, -0.1);
  g.Wn = Mat::Constant(1, 1, 0.7);
  g.Un = Mat::Constant(1, 1, 0.2);
  g.bn = Mat::Constant(1, 1, 0.05);
  const double x = 0.9, q = -0.6;

  const double r = sigma(x * 0.4 + q * -0.3 + 0.1);
  const double u = sigma(x * -0.2 + q * 0.5 + -0.1);
  const double n = std::tanh(x * 0.7 + r * (q * 0.2 + 0.05));
  const double want = (1.0 - u) * q + u * n;

  const Mat out = gru_step(Mat::Constant(1, 1, x), Mat::Constant(1, 1, q), g);
  CHECK(out(0, 0) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("a saturated-off update gate leaves the state unchanged") {
  const ModelConfig cfg = tiny_config();
  ModelParams p = init_params(cfg, 15);
  p.accum.gru.bu = Mat::Constant(1, 4, -40.0);
  const Mat x = random_mat(1, 4, 16);
  const Mat q = random_mat(1, 4, 17);
  CHECK((gru_step(x, q, p.accum.gru) - q).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("accumulate sums patch contributions then steps the gru") {
  const ModelConfig cfg = tiny_config();
  const ModelParams p = init_params(cfg, 18);
  const Mat H_c = random_mat(3, 4, 19);
  CommonQueryState prev;
  prev.q_c = random_mat(1, 4, 20);
  prev.iteration = 0;

  const CommonQueryState next = accumulate(H_c, prev, p.accum);
  CHECK(next.iteration == 1);
  Mat q_update = Mat::Zero(1, 4);
  for (int v = 0; v < 3; ++v) q_update += H_c.row(v);
  CHECK((next.q_c - gru_step(q_update, prev.q_c, p.accum.gru))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // single node: the update is that node's common part itself
  const Mat one = random_mat(1, 4, 21);
  const CommonQueryState single = accumulate(one, prev, p.accum);
  CHECK((single.q_c - gru_step(one, prev.q_c, p.accum.gru))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("run_accum produces a full trace and respects M") {
  const ModelConfig cfg = tiny_config();
  const ModelParams p = init_params(cfg, 22);
  const Mat H = random_mat(5, 4, 23);

  const AccumResult r1 = run_accum(H, p.accum, 1, MaskMode::hard, cfg.soft_mask_tau);
  CHECK(r1.trace.size() == 2);
  CHECK((r1.trace[0].q_c - p.accum.q_init).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.h_c - r1.trace[1].q_c).cwiseAbs().maxCoeff() == 0.0);

  const AccumResult r3 = run_accum(H, p.accum, 3, MaskMode::hard, cfg.soft_mask_tau);
  CHECK(r3.trace.size() == 4);
  CHECK(r3.H_l.rows() == 5);
  CHECK(r3.H_c.rows() == 5);
  CHECK_THROWS_AS(run_accum(H, p.accum, 0, MaskMode::hard, cfg.soft_mask_tau),
                  Error);
}

TEST_CASE("common factor is permutation invariant under hard masks") {
  const ModelConfig cfg = tiny_config();
  const ModelParams p = init_params(cfg, 24);
  const Mat H = random_mat(6, 4, 25);
  const std::vector<int> perm = {3, 5, 0, 1, 4, 2};
  Mat Hp(6, 4);
  for (int v = 0; v < 6; ++v) Hp.row(perm[v]) = H.row(v);

  const AccumResult a = run_accum(H, p.accum, 3, MaskMode::hard, 0.1);
  const AccumResult b = run_accum(Hp, p.accum, 3, MaskMode::hard, 0.1);
  CHECK((a.h_c - b.h_c).cwiseAbs().maxCoeff() < 1e-12);
  for (int v = 0; v < 6; ++v)
    CHECK((b.H_l.row(perm[v]) - a.H_l.row(v)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("random-filter baseline is seeded and reproducible") {
  const Mat m1 = random_mask(40, 8, 123);
  const Mat m2 = random_mask(40, 8, 123);
  CHECK((m1 - m2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((random_mask(40, 8, 124) - m1).cwiseAbs().maxCoeff() > 0.0);
  for (int i = 0; i < m1.size(); ++i) {
    const double v = m1.data()[i];
    CHECK((v == 0.0 || v == 1.0));
  }

  const ModelConfig cfg = tiny_config();
  const ModelParams p = init_params(cfg, 26);
  const Mat H = random_mat(5, 4, 27);
  const AccumResult a = run_accum_random(H, p.accum, 55);
  const AccumResult b = run_accum_random(H, p.accum, 55);
  CHECK((a.h_c - b.h_c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.h_c - run_accum_with_mask(H, p.accum, random_mask(5, 4, 55)).h_c)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("posterior heads, sampling and the KL closed form") {
  const ModelConfig cfg = tiny_config(3, 2);
  ModelParams p = init_params(cfg, 28);
  p.head_common.W_mu.setZero();
  p.head_common.b_mu.setZero();
  p.head_common.W_lv.setZero();
  p.head_common.b_lv.setZero();

  const Mat h = random_mat(1, 2, 29);
  const GaussianPosterior prior = posterior_common(h, p.head_common);
  CHECK(prior.mu.cwiseAbs().maxCoeff() == 0.0);
  CHECK(prior.log_var.cwiseAbs().maxCoeff() == 0.0);
  CHECK(kl_to_standard_normal(prior) == 0.0);

  // z = mu with zero noise; mu 1, var 4, eps 0.5 gives exactly 2
  p.head_common.b_mu = Mat::Constant(1, 2, 1.0);
  p.head_common.b_lv = Mat::Constant(1, 2, std::log(4.0));
  const GaussianPosterior q = posterior_common(h, p.head_common);
  CHECK((sample(q, Mat::Zero(1, 2)) - q.mu).cwiseAbs().maxCoeff() == 0.0);
  const Mat z = sample(q, Mat::Constant(1, 2, 0.5));
  CHECK(z(0, 0) == doctest::Approx(2.0).epsilon(1e-12));

  // KL hand values
  GaussianPosterior unit;
  unit.mu = Mat::Constant(1, 1, 1.0);
  unit.log_var = Mat::Zero(1, 1);
  CHECK(kl_to_standard_normal(unit) == doctest::Approx(0.5).epsilon(1e-12));
  GaussianPosterior wide;
  wide.mu = Mat::Zero(1, 1);
  wide.log_var = Mat::Constant(1, 1, std::log(4.0));
  CHECK(kl_to_standard_normal(wide) ==
        doctest::Approx(0.5 * (4.0 - 1.0 - std::log(4.0))).epsilon(1e-12));

  for (int trial = 0; trial < 20; ++trial) {
    GaussianPosterior r;
    r.mu = random_mat(1, 5, 30 + trial);
    r.log_var = random_mat(1, 5, 60 + trial);
    CHECK(kl_to_standard_normal(r) >= 0.0);
  }

  // log-var clamp saturates
  p.head_common.b_lv = Mat::Constant(1, 2, 50.0);
  CHECK(posterior_common(h, p.head_common).log_var(0, 0) == kLogVarClamp);

  // per-row local head agrees with the common head applied row-wise
  const Mat H_l = random_mat(3, 2, 31);
  const auto locals = posterior_locals(H_l, p.head_local);
  REQUIRE(locals.size() == 3);
  for (int v = 0; v < 3; ++v) {
    const GaussianPosterior row = posterior_common(H_l.row(v), p.head_local);
    CHECK((locals[v].mu - row.mu).cwiseAbs().maxCoeff() == 0.0);
    CHECK((locals[v].log_var - row.log_var).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("zeroed aggregated decoder emits one-half everywhere") {
  const ModelConfig cfg = tiny_config(3, 2);
  ModelParams p = init_params(cfg, 32);
  zero_mlp(p.agg_mlp);
  const Mat z_c = random_mat(1, 2, 33);
  const Mat Z_l = random_mat(4, 2, 34);
  const Mat probs = decode_agg(z_c, Z_l, p.agg_mlp);
  CHECK(probs.rows() == 4);
  CHECK((probs.array() - 0.5).abs().maxCoeff() == 0.0);
}

TEST_CASE("decoder probabilities are symmetric and follow the dot product") {
  const ModelConfig cfg = tiny_config(3, 2);
  ModelParams p = init_params(cfg, 35);
  const Mat probs =
      decode_agg(random_mat(1, 2, 36), random_mat(5, 2, 37), p.agg_mlp);
  CHECK((probs - probs.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // constant code [1, 1]: every pair's probability is sigmoid(2)
  zero_mlp(p.agg_mlp);
  p.agg_mlp.b2(0, 0) = 1.0;
  p.agg_mlp.b2(0, 1) = 1.0;
  const Mat two = decode_agg(Mat::Zero(1, 2), Mat::Zero(2, 2), p.agg_mlp);
  CHECK(two(0, 1) == doctest::Approx(sigma(2.0)).epsilon(1e-12));
  CHECK(two(0, 1) == doctest::Approx(0.5 + 0.5 * std::tanh(1.0)).epsilon(1e-9));
}

TEST_CASE("uniform regularising decoder collapses to one code") {
  const ModelConfig cfg = tiny_config(3, 2);
  const ModelParams p = init_params(cfg, 38);
  const Mat z_c = random_mat(1, 2, 39);
  const Mat noise = random_mat(4, 2, 40);
  const Mat probs = decode_reg(z_c, noise, p.reg_mlp, RegMode::uniform);
  CHECK((probs.array() - probs(0, 0)).abs().maxCoeff() < 1e-15);

  const Mat noisy = decode_reg(z_c, noise, p.reg_mlp, RegMode::noise);
  CHECK(noisy.rows() == 4);
  CHECK((noisy - noisy.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reconstruction loss hand values") {
  Mat a2(2, 2);
  a2 << 0, 1, 1, 0;
  const Mat half = Mat::Constant(2, 2, 0.5);
  CHECK(reconstruction_loss(half, a2, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const Mat p8 = Mat::Constant(2, 2, 0.8);
  CHECK(reconstruction_loss(p8, a2, 1.0) ==
        doctest::Approx(-std::log(0.8)).epsilon(1e-12));

  // default positive weight: (#non-edges / #edges) over ordered pairs
  Mat a3(3, 3);
  a3 << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(default_pos_weight(a3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(default_pos_weight(Mat::Zero(3, 3)) == 1.0);
  CHECK(default_pos_weight(a2) == 0.0);

  // weighted: loss = mean over 6 slots of w_uv * bce
  const Mat p3 = Mat::Constant(3, 3, 0.5);
  const double want =
      (4.0 * 0.5 * std::log(2.0) + 2.0 * std::log(2.0)) / 6.0;
  CHECK(reconstruction_loss(p3, a3, 0.0) ==
        doctest::Approx(want).epsilon(1e-12));

  // clamping keeps saturated probabilities finite
  const Mat ones = Mat::Ones(3, 3);
  const double sat = reconstruction_loss(ones, a3, 1.0);
  CHECK(std::isfinite(sat));
  const double want_sat = (4.0 * -std::log(1.0 - kProbClamp) +
                           2.0 * -std::log(kProbClamp)) /
                          6.0;
  CHECK(sat == doctest::Approx(want_sat).epsilon(1e-9));

  // fewer than two nodes: nothing to reconstruct
  CHECK(reconstruction_loss(Mat::Constant(1, 1, 0.5), Mat::Zero(1, 1)) == 0.0);
}

TEST_CASE("parameter plumbing: init, visitation and validation") {
  const ModelConfig cfg = tiny_config();
  const ModelParams a = init_params(cfg, 7);
  const ModelParams b = init_params(cfg, 7);
  const ModelParams c = init_params(cfg, 8);

  double diff_same = 0.0, diff_other = 0.0;
  std::vector<std::string> names;
  visit_params(a, [&](const std::string& name, const Mat&) {
    names.push_back(name);
  });
  CHECK(names.size() >= 20);
  CHECK(names[0] == "encoder.W0");

  int idx = 0;
  visit_params(b, [&](const std::string& name, const Mat& m) {
    CHECK(name == names[idx]);
    ++idx;
  });

  visit_params(a, [&](const std::string& name, const Mat& m) {
    // pair up against b and c by name
    const ModelParams* others[2] = {&b, &c};
    double* sinks[2] = {&diff_same, &diff_other};
    for (int t = 0; t < 2; ++t) {
      visit_params(*others[t], [&](const std::string& n2, const Mat& m2) {
        if (n2 == name)
          *sinks[t] = std::max(*sinks[t], (m - m2).cwiseAbs().maxCoeff());
      });
    }
  });
  CHECK(diff_same == 0.0);
  CHECK(diff_other > 0.0);

  CHECK(param_count(a) > 0);
  CHECK_NOTHROW(check_params(a, cfg));
  ModelParams broken = a;
  broken.accum.Wk = Mat::Zero(2, 2);
  CHECK_THROWS_AS(check_params(broken, cfg), Error);
  broken = a;
  broken.encoder[0](0, 0) = std::nan("");
  CHECK_THROWS_AS(check_params(broken, cfg), Error);

  ModelConfig bad = cfg;
  bad.d_hidden = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = cfg;
  bad.accum_iters = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
}
