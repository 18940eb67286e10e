#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "gcfx/accum.hpp"
#include "gcfx/analysis.hpp"
#include "gcfx/encoder.hpp"
#include "gcfx/latent.hpp"
#include "gcfx/svg_plot.hpp"

using namespace gcfx;
namespace fs = std::filesystem;

namespace {

Checkpoint tiny_checkpoint(std::uint64_t seed, int accum_iters = 3) {
  Checkpoint ckpt;
  ckpt.config.model.d_in = 3;
  ckpt.config.model.d_hidden = 4;
  ckpt.config.model.d_latent = 4;
  ckpt.config.model.d_dec = 4;
  ckpt.config.model.n_layers = 2;
  ckpt.config.model.accum_iters = accum_iters;
  ckpt.params = init_params(ckpt.config.model, seed);
  ckpt.featurization.mode = FeatureMode::degree_onehot;
  ckpt.featurization.d_in = 3;
  ckpt.featurization.degree_cap = 2;
  return ckpt;
}

Graph random_graph(int nodes, std::uint64_t seed, int id = 0) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Graph g;
  g.graph_id = id;
  g.node_count = nodes;
  for (int u = 0; u < nodes; ++u)
    for (int v = u + 1; v < nodes; ++v)
      if (coin(eng) < 0.4) g.edges.push_back({u, v});
  g.label = id % 2;
  return g;
}

std::vector<Graph> random_dataset(int count, int nodes, std::uint64_t seed) {
  std::vector<Graph> out;
  for (int i = 0; i < count; ++i)
    out.push_back(random_graph(nodes, seed + i, i));
  featurize(out, FeatureMode::degree_onehot, 2);
  return out;
}

Mat random_mat(int r, int c, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(eng);
  return m;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("spearman hand values") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}).value == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}).value == doctest::Approx(-1.0));

  // d^2 = (0,1,1,1,1): rho = 1 - 6*4/(5*24) = 0.8
  const SpearmanResult r = spearman({1, 2, 3, 4, 5}, {1, 3, 2, 5, 4});
  CHECK_FALSE(r.degenerate);
  CHECK(r.value == doctest::Approx(0.8).epsilon(1e-12));

  // ties take average ranks: x ranks (1.5, 1.5, 3)
  const SpearmanResult t = spearman({1, 1, 2}, {1, 2, 3});
  CHECK(t.value == doctest::Approx(1.5 / std::sqrt(1.5 * 2.0)).epsilon(1e-12));

  // rank correlation only sees order
  const std::vector<double> x = {0.3, -1.2, 2.5, 0.9};
  const std::vector<double> y = {1.0, 0.2, 0.5, 2.0};
  std::vector<double> ex;
  for (double v : x) ex.push_back(std::exp(v));
  CHECK(spearman(x, y).value == doctest::Approx(spearman(ex, y).value));

  const SpearmanResult c = spearman({2, 2, 2}, {1, 2, 3});
  CHECK(c.degenerate);
  CHECK(c.value == 0.0);

  CHECK_THROWS_AS(spearman({1}, {1}), Error);
  CHECK_THROWS_AS(spearman({1, 2}, {1, 2, 3}), Error);
}

TEST_CASE("mapd hand values and invariances") {
  Mat two(2, 2);
  two << 0, 0, 2, 2;
  CHECK(mapd(two) == doctest::Approx(2.0).epsilon(1e-12));

  Mat three(3, 1);
  three << 0, 1, 2;
  CHECK(mapd(three) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  Mat same(4, 3);
  same.setConstant(0.7);
  CHECK(mapd(same) == 0.0);

  const Mat X = random_mat(5, 3, 7);
  const double base = mapd(X);
  CHECK(mapd(X + Mat::Constant(5, 3, 11.0)) ==
        doctest::Approx(base).epsilon(1e-12));
  CHECK(mapd(3.0 * X) == doctest::Approx(3.0 * base).epsilon(1e-12));

  // duplicating every row rescales by 2(P-1)/(2P-1): the new zero-distance
  // pairs dilute the mean while every original distance appears four times
  Mat dup(10, 3);
  dup.topRows(5) = X;
  dup.bottomRows(5) = X;
  const int P = 5;
  CHECK(mapd(dup) ==
        doctest::Approx(base * 2.0 * (P - 1) / (2.0 * P - 1)).epsilon(1e-12));

  CHECK_THROWS_AS(mapd(Mat::Zero(1, 3)), Error);
}

TEST_CASE("correlation trace shape, determinism and degenerate counting") {
  const Checkpoint ckpt = tiny_checkpoint(3);
  std::vector<Graph> one = {random_graph(7, 100)};
  featurize(one, FeatureMode::degree_onehot, 2);

  const CorrelationTrace tr = correlation_vs_iterations(one[0], ckpt, 4, 17);
  REQUIRE(tr.corr_local.size() == 5);
  REQUIRE(tr.corr_common_patch.size() == 5);
  REQUIRE(tr.corr_decoder.size() == 5);
  for (int i = 0; i <= 4; ++i) {
    CHECK(tr.corr_local[i] >= 0.0);
    CHECK(tr.corr_local[i] <= 1.0);
    CHECK(tr.corr_decoder[i] <= 1.0);
  }

  const CorrelationTrace tr2 = correlation_vs_iterations(one[0], ckpt, 4, 17);
  for (int i = 0; i <= 4; ++i)
    CHECK(tr.corr_local[i] == tr2.corr_local[i]);

  // iteration 0 reruns the seeded random filter: a new seed moves only it
  const CorrelationTrace tr3 = correlation_vs_iterations(one[0], ckpt, 4, 18);
  for (int i = 1; i <= 4; ++i) {
    CHECK(tr.corr_local[i] == tr3.corr_local[i]);
    CHECK(tr.corr_common_patch[i] == tr3.corr_common_patch[i]);
  }

  // constant z_c makes every comparison degenerate
  Checkpoint flat = ckpt;
  flat.params.head_common.W_mu.setZero();
  flat.params.head_common.b_mu.setConstant(0.4);
  const CorrelationTrace ftr = correlation_vs_iterations(one[0], flat, 2, 17);
  CHECK(ftr.degenerate_points > 0);
  for (double v : ftr.corr_local) CHECK(v == 0.0);

  CHECK_THROWS_AS(correlation_vs_iterations(one[0], ckpt, -1, 17), Error);
}

TEST_CASE("mapd report separates common and local patch spreads") {
  const Checkpoint ckpt = tiny_checkpoint(5);
  std::vector<Graph> graphs = random_dataset(8, 6, 200);
  {
    Graph lone;
    lone.graph_id = 99;
    lone.node_count = 1;
    lone.label = 0;
    graphs.push_back(lone);
    std::vector<Graph> tail = {graphs.back()};
    featurize(tail, FeatureMode::degree_onehot, 2);
    graphs.back() = tail[0];
  }

  const MapdReport rep = mapd_report(graphs, ckpt);
  CHECK(rep.skipped_single_node == 1);
  REQUIRE(rep.graph_ids.size() == 8);
  REQUIRE(rep.per_graph_common.size() == 8);
  double mean_c = 0.0, mean_l = 0.0;
  int lower = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(rep.per_graph_common[i] >= 0.0);
    CHECK(rep.per_graph_local[i] >= 0.0);
    mean_c += rep.per_graph_common[i] / 8;
    mean_l += rep.per_graph_local[i] / 8;
    lower += rep.per_graph_common[i] < rep.per_graph_local[i];
  }
  CHECK(rep.mapd_common_mean == doctest::Approx(mean_c).epsilon(1e-12));
  CHECK(rep.mapd_local_mean == doctest::Approx(mean_l).epsilon(1e-12));
  CHECK(rep.fraction_common_lower ==
        doctest::Approx(double(lower) / 8).epsilon(1e-12));

  const MapdReport rep2 = mapd_report(graphs, ckpt);
  CHECK(rep.mapd_common_mean == rep2.mapd_common_mean);
}

TEST_CASE("correlation matrix across graphs") {
  const Mat X = random_mat(200, 3, 9);
  const CorrelationMatrixResult self = correlation_matrix(X, X);
  CHECK(self.grid.rows() == 3);
  CHECK(self.grid.cols() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(self.grid(i, i) == doctest::Approx(1.0).epsilon(1e-12));

  // independent dimensions: correlations hover near zero
  const CorrelationMatrixResult indep =
      correlation_matrix(random_mat(1000, 4, 10), random_mat(1000, 4, 11));
  CHECK(indep.grid.maxCoeff() < 0.15);
  CHECK(indep.grid.mean() < 0.1);
  CHECK(indep.grid.minCoeff() >= 0.0);
  CHECK(indep.degenerate_entries == 0);

  // a constant column degenerates its row/column to zero
  Mat with_const = random_mat(50, 2, 12);
  with_const.col(1).setConstant(3.0);
  const CorrelationMatrixResult deg = correlation_matrix(with_const, with_const);
  CHECK(deg.degenerate_entries > 0);
  CHECK(deg.grid(1, 1) == 0.0);

  const CorrelationMatrixResult halves =
      correlation_matrix_split_half(random_mat(100, 6, 13));
  CHECK(halves.grid.rows() == 3);
  CHECK(halves.grid.cols() == 3);
  const Mat Y = random_mat(100, 6, 13);
  const CorrelationMatrixResult manual =
      correlation_matrix(Y.leftCols(3), Y.middleCols(3, 3));
  CHECK((halves.grid - manual.grid).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(correlation_matrix(Mat::Zero(1, 2), Mat::Zero(1, 2)), Error);
  CHECK_THROWS_AS(
      correlation_matrix(Mat::Zero(5, 2), Mat::Zero(4, 2)), Error);
}

TEST_CASE("svg artifacts are written and well formed") {
  const fs::path dir = fs::temp_directory_path() / "gcfx_svg_test";
  fs::create_directories(dir);

  const std::vector<double> xs = {0, 1, 2, 3};
  svg_line_plot((dir / "line.svg").string(), "title <&>", "iterations", xs,
                {{"series a", {0.1, 0.4, 0.2, 0.9}},
                 {"series b", {0.8, 0.6, 0.5, 0.3}}});
  const std::string line = slurp(dir / "line.svg");
  CHECK(line.find("<svg") != std::string::npos);
  CHECK(line.find("</svg>") != std::string::npos);
  CHECK(line.find("polyline") != std::string::npos);
  CHECK(line.find("series a") != std::string::npos);
  CHECK(line.find("&lt;&amp;&gt;") != std::string::npos);  // escaped title

  Mat grid(2, 3);
  grid << 0.0, 0.5, 1.0, 0.25, 0.75, 2.0;
  svg_heatmap((dir / "heat.svg").string(), "heat", grid);
  const std::string heat = slurp(dir / "heat.svg");
  CHECK(heat.find("<svg") != std::string::npos);
  std::size_t rects = 0, pos = 0;
  while ((pos = heat.find("<rect", pos)) != std::string::npos) {
    ++rects;
    ++pos;
  }
  CHECK(rects >= 6);

  CHECK_THROWS_AS(
      svg_line_plot((dir / "no" / "such" / "dir.svg").string(), "t", "x", xs,
                    {{"a", {1, 2, 3, 4}}}),
      Error);
  CHECK_THROWS_AS(svg_line_plot((dir / "bad.svg").string(), "t", "x", xs,
                                {{"a", {1, 2}}}),
                  Error);
  fs::remove_all(dir);
}
