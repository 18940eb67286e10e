#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "gcfx/featurize.hpp"
#include "gcfx/graph.hpp"
#include "gcfx/tu_io.hpp"

using namespace gcfx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("gcfx_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// two graphs: an edge pair and a 3-node path
void write_fixture(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir / name);
  write_file(dir / name / (name + "_A.txt"),
             "1, 2\n2, 1\n3, 4\n4, 3\n4, 5\n5, 4\n");
  write_file(dir / name / (name + "_graph_indicator.txt"), "1\n1\n2\n2\n2\n");
  write_file(dir / name / (name + "_graph_labels.txt"), "1\n-1\n");
  write_file(dir / name / (name + "_node_labels.txt"), "0\n0\n1\n2\n1\n");
}

Graph path3() {
  Graph g;
  g.graph_id = 0;
  g.node_count = 3;
  g.edges = {{0, 1}, {1, 2}};
  g.node_features = Mat::Identity(3, 3);
  g.label = 0;
  return g;
}

}  // namespace

TEST_CASE("graph validation catches malformed inputs") {
  Graph g = path3();
  CHECK_NOTHROW(g.validate());

  Graph bad = g;
  bad.edges = {{1, 0}, {1, 2}};  // not u < v
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = g;
  bad.edges = {{0, 1}, {0, 1}, {1, 2}};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = g;
  bad.edges = {{0, 3}};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = g;
  bad.edges = {{1, 1}};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = g;
  bad.node_features = Mat::Zero(2, 3);
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = g;
  bad.node_labels = std::vector<int>{0, 1};
  CHECK_THROWS_AS(bad.validate(), Error);

  try {
    bad.validate();
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("graph_data") != std::string::npos);
  }
}

TEST_CASE("canonical_edges orients, sorts, dedups and drops self-loops") {
  const auto edges =
      canonical_edges({{2, 1}, {1, 2}, {3, 3}, {0, 4}, {4, 0}, {1, 2}});
  const std::vector<std::pair<int, int>> want = {{0, 4}, {1, 2}};
  CHECK(edges == want);
}

TEST_CASE("dense adjacency and degrees") {
  const Graph g = path3();
  const Mat a = g.dense_adjacency();
  Mat want(3, 3);
  want << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK((a - want).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.degrees() == std::vector<int>{1, 2, 1});
}

TEST_CASE("tu parser reads the documented layout") {
  TempDir tmp("parse");
  write_fixture(tmp.path, "TOY");
  const auto graphs = parse_tu_dataset(tmp.path.string(), "TOY");

  REQUIRE(graphs.size() == 2);
  CHECK(graphs[0].node_count == 2);
  CHECK(graphs[0].edges == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(graphs[0].label == 1);
  CHECK(graphs[0].node_labels == std::vector<int>{0, 0});
  CHECK(graphs[1].node_count == 3);
  CHECK(graphs[1].edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(graphs[1].label == -1);
  CHECK(graphs[1].node_labels == std::vector<int>{1, 2, 1});

  // basename form
  const auto again = parse_tu_dataset((tmp.path / "TOY").string());
  CHECK(again.size() == 2);
  CHECK(again[1].edges == graphs[1].edges);
}

TEST_CASE("tu parser reports file and line on malformed input") {
  TempDir tmp("badparse");
  write_fixture(tmp.path, "TOY");

  SUBCASE("missing indicator") {
    fs::remove(tmp.path / "TOY" / "TOY_graph_indicator.txt");
    CHECK_THROWS_AS(parse_tu_dataset(tmp.path.string(), "TOY"), Error);
  }
  SUBCASE("garbage edge line") {
    write_file(tmp.path / "TOY" / "TOY_A.txt", "1, 2\nbogus\n");
    try {
      parse_tu_dataset(tmp.path.string(), "TOY");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::format);
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }
  SUBCASE("edge endpoint out of range") {
    write_file(tmp.path / "TOY" / "TOY_A.txt", "1, 2\n2, 1\n1, 9\n");
    try {
      parse_tu_dataset(tmp.path.string(), "TOY");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::validation);
      CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
  }
  SUBCASE("cross-graph edge") {
    write_file(tmp.path / "TOY" / "TOY_A.txt", "1, 3\n3, 1\n");
    CHECK_THROWS_AS(parse_tu_dataset(tmp.path.string(), "TOY"), Error);
  }
  SUBCASE("non-contiguous indicator") {
    write_file(tmp.path / "TOY" / "TOY_graph_indicator.txt", "1\n1\n3\n3\n3\n");
    CHECK_THROWS_AS(parse_tu_dataset(tmp.path.string(), "TOY"), Error);
  }
  SUBCASE("label count mismatch") {
    write_file(tmp.path / "TOY" / "TOY_graph_labels.txt", "1\n");
    CHECK_THROWS_AS(parse_tu_dataset(tmp.path.string(), "TOY"), Error);
  }
}

TEST_CASE("edgeless singleton graphs survive a round trip") {
  TempDir tmp("singleton");
  fs::create_directories(tmp.path / "ONE");
  write_file(tmp.path / "ONE" / "ONE_A.txt", "");
  write_file(tmp.path / "ONE" / "ONE_graph_indicator.txt", "1\n2\n2\n");
  const auto graphs = parse_tu_dataset(tmp.path.string(), "ONE");
  REQUIRE(graphs.size() == 2);
  CHECK(graphs[0].node_count == 1);
  CHECK(graphs[0].edge_count() == 0);
  CHECK_FALSE(graphs[0].label.has_value());
}

TEST_CASE("save then parse reproduces the dataset") {
  TempDir tmp("roundtrip");
  write_fixture(tmp.path, "TOY");
  auto graphs = parse_tu_dataset(tmp.path.string(), "TOY");

  save_tu_dataset(graphs, tmp.path.string(), "COPY");
  const auto copy = parse_tu_dataset(tmp.path.string(), "COPY");
  REQUIRE(copy.size() == graphs.size());
  for (std::size_t i = 0; i < copy.size(); ++i) {
    CHECK(copy[i].node_count == graphs[i].node_count);
    CHECK(copy[i].edges == graphs[i].edges);
    CHECK(copy[i].label == graphs[i].label);
    CHECK(copy[i].node_labels == graphs[i].node_labels);
  }
}

TEST_CASE("node-label one-hot featurization") {
  TempDir tmp("feat");
  write_fixture(tmp.path, "TOY");
  auto graphs = parse_tu_dataset(tmp.path.string(), "TOY");
  const FeaturizeInfo info = featurize(graphs, FeatureMode::node_label_onehot);

  CHECK(info.d_in == 3);  // labels {0, 1, 2}
  Mat want0(2, 3);
  want0 << 1, 0, 0, 1, 0, 0;
  CHECK((graphs[0].node_features - want0).cwiseAbs().maxCoeff() == 0.0);
  Mat want1(3, 3);
  want1 << 0, 1, 0, 0, 0, 1, 0, 1, 0;
  CHECK((graphs[1].node_features - want1).cwiseAbs().maxCoeff() == 0.0);

  // a label outside the vocabulary is rejected by featurize_with
  Graph alien = graphs[0];
  alien.node_labels = std::vector<int>{0, 7};
  std::vector<Graph> more = {alien};
  CHECK_THROWS_AS(featurize_with(more, info), Error);
}

TEST_CASE("degree one-hot featurization clamps at the cap") {
  Graph star;
  star.graph_id = 0;
  star.node_count = 7;
  for (int leaf = 1; leaf < 7; ++leaf) star.edges.push_back({0, leaf});
  std::vector<Graph> graphs = {star};
  const FeaturizeInfo info =
      featurize(graphs, FeatureMode::degree_onehot, 4);

  CHECK(info.d_in == 5);  // buckets 0..3 plus the >= 4 catch-all
  CHECK(graphs[0].node_features(0, 4) == 1.0);  // hub degree 6 clamped
  CHECK(graphs[0].node_features(1, 1) == 1.0);
  CHECK(graphs[0].node_features.row(0).sum() == 1.0);

  // default cap is the dataset max degree
  std::vector<Graph> path = {path3()};
  path[0].node_features = Mat();
  const FeaturizeInfo dinfo = featurize(path, FeatureMode::degree_onehot);
  CHECK(dinfo.d_in == 3);
  Mat want(3, 3);
  want << 0, 1, 0, 0, 0, 1, 0, 1, 0;
  CHECK((path[0].node_features - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("batching preserves content") {
  TempDir tmp("batch");
  write_fixture(tmp.path, "TOY");
  auto graphs = parse_tu_dataset(tmp.path.string(), "TOY");
  featurize(graphs, FeatureMode::node_label_onehot);

  const GraphBatch batch = GraphBatch::from_graphs(graphs);
  CHECK(batch.total_nodes == 5);
  CHECK(batch.node_offsets == std::vector<int>{0, 2, 5});

  const Mat feats = batch.batch_features();
  CHECK((batch.rows_of(feats, 0) - graphs[0].node_features)
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((batch.rows_of(feats, 1) - graphs[1].node_features)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  const Mat adj = batch.batch_adjacency();
  CHECK(adj.rows() == 5);
  CHECK(adj.block(0, 2, 2, 3).cwiseAbs().maxCoeff() == 0.0);  // no cross edges
  CHECK((adj.block(2, 2, 3, 3) - graphs[1].dense_adjacency())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  std::vector<Graph> empty_graph = {Graph{}};
  CHECK_THROWS_AS(GraphBatch::from_graphs(empty_graph), Error);
}

TEST_CASE("fold assignment is balanced, stratified and reproducible") {
  // ten singletons, k = 10: exactly one graph per fold
  std::vector<Graph> ten;
  for (int i = 0; i < 10; ++i) {
    Graph g;
    g.graph_id = i;
    g.node_count = 1;
    g.node_features = Mat::Ones(1, 1);
    g.label = i % 2;
    ten.push_back(g);
  }
  const DatasetSplit s10 = make_folds(ten, 10, 7);
  std::set<int> seen(s10.fold_assignments.begin(), s10.fold_assignments.end());
  CHECK(seen.size() == 10);
  CHECK(s10.stratification_fallback);  // five per class, fewer than k

  // 20 graphs, two balanced classes, k = 10: each fold holds one per class
  std::vector<Graph> twenty;
  for (int i = 0; i < 20; ++i) {
    Graph g;
    g.graph_id = i;
    g.node_count = 1;
    g.node_features = Mat::Ones(1, 1);
    g.label = i < 10 ? 0 : 1;
    twenty.push_back(g);
  }
  const DatasetSplit s20 = make_folds(twenty, 10, 7);
  std::map<int, std::map<int, int>> per_fold_class;
  for (int i = 0; i < 20; ++i)
    per_fold_class[s20.fold_assignments[i]][*twenty[i].label]++;
  for (const auto& [fold, counts] : per_fold_class) {
    CHECK(counts.at(0) == 1);
    CHECK(counts.at(1) == 1);
  }

  const DatasetSplit again = make_folds(twenty, 10, 7);
  CHECK(again.fold_assignments == s20.fold_assignments);
  const DatasetSplit other = make_folds(twenty, 10, 8);
  CHECK(other.fold_assignments != s20.fold_assignments);

  // a class rarer than k forces the unstratified fallback
  std::vector<Graph> sparse = twenty;
  for (int i = 0; i < 17; ++i) sparse[i].label = 0;
  for (int i = 17; i < 20; ++i) sparse[i].label = 1;
  const DatasetSplit fb = make_folds(sparse, 10, 7);
  CHECK(fb.stratification_fallback);
  CHECK_FALSE(fb.stratified);
  std::map<int, int> sizes;
  for (int f : fb.fold_assignments) sizes[f]++;
  for (const auto& [fold, n] : sizes) CHECK(n == 2);

  CHECK_THROWS_AS(make_folds(ten, 1, 7), Error);
  CHECK_THROWS_AS(make_folds(ten, 11, 7), Error);
}
