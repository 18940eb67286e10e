#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcfx/checkpoint.hpp"
#include "gcfx/graph.hpp"

namespace gcfx {

struct EmbeddingRecord {
  int graph_id = 0;
  Mat z_c;       // 1 x d_latent
  Mat z_l_sum;   // 1 x d_latent
  Mat Z_l;       // |V| x d_latent, kept only when requested
  std::optional<int> label;
};

struct EmbedOptions {
  bool deterministic = true;   // posterior means; otherwise sampled
  bool keep_nodes = false;     // retain per-node Z_l rows
  std::uint64_t seed = 1;      // stochastic mode and M=0 masks
};

/// Inference on frozen weights: encoder + ACCUM with hard masks (M = 0 uses
/// the seeded random-filter baseline), then posterior means or samples.
std::vector<EmbeddingRecord> embed_dataset(const std::vector<Graph>& dataset,
                                           const Checkpoint& ckpt,
                                           const EmbedOptions& opts);

/// alpha * z_c + (1 - alpha) * z_l_sum. alpha must lie in [0,1].
Mat combine_alpha(const EmbeddingRecord& rec, double alpha);

/// `graph_id, label, z_c[0..d), z_l_sum[0..d)` per line.
void write_embeddings(std::ostream& out,
                      const std::vector<EmbeddingRecord>& records);
/// `graph_id, node, z_l[0..d)` per line; requires keep_nodes.
void write_node_embeddings(std::ostream& out,
                           const std::vector<EmbeddingRecord>& records);

enum class ClassifierKind { logistic, svm };

const char* classifier_kind_name(ClassifierKind k);
ClassifierKind classifier_kind_from_name(const std::string& s);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::logistic;
  std::vector<double> c_grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  int inner_folds = 3;
  int max_iters = 60;
  double tol = 1e-9;
};

struct FoldOutcome {
  int fold = 0;
  bool valid = true;           // false: single-class training portion
  double accuracy = 0.0;
  double chosen_c = 0.0;
  double inner_accuracy = 0.0; // inner-CV accuracy of the chosen C
  Mat feature_mean;            // train-side standardization stats
  Mat feature_sd;
};

struct EvalReport {
  std::vector<FoldOutcome> folds;
  double mean_accuracy = 0.0;          // over valid folds
  double std_accuracy = 0.0;           // population std over valid folds
  double inner_selection_accuracy = 0.0;
  double alpha_used = 1.0;
  std::string classifier;
  int invalid_folds = 0;
};

/// Table-1 protocol on features alpha*z_c + (1-alpha)*z_l_sum: per outer
/// fold, pick C from the grid by stratified inner CV on the training portion
/// (standardization refit inside every split), then score the held-out fold.
EvalReport cross_validate(const std::vector<EmbeddingRecord>& records,
                          const DatasetSplit& split, double alpha,
                          const ClassifierConfig& cfg);

struct AlphaSweepResult {
  double best_alpha = 0.0;             // chosen on inner-validation accuracy
  EvalReport report_at_best;
  std::vector<std::pair<double, EvalReport>> curve;
  double best_alpha_on_test = 0.0;     // paper-style bracketed value
  double best_test_accuracy = 0.0;
};

AlphaSweepResult alpha_grid_search(const std::vector<EmbeddingRecord>& records,
                                   const DatasetSplit& split,
                                   const std::vector<double>& grid,
                                   const ClassifierConfig& cfg);

std::vector<double> default_alpha_grid();  // 0, 0.05, ..., 1.0

/// Multi-class linear models, exposed for the synthetic probe and tests.
/// Labels must be 0..K-1. Returned matrix stacks per-class weights so that
/// predict() is an argmax over X_aug * W columns.
Mat fit_linear_classifier(const Mat& X, const std::vector<int>& y, int K,
                          double C, const ClassifierConfig& cfg);
std::vector<int> predict_linear(const Mat& W, const Mat& X);

}  // namespace gcfx
