#include "gcfx/evaluation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "gcfx/accum.hpp"
#include "gcfx/encoder.hpp"
#include "gcfx/latent.hpp"
#include "gcfx/rng.hpp"

namespace gcfx {

const char* classifier_kind_name(ClassifierKind k) {
  return k == ClassifierKind::logistic ? "logistic" : "svm";
}

ClassifierKind classifier_kind_from_name(const std::string& s) {
  if (s == "logistic") return ClassifierKind::logistic;
  if (s == "svm") return ClassifierKind::svm;
  throw Error(ErrorKind::config, "evaluation",
              "unknown classifier \"" + s + "\" (expected logistic or svm)");
}

std::vector<EmbeddingRecord> embed_dataset(const std::vector<Graph>& dataset,
                                           const Checkpoint& ckpt,
                                           const EmbedOptions& opts) {
  const ModelConfig& mc = ckpt.config.model;
  std::vector<EmbeddingRecord> records;
  records.reserve(dataset.size());
  for (const Graph& g : dataset) {
    if (g.node_features.cols() != mc.d_in)
      throw Error(ErrorKind::config, "evaluation",
                  "graph " + std::to_string(g.graph_id) + " feature width " +
                      std::to_string(g.node_features.cols()) +
                      " does not match the checkpoint (" +
                      std::to_string(mc.d_in) + ")");
    const Mat H = encode(g, ckpt.params);
    const AccumResult ar =
        mc.accum_iters > 0
            ? run_accum(H, ckpt.params.accum, mc.accum_iters, MaskMode::hard,
                        mc.soft_mask_tau)
            : run_accum_random(
                  H, ckpt.params.accum,
                  rng::derive(opts.seed, rng::kEval,
                              static_cast<std::uint64_t>(g.graph_id)));
    const GaussianPosterior post_c =
        posterior_common(ar.h_c, ckpt.params.head_common);
    const std::vector<GaussianPosterior> post_l =
        posterior_locals(ar.H_l, ckpt.params.head_local);

    EmbeddingRecord rec;
    rec.graph_id = g.graph_id;
    rec.label = g.label;
    Mat Z_l(g.node_count, mc.d_latent);
    if (opts.deterministic) {
      rec.z_c = post_c.mu;
      for (int v = 0; v < g.node_count; ++v) Z_l.row(v) = post_l[v].mu;
    } else {
      auto eng = rng::stream(opts.seed, rng::kEval,
                             static_cast<std::uint64_t>(g.graph_id), 1);
      std::normal_distribution<double> n01(0.0, 1.0);
      Mat eps(1, mc.d_latent);
      for (int j = 0; j < mc.d_latent; ++j) eps(0, j) = n01(eng);
      rec.z_c = sample(post_c, eps);
      for (int v = 0; v < g.node_count; ++v) {
        for (int j = 0; j < mc.d_latent; ++j) eps(0, j) = n01(eng);
        Z_l.row(v) = sample(post_l[v], eps);
      }
    }
    rec.z_l_sum = Mat::Zero(1, mc.d_latent);
    for (int v = 0; v < g.node_count; ++v)
      for (int j = 0; j < mc.d_latent; ++j)
        rec.z_l_sum(0, j) += Z_l(v, j);
    if (opts.keep_nodes) rec.Z_l = std::move(Z_l);
    records.push_back(std::move(rec));
  }
  return records;
}

Mat combine_alpha(const EmbeddingRecord& rec, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw Error(ErrorKind::argument, "evaluation",
                "alpha must lie in [0,1], got " + std::to_string(alpha));
  if (rec.z_c.cols() != rec.z_l_sum.cols())
    throw Error(ErrorKind::argument, "evaluation",
                "z_c and z_l_sum widths differ");
  return alpha * rec.z_c + (1.0 - alpha) * rec.z_l_sum;
}

namespace {

void write_row(std::ostream& out, const Mat& row) {
  for (Eigen::Index j = 0; j < row.cols(); ++j) out << ", " << row(0, j);
}

}  // namespace

void write_embeddings(std::ostream& out,
                      const std::vector<EmbeddingRecord>& records) {
  const auto saved = out.precision(17);
  for (const auto& r : records) {
    out << r.graph_id << ", ";
    if (r.label) out << *r.label;
    write_row(out, r.z_c);
    write_row(out, r.z_l_sum);
    out << "\n";
  }
  out.precision(saved);
}

void write_node_embeddings(std::ostream& out,
                           const std::vector<EmbeddingRecord>& records) {
  const auto saved = out.precision(17);
  for (const auto& r : records) {
    if (r.Z_l.size() == 0)
      throw Error(ErrorKind::argument, "evaluation",
                  "per-node rows were not kept; embed with keep_nodes");
    for (Eigen::Index v = 0; v < r.Z_l.rows(); ++v) {
      out << r.graph_id << ", " << v;
      write_row(out, r.Z_l.row(v));
      out << "\n";
    }
  }
  out.precision(saved);
}

namespace {

Mat augment(const Mat& X) {
  Mat xa(X.rows(), X.cols() + 1);
  xa.leftCols(X.cols()) = X;
  xa.col(X.cols()).setOnes();
  return xa;
}

struct Scaler {
  Mat mean, sd;  // 1 x d
};

Scaler fit_scaler(const Mat& X) {
  Scaler s;
  s.mean = Mat::Zero(1, X.cols());
  s.sd = Mat::Zero(1, X.cols());
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) m += X(i, j);
    m /= n;
    double var = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double d = X(i, j) - m;
      var += d * d;
    }
    s.mean(0, j) = m;
    s.sd(0, j) = std::sqrt(var / n);
  }
  return s;
}

Mat apply_scaler(const Scaler& s, const Mat& X) {
  Mat out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double sd = s.sd(0, j);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      out(i, j) = sd >= 1e-12 ? (X(i, j) - s.mean(0, j)) / sd : 0.0;
  }
  return out;
}

double logistic_loss(const Mat& xa, const std::vector<int>& y, const Mat& W,
                     int K, double C) {
  const Eigen::Index n = xa.rows();
  const Mat logits = xa * W;  // n x (K-1), implicit zero column for class K-1
  double nll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double mx = 0.0;
    for (int k = 0; k < K - 1; ++k) mx = std::max(mx, logits(i, k));
    double lse = std::exp(-mx);  // reference class
    for (int k = 0; k < K - 1; ++k) lse += std::exp(logits(i, k) - mx);
    const double logz = mx + std::log(lse);
    const double own = y[i] == K - 1 ? 0.0 : logits(i, y[i]);
    nll += logz - own;
  }
  double pen = 0.0;
  for (Eigen::Index j = 0; j + 1 < W.rows(); ++j)  // bias row unpenalized
    for (Eigen::Index k = 0; k < W.cols(); ++k) pen += W(j, k) * W(j, k);
  return 0.5 * pen + C * nll;
}

Mat fit_logistic(const Mat& xa, const std::vector<int>& y, int K, double C,
                 const ClassifierConfig& cfg) {
  const Eigen::Index D = xa.cols();
  const int Km1 = K - 1;
  Mat W = Mat::Zero(D, Km1);
  double loss = logistic_loss(xa, y, W, K, C);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const Eigen::Index n = xa.rows();
    const Mat logits = xa * W;
    Mat P(n, K);
    for (Eigen::Index i = 0; i < n; ++i) {
      double mx = 0.0;
      for (int k = 0; k < Km1; ++k) mx = std::max(mx, logits(i, k));
      double z = std::exp(-mx);
      for (int k = 0; k < Km1; ++k) z += std::exp(logits(i, k) - mx);
      for (int k = 0; k < Km1; ++k) P(i, k) = std::exp(logits(i, k) - mx) / z;
      P(i, K - 1) = std::exp(-mx) / z;
    }

    Mat G = Mat::Zero(D, Km1);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int k = 0; k < Km1; ++k) {
        const double r = C * (P(i, k) - (y[i] == k ? 1.0 : 0.0));
        for (Eigen::Index j = 0; j < D; ++j) G(j, k) += r * xa(i, j);
      }
    for (Eigen::Index j = 0; j + 1 < D; ++j)
      for (int k = 0; k < Km1; ++k) G(j, k) += W(j, k);
    if (G.cwiseAbs().maxCoeff() < cfg.tol * std::max(1.0, C * n)) break;

    // dense Hessian over the flattened (class-major) parameter vector
    const Eigen::Index dim = D * Km1;
    Mat H = Mat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < n; ++i)
      for (int a = 0; a < Km1; ++a)
        for (int b = 0; b < Km1; ++b) {
          const double w =
              C * (P(i, a) * ((a == b ? 1.0 : 0.0) - P(i, b)));
          if (w == 0.0) continue;
          for (Eigen::Index j = 0; j < D; ++j) {
            const double wx = w * xa(i, j);
            for (Eigen::Index l = 0; l < D; ++l)
              H(a * D + j, b * D + l) += wx * xa(i, l);
          }
        }
    for (int a = 0; a < Km1; ++a)
      for (Eigen::Index j = 0; j < D; ++j)
        H(a * D + j, a * D + j) += (j + 1 < D) ? 1.0 : 1e-10;

    Eigen::VectorXd g(dim);
    for (int a = 0; a < Km1; ++a)
      for (Eigen::Index j = 0; j < D; ++j) g(a * D + j) = G(j, a);
    const Eigen::VectorXd step = H.ldlt().solve(g);

    Mat delta(D, Km1);
    for (int a = 0; a < Km1; ++a)
      for (Eigen::Index j = 0; j < D; ++j) delta(j, a) = step(a * D + j);

    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      const Mat trial = W - scale * delta;
      const double trial_loss = logistic_loss(xa, y, trial, K, C);
      if (trial_loss <= loss) {
        W = trial;
        loss = trial_loss;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  Mat full(D, K);
  full.leftCols(Km1) = W;
  full.col(K - 1).setZero();
  return full;
}

double svm_loss(const Mat& xa, const std::vector<double>& y,
                const Eigen::VectorXd& w, double C) {
  double pen = 0.0;
  for (Eigen::Index j = 0; j + 1 < w.size(); ++j) pen += w(j) * w(j);
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < xa.rows(); ++i) {
    const double m = 1.0 - y[i] * xa.row(i).dot(w);
    if (m > 0) hinge += m * m;
  }
  return 0.5 * pen + C * hinge;
}

Eigen::VectorXd fit_svm_binary(const Mat& xa, const std::vector<double>& y,
                               double C, const ClassifierConfig& cfg) {
  const Eigen::Index D = xa.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(D);
  double loss = svm_loss(xa, y, w, C);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(D);
    Mat H = Mat::Zero(D, D);
    for (Eigen::Index j = 0; j + 1 < D; ++j) {
      g(j) = w(j);
      H(j, j) = 1.0;
    }
    H(D - 1, D - 1) = 1e-10;
    for (Eigen::Index i = 0; i < xa.rows(); ++i) {
      const double s = xa.row(i).dot(w);
      const double m = 1.0 - y[i] * s;
      if (m <= 0) continue;
      for (Eigen::Index j = 0; j < D; ++j) {
        g(j) += -2.0 * C * m * y[i] * xa(i, j);
        for (Eigen::Index l = 0; l < D; ++l)
          H(j, l) += 2.0 * C * xa(i, j) * xa(i, l);
      }
    }
    if (g.cwiseAbs().maxCoeff() < cfg.tol * std::max(1.0, C * xa.rows()))
      break;
    const Eigen::VectorXd step = H.ldlt().solve(g);
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      const Eigen::VectorXd trial = w - scale * step;
      const double trial_loss = svm_loss(xa, y, trial, C);
      if (trial_loss <= loss) {
        w = trial;
        loss = trial_loss;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;
  }
  return w;
}

Mat fit_svm(const Mat& xa, const std::vector<int>& y, int K, double C,
            const ClassifierConfig& cfg) {
  Mat W(xa.cols(), K);
  std::vector<double> pm(y.size());
  for (int k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < y.size(); ++i) pm[i] = y[i] == k ? 1.0 : -1.0;
    W.col(k) = fit_svm_binary(xa, pm, C, cfg);
  }
  return W;
}

}  // namespace

Mat fit_linear_classifier(const Mat& X, const std::vector<int>& y, int K,
                          double C, const ClassifierConfig& cfg) {
  if (X.rows() != static_cast<Eigen::Index>(y.size()))
    throw Error(ErrorKind::argument, "evaluation",
                "feature/label row count mismatch");
  if (K < 2)
    throw Error(ErrorKind::argument, "evaluation",
                "need at least 2 classes, got " + std::to_string(K));
  for (int label : y)
    if (label < 0 || label >= K)
      throw Error(ErrorKind::argument, "evaluation",
                  "label " + std::to_string(label) + " outside [0, " +
                      std::to_string(K) + ")");
  if (!(C > 0))
    throw Error(ErrorKind::argument, "evaluation", "C must be positive");
  const Mat xa = augment(X);
  return cfg.kind == ClassifierKind::logistic ? fit_logistic(xa, y, K, C, cfg)
                                              : fit_svm(xa, y, K, C, cfg);
}

std::vector<int> predict_linear(const Mat& W, const Mat& X) {
  const Mat scores = augment(X) * W;
  std::vector<int> out(scores.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k)
      if (scores(i, k) > scores(i, best)) best = static_cast<int>(k);
    out[i] = best;
  }
  return out;
}

namespace {

double accuracy_of(const std::vector<int>& pred, const std::vector<int>& truth) {
  int hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) ++hit;
  return pred.empty() ? 0.0 : static_cast<double>(hit) / pred.size();
}

int distinct_count(const std::vector<int>& y) {
  std::vector<int> s = y;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return static_cast<int>(s.size());
}

/// Round-robin fold ids over label groups with one continuing pointer, like
/// make_folds but over an arbitrary index set. Falls back to unstratified
/// when a class is smaller than k.
std::vector<int> assign_folds(const std::vector<int>& labels, int k,
                              std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  std::mt19937_64 eng(seed);
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[labels[i]].push_back(i);
  bool stratify = true;
  for (const auto& [label, members] : groups)
    if (static_cast<int>(members.size()) < k) stratify = false;

  std::vector<int> folds(n, 0);
  int fold = 0;
  if (stratify) {
    for (auto& [label, members] : groups) {
      std::shuffle(members.begin(), members.end(), eng);
      for (int idx : members) {
        folds[idx] = fold;
        fold = (fold + 1) % k;
      }
    }
  } else {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), eng);
    for (int idx : order) {
      folds[idx] = fold;
      fold = (fold + 1) % k;
    }
  }
  return folds;
}

struct InnerChoice {
  double c = 1.0;
  double accuracy = 0.0;
  bool any_valid = false;
};

InnerChoice select_c(const Mat& X, const std::vector<int>& y, int K,
                     const ClassifierConfig& cfg, std::uint64_t seed) {
  const int k = std::min<int>(cfg.inner_folds, static_cast<int>(y.size()));
  InnerChoice choice;
  if (k < 2) return choice;
  const std::vector<int> folds = assign_folds(y, k, seed);
  for (double c : cfg.c_grid) {
    double acc_sum = 0.0;
    int acc_count = 0;
    for (int g = 0; g < k; ++g) {
      std::vector<int> tr, va;
      for (std::size_t i = 0; i < y.size(); ++i)
        (folds[i] == g ? va : tr).push_back(static_cast<int>(i));
      if (tr.empty() || va.empty()) continue;
      std::vector<int> ytr, yva;
      Mat xtr(tr.size(), X.cols()), xva(va.size(), X.cols());
      for (std::size_t i = 0; i < tr.size(); ++i) {
        xtr.row(i) = X.row(tr[i]);
        ytr.push_back(y[tr[i]]);
      }
      for (std::size_t i = 0; i < va.size(); ++i) {
        xva.row(i) = X.row(va[i]);
        yva.push_back(y[va[i]]);
      }
      if (distinct_count(ytr) < 2) continue;
      const Scaler sc = fit_scaler(xtr);
      const Mat W = fit_linear_classifier(apply_scaler(sc, xtr), ytr, K, c, cfg);
      acc_sum += accuracy_of(predict_linear(W, apply_scaler(sc, xva)), yva);
      ++acc_count;
    }
    if (acc_count == 0) continue;
    const double acc = acc_sum / acc_count;
    if (!choice.any_valid || acc > choice.accuracy) {
      choice.any_valid = true;
      choice.accuracy = acc;
      choice.c = c;
    }
  }
  return choice;
}

}  // namespace

EvalReport cross_validate(const std::vector<EmbeddingRecord>& records,
                          const DatasetSplit& split, double alpha,
                          const ClassifierConfig& cfg) {
  const int n = static_cast<int>(records.size());
  if (n == 0)
    throw Error(ErrorKind::argument, "evaluation", "no records");
  if (static_cast<int>(split.fold_assignments.size()) != n)
    throw Error(ErrorKind::argument, "evaluation",
                "split covers " + std::to_string(split.fold_assignments.size()) +
                    " graphs, got " + std::to_string(n) + " records");
  if (cfg.c_grid.empty())
    throw Error(ErrorKind::argument, "evaluation", "empty C grid");

  std::map<int, int> label_index;
  for (const auto& r : records) {
    if (!r.label)
      throw Error(ErrorKind::argument, "evaluation",
                  "record for graph " + std::to_string(r.graph_id) +
                      " is unlabeled");
    label_index.emplace(*r.label, 0);
  }
  int next = 0;
  for (auto& [label, idx] : label_index) idx = next++;
  const int K = next;
  if (K < 2)
    throw Error(ErrorKind::argument, "evaluation",
                "need at least 2 classes, dataset has " + std::to_string(K));

  Mat X(n, records[0].z_c.cols());
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) {
    X.row(i) = combine_alpha(records[i], alpha);
    y[i] = label_index.at(*records[i].label);
  }

  EvalReport report;
  report.alpha_used = alpha;
  report.classifier = classifier_kind_name(cfg.kind);

  double acc_sum = 0.0, inner_sum = 0.0;
  int valid = 0;
  std::vector<double> valid_accs;
  for (int f = 0; f < split.k; ++f) {
    std::vector<int> tr, te;
    for (int i = 0; i < n; ++i)
      (split.fold_assignments[i] == f ? te : tr).push_back(i);
    FoldOutcome fo;
    fo.fold = f;
    if (te.empty()) continue;  // split with fewer occupied folds than k

    std::vector<int> ytr, yte;
    Mat xtr(tr.size(), X.cols()), xte(te.size(), X.cols());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      xtr.row(i) = X.row(tr[i]);
      ytr.push_back(y[tr[i]]);
    }
    for (std::size_t i = 0; i < te.size(); ++i) {
      xte.row(i) = X.row(te[i]);
      yte.push_back(y[te[i]]);
    }

    if (tr.empty() || distinct_count(ytr) < 2) {
      fo.valid = false;
      ++report.invalid_folds;
      report.folds.push_back(std::move(fo));
      continue;
    }

    const InnerChoice choice =
        select_c(xtr, ytr, K, cfg,
                 rng::derive(split.seed, rng::kEval,
                             static_cast<std::uint64_t>(f)));
    fo.chosen_c = choice.c;
    fo.inner_accuracy = choice.accuracy;

    const Scaler sc = fit_scaler(xtr);
    fo.feature_mean = sc.mean;
    fo.feature_sd = sc.sd;
    const Mat W =
        fit_linear_classifier(apply_scaler(sc, xtr), ytr, K, choice.c, cfg);
    fo.accuracy = accuracy_of(predict_linear(W, apply_scaler(sc, xte)), yte);

    acc_sum += fo.accuracy;
    inner_sum += fo.inner_accuracy;
    valid_accs.push_back(fo.accuracy);
    ++valid;
    report.folds.push_back(std::move(fo));
  }

  if (valid > 0) {
    report.mean_accuracy = acc_sum / valid;
    report.inner_selection_accuracy = inner_sum / valid;
    double var = 0.0;
    for (double a : valid_accs) {
      const double d = a - report.mean_accuracy;
      var += d * d;
    }
    report.std_accuracy = std::sqrt(var / valid);
  }
  return report;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(std::min(1.0, i * 0.05));
  return grid;
}

AlphaSweepResult alpha_grid_search(const std::vector<EmbeddingRecord>& records,
                                   const DatasetSplit& split,
                                   const std::vector<double>& grid,
                                   const ClassifierConfig& cfg) {
  if (grid.empty())
    throw Error(ErrorKind::argument, "evaluation", "empty alpha grid");
  for (double a : grid)
    if (!(a >= 0.0 && a <= 1.0))
      throw Error(ErrorKind::argument, "evaluation",
                  "alpha grid entry " + std::to_string(a) + " outside [0,1]");

  AlphaSweepResult out;
  bool first = true;
  for (double a : grid) {
    EvalReport rep = cross_validate(records, split, a, cfg);
    if (first || rep.inner_selection_accuracy >
                     out.report_at_best.inner_selection_accuracy) {
      out.best_alpha = a;
      out.report_at_best = rep;
    }
    if (first || rep.mean_accuracy > out.best_test_accuracy) {
      out.best_alpha_on_test = a;
      out.best_test_accuracy = rep.mean_accuracy;
    }
    out.curve.emplace_back(a, std::move(rep));
    first = false;
  }
  return out;
}

}  // namespace gcfx
