// deepGCFX command-line driver: train, embed, eval-graph, analyze,
// synth-gen, gradcheck. One --seed drives every stochastic choice.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gcfx/analysis.hpp"
#include "gcfx/checkpoint.hpp"
#include "gcfx/evaluation.hpp"
#include "gcfx/featurize.hpp"
#include "gcfx/rng.hpp"
#include "gcfx/svg_plot.hpp"
#include "gcfx/synthetic.hpp"
#include "gcfx/trainer.hpp"
#include "gcfx/tu_io.hpp"

namespace fs = std::filesystem;
using namespace gcfx;

namespace {

struct CommonOpts {
  std::string dataset;
  std::string features = "auto";
  int degree_cap = -1;
  std::uint64_t seed = 1;
};

std::vector<Graph> load_featurized(const CommonOpts& o, FeaturizeInfo* info) {
  std::vector<Graph> graphs = parse_tu_dataset(o.dataset);
  FeatureMode mode;
  if (o.features == "auto") {
    const bool labeled = !graphs.empty() && graphs.front().node_labels.has_value();
    mode = labeled ? FeatureMode::node_label_onehot : FeatureMode::degree_onehot;
  } else {
    mode = feature_mode_from_name(o.features);
  }
  FeaturizeInfo fi = featurize(graphs, mode, o.degree_cap);
  if (info) *info = fi;
  return graphs;
}

std::vector<Graph> load_for_checkpoint(const std::string& dataset,
                                       const Checkpoint& ckpt) {
  std::vector<Graph> graphs = parse_tu_dataset(dataset);
  featurize_with(graphs, ckpt.featurization);
  return graphs;
}

std::string provenance_of(const CLI::App& app) {
  std::ostringstream out;
  out << app.config_to_str(true, true);
  return out.str();
}

void write_with_provenance(const std::string& path,
                           const std::string& provenance,
                           const std::string& body) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cli", "cannot write " + path);
  std::istringstream lines(provenance);
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << "\n";
  out << body;
}

std::string report_lines(const EvalReport& rep, const std::string& name) {
  std::ostringstream out;
  out.precision(4);
  out << name << ": accuracy " << 100.0 * rep.mean_accuracy << " +/- "
      << 100.0 * rep.std_accuracy << " (alpha " << rep.alpha_used
      << ", classifier " << rep.classifier;
  if (rep.invalid_folds > 0) out << ", " << rep.invalid_folds << " invalid folds";
  out << ")\n";
  for (const auto& f : rep.folds) {
    out << "  fold " << f.fold;
    if (!f.valid) {
      out << ": invalid (single-class training portion)\n";
      continue;
    }
    out << ": accuracy " << f.accuracy << ", C " << f.chosen_c
        << ", inner accuracy " << f.inner_accuracy << "\n";
  }
  return out.str();
}

int run_train(const CLI::App& app, CommonOpts& common, TrainConfig& tc,
              const std::string& mask_mode, const std::string& reg_mode,
              const std::string& out_path) {
  tc.model.mask_mode = mask_mode_from_name(mask_mode);
  tc.model.reg_mode = reg_mode_from_name(reg_mode);
  tc.seed = common.seed;

  FeaturizeInfo fi;
  const std::vector<Graph> graphs = load_featurized(common, &fi);
  tc.model.d_in = fi.d_in;
  std::cout << "dataset " << common.dataset << ": " << graphs.size()
            << " graphs, features " << feature_mode_name(fi.mode) << " (d_in "
            << fi.d_in << ")\n";

  const TrainResult result = train(graphs, tc);
  for (const EpochLog& log : result.history)
    std::cout << "epoch " << log.epoch << "/" << tc.epochs << " total "
              << log.mean.total << " agg " << log.mean.l_agg << " kl_c "
              << log.mean.l_c_prior << " kl_l " << log.mean.l_l_prior
              << " reg " << log.mean.l_reg << "\n";

  Checkpoint ckpt;
  ckpt.config = tc;
  ckpt.params = result.params;
  ckpt.featurization = fi;
  ckpt.epoch = result.epochs_run;
  if (!result.history.empty()) ckpt.last_loss = result.history.back().mean;
  ckpt.provenance = provenance_of(app);
  save_checkpoint(out_path, ckpt);
  std::cout << "checkpoint written to " << out_path << "\n";

  if (result.aborted_nan) {
    std::cerr << "training diverged (non-finite loss); checkpoint holds the "
                 "last healthy epoch ("
              << result.epochs_run << ")\n";
    return 1;
  }
  return 0;
}

int run_embed(const CLI::App& app, const CommonOpts& common,
              const std::string& ckpt_path, const std::string& out_path,
              const std::string& nodes_path, bool stochastic) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const std::vector<Graph> graphs = load_for_checkpoint(common.dataset, ckpt);
  EmbedOptions opts;
  opts.deterministic = !stochastic;
  opts.keep_nodes = !nodes_path.empty();
  opts.seed = common.seed;
  const std::vector<EmbeddingRecord> records =
      embed_dataset(graphs, ckpt, opts);

  std::ostringstream body;
  write_embeddings(body, records);
  write_with_provenance(out_path, provenance_of(app), body.str());
  std::cout << records.size() << " embeddings written to " << out_path << "\n";

  if (!nodes_path.empty()) {
    std::ostringstream nodes;
    write_node_embeddings(nodes, records);
    write_with_provenance(nodes_path, provenance_of(app), nodes.str());
    std::cout << "per-node rows written to " << nodes_path << "\n";
  }
  return 0;
}

int run_eval(const CLI::App& app, const CommonOpts& common,
             const std::string& ckpt_path, double alpha, bool sweep,
             const std::string& classifier, int folds,
             const std::string& out_path) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const std::vector<Graph> graphs = load_for_checkpoint(common.dataset, ckpt);
  EmbedOptions eopts;
  eopts.seed = common.seed;
  const std::vector<EmbeddingRecord> records =
      embed_dataset(graphs, ckpt, eopts);
  const DatasetSplit split = make_folds(graphs, folds, common.seed);
  if (split.stratification_fallback)
    std::cout << "note: a class has fewer members than folds; "
                 "using unstratified folds\n";

  ClassifierConfig cc;
  cc.kind = classifier_kind_from_name(classifier);

  std::ostringstream body;
  if (!sweep) {
    const EvalReport rep = cross_validate(records, split, alpha, cc);
    body << report_lines(rep, "deepGCFX");
  } else {
    const AlphaSweepResult res =
        alpha_grid_search(records, split, default_alpha_grid(), cc);
    body << report_lines(res.report_at_best, "deepGCFX++ (nested selection)");
    body.precision(4);
    body << "deepGCFX++ best-on-test: accuracy "
         << 100.0 * res.best_test_accuracy << " (" << res.best_alpha_on_test
         << ")\n";
    body << "alpha curve (alpha, accuracy, std, inner accuracy):\n";
    for (const auto& [a, rep] : res.curve)
      body << "  " << a << ", " << rep.mean_accuracy << ", "
           << rep.std_accuracy << ", " << rep.inner_selection_accuracy << "\n";
  }
  std::cout << body.str();
  if (!out_path.empty()) {
    write_with_provenance(out_path, provenance_of(app), body.str());
    std::cout << "report written to " << out_path << "\n";
  }
  return 0;
}

int run_analyze(const CLI::App& app, const CommonOpts& common,
                const std::string& ckpt_path, const std::string& out_dir,
                bool trace, bool mapd_flag, bool corrmatrix,
                const std::string& corr_mode, int m_max, int graph_index) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const std::vector<Graph> graphs = load_for_checkpoint(common.dataset, ckpt);
  if (graphs.empty())
    throw Error(ErrorKind::validation, "cli", "dataset is empty");
  fs::create_directories(out_dir);
  const std::string provenance = provenance_of(app);
  const auto out_file = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };

  if (trace) {
    if (m_max < 0) m_max = std::max(ckpt.config.model.accum_iters, 1);
    if (graph_index < 0 || graph_index >= static_cast<int>(graphs.size()))
      throw Error(ErrorKind::argument, "cli",
                  "graph index " + std::to_string(graph_index) +
                      " outside dataset of " + std::to_string(graphs.size()));
    const CorrelationTrace sample = correlation_vs_iterations(
        graphs[graph_index], ckpt, m_max, common.seed);

    CorrelationTrace mean;
    mean.corr_local.assign(m_max + 1, 0.0);
    mean.corr_common_patch.assign(m_max + 1, 0.0);
    mean.corr_decoder.assign(m_max + 1, 0.0);
    for (const Graph& g : graphs) {
      const CorrelationTrace tr = correlation_vs_iterations(
          g, ckpt, m_max,
          rng::derive(common.seed, rng::kEval,
                      static_cast<std::uint64_t>(g.graph_id)));
      for (int i = 0; i <= m_max; ++i) {
        mean.corr_local[i] += tr.corr_local[i] / graphs.size();
        mean.corr_common_patch[i] += tr.corr_common_patch[i] / graphs.size();
        mean.corr_decoder[i] += tr.corr_decoder[i] / graphs.size();
      }
      mean.degenerate_points += tr.degenerate_points;
    }

    std::ostringstream csv;
    csv.precision(17);
    csv << "iteration, sample_local, sample_common_patch, sample_decoder, "
           "mean_local, mean_common_patch, mean_decoder\n";
    std::vector<double> xs;
    for (int i = 0; i <= m_max; ++i) {
      xs.push_back(i);
      csv << i << ", " << sample.corr_local[i] << ", "
          << sample.corr_common_patch[i] << ", " << sample.corr_decoder[i]
          << ", " << mean.corr_local[i] << ", " << mean.corr_common_patch[i]
          << ", " << mean.corr_decoder[i] << "\n";
    }
    write_with_provenance(out_file("trace.csv"), provenance, csv.str());
    svg_line_plot(out_file("trace.svg"),
                  "Spearman |R| vs ACCUM iterations (dataset mean)",
                  "iterations",
                  xs,
                  {{"z_c vs local", mean.corr_local},
                   {"z_c vs common patch", mean.corr_common_patch},
                   {"z_c vs decoder codes", mean.corr_decoder}});
    std::cout << "trace written (" << mean.degenerate_points
              << " degenerate correlation points across the dataset)\n";
  }

  if (mapd_flag) {
    const MapdReport rep = mapd_report(graphs, ckpt);
    std::ostringstream csv;
    csv.precision(17);
    csv << "graph_id, mapd_common, mapd_local\n";
    for (std::size_t i = 0; i < rep.graph_ids.size(); ++i)
      csv << rep.graph_ids[i] << ", " << rep.per_graph_common[i] << ", "
          << rep.per_graph_local[i] << "\n";
    write_with_provenance(out_file("mapd.csv"), provenance, csv.str());

    std::vector<double> xs(rep.graph_ids.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = rep.graph_ids[i];
    if (xs.size() >= 2)
      svg_line_plot(out_file("mapd.svg"), "Inter-patch MAPD per graph",
                    "graph id", xs,
                    {{"common", rep.per_graph_common},
                     {"local", rep.per_graph_local}});
    std::cout.precision(6);
    std::cout << "MAPD common " << rep.mapd_common_mean << ", local "
              << rep.mapd_local_mean << ", common lower on "
              << 100.0 * rep.fraction_common_lower << "% of graphs ("
              << rep.skipped_single_node << " single-node graphs skipped)\n";
  }

  if (corrmatrix) {
    EmbedOptions eopts;
    eopts.seed = common.seed;
    const std::vector<EmbeddingRecord> records =
        embed_dataset(graphs, ckpt, eopts);
    const int d = static_cast<int>(records.front().z_c.cols());
    Mat zc(records.size(), d), zl(records.size(), d);
    for (std::size_t i = 0; i < records.size(); ++i) {
      zc.row(i) = records[i].z_c;
      zl.row(i) = records[i].z_l_sum;
    }
    const CorrelationMatrixResult res =
        corr_mode == "split_half" ? correlation_matrix_split_half(zc)
                                  : correlation_matrix(zc, zl);
    std::ostringstream csv;
    csv.precision(17);
    for (Eigen::Index r = 0; r < res.grid.rows(); ++r) {
      for (Eigen::Index c = 0; c < res.grid.cols(); ++c)
        csv << (c ? ", " : "") << res.grid(r, c);
      csv << "\n";
    }
    write_with_provenance(out_file("corrmatrix.csv"), provenance, csv.str());
    svg_heatmap(out_file("corrmatrix.svg"),
                corr_mode == "split_half"
                    ? "|Spearman| split-half baseline"
                    : "|Spearman| common vs local dimensions",
                res.grid);
    std::cout << "correlation matrix written (mean |R| "
              << res.grid.mean() << ", " << res.degenerate_entries
              << " degenerate entries)\n";
  }
  return 0;
}

int run_synth(const CLI::App& app, const std::string& out_dir, int classes,
              int n_graphs, int min_nodes, int max_nodes,
              std::vector<double> probs, const std::string& kind,
              int categories, double background, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.classes = classes;
  spec.node_categories = categories;
  spec.motif_background = background;
  if (kind == "density")
    spec.kind = SyntheticSpec::Kind::density;
  else if (kind == "motif")
    spec.kind = SyntheticSpec::Kind::motif;
  else
    throw Error(ErrorKind::config, "cli",
                "unknown kind \"" + kind + "\" (expected density or motif)");
  if (!probs.empty()) spec.edge_probability = std::move(probs);
  if (spec.kind == SyntheticSpec::Kind::density &&
      static_cast<int>(spec.edge_probability.size()) != classes) {
    if (spec.edge_probability.size() == 2 && classes > 2) {
      // spread a default range over the classes
      spec.edge_probability.clear();
      for (int k = 0; k < classes; ++k)
        spec.edge_probability.push_back(0.15 + 0.5 * k / (classes - 1));
    }
  }

  const std::vector<Graph> graphs =
      generate_synthetic(spec, n_graphs, min_nodes, max_nodes, seed);
  const fs::path dir(out_dir);
  const std::string name = dir.filename().string();
  if (name.empty())
    throw Error(ErrorKind::argument, "cli",
                "cannot infer dataset name from \"" + out_dir + "\"");
  save_tu_dataset(graphs, dir.parent_path().string(), name);
  write_with_provenance((dir / (name + "_provenance.txt")).string(),
                        provenance_of(app), "");
  std::cout << graphs.size() << " graphs written to " << out_dir << "\n";
  return 0;
}

int run_gradcheck(double epsilon, double threshold, std::uint64_t seed) {
  ModelConfig mc;
  mc.d_in = 3;
  mc.d_hidden = 4;
  mc.d_latent = 4;
  mc.d_dec = 4;
  mc.n_layers = 2;
  mc.accum_iters = 2;
  mc.mask_mode = MaskMode::soft;

  Graph g;
  g.graph_id = 0;
  g.node_count = 4;
  g.edges = canonical_edges({{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  {
    auto eng = rng::stream(seed, rng::kSynthetic);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    g.node_features = Mat(4, 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) g.node_features(i, j) = u(eng);
  }

  const ModelParams params = init_params(mc, seed);
  const NoiseBundle noise = make_noise(mc, g.node_count, seed, 0, 1);
  const double err =
      gradient_check(g, params, mc, LossOptions{}, noise, epsilon);
  std::cout.precision(6);
  std::cout << "max relative gradient error " << err << " (epsilon " << epsilon
            << ")\n";
  if (err < threshold) return 0;
  std::cerr << "gradient check failed threshold " << threshold << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deepGCFX: common/local factor disentangling graph VAE"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "fit a model on a TU dataset");
  train_cmd->set_config("--config", "", "config file (INI, keys mirror flags)");
  CommonOpts tr_common;
  TrainConfig tc;
  std::string tr_mask = "soft", tr_reg = "noise", tr_out = "model.ckpt";
  train_cmd->add_option("--dataset", tr_common.dataset, "TU dataset directory")
      ->required();
  train_cmd->add_option("--out", tr_out, "checkpoint path");
  train_cmd->add_option("--features", tr_common.features,
                        "auto|node_label_onehot|degree_onehot");
  train_cmd->add_option("--degree-cap", tr_common.degree_cap,
                        "degree one-hot cap (-1: dataset max)");
  train_cmd->add_option("--seed", tr_common.seed, "master seed");
  train_cmd->add_option("--epochs", tc.epochs, "training epochs");
  train_cmd->add_option("--batch-size", tc.batch_size, "minibatch size");
  train_cmd->add_option("--lr", tc.learning_rate, "learning rate");
  train_cmd->add_option("--beta", tc.beta, "common KL weight");
  train_cmd->add_option("--gamma", tc.gamma, "local KL weight");
  train_cmd->add_option("--accum-iters", tc.model.accum_iters,
                        "ACCUM iterations M (0: random-filter baseline)");
  train_cmd->add_option("--layers", tc.model.n_layers, "encoder layers");
  train_cmd->add_option("--d-hidden", tc.model.d_hidden, "hidden width");
  train_cmd->add_option("--d-latent", tc.model.d_latent, "latent width");
  train_cmd->add_option("--d-dec", tc.model.d_dec, "decoder width");
  train_cmd->add_option("--tau", tc.model.soft_mask_tau,
                        "soft mask temperature");
  train_cmd->add_option("--mask-mode", tr_mask, "soft|hard (training masks)");
  train_cmd->add_option("--reg-mode", tr_reg, "noise|uniform (D_reg input)");
  train_cmd->add_option("--threads", tc.threads, "worker threads");

  // embed
  auto* embed_cmd =
      app.add_subcommand("embed", "export embeddings from a checkpoint");
  embed_cmd->set_config("--config", "", "config file (INI, keys mirror flags)");
  CommonOpts em_common;
  std::string em_ckpt, em_out = "embeddings.csv", em_nodes;
  bool em_stochastic = false;
  embed_cmd->add_option("--dataset", em_common.dataset, "TU dataset directory")
      ->required();
  embed_cmd->add_option("--ckpt", em_ckpt, "checkpoint path")->required();
  embed_cmd->add_option("--out", em_out, "embedding csv path");
  embed_cmd->add_option("--nodes-out", em_nodes, "per-node z_l csv path");
  embed_cmd->add_flag("--stochastic", em_stochastic,
                      "sample posteriors instead of using means");
  embed_cmd->add_option("--seed", em_common.seed, "master seed");

  // eval-graph
  auto* eval_cmd = app.add_subcommand(
      "eval-graph", "cross-validated linear classification on embeddings");
  eval_cmd->set_config("--config", "", "config file (INI, keys mirror flags)");
  CommonOpts ev_common;
  std::string ev_ckpt, ev_out, ev_classifier = "logistic";
  double ev_alpha = 1.0;
  bool ev_sweep = false;
  int ev_folds = 10;
  eval_cmd->add_option("--dataset", ev_common.dataset, "TU dataset directory")
      ->required();
  eval_cmd->add_option("--ckpt", ev_ckpt, "checkpoint path")->required();
  eval_cmd->add_option("--alpha", ev_alpha,
                       "gate alpha*z_c + (1-alpha)*sum z_l (1.0: z_c only)");
  eval_cmd->add_flag("--alpha-sweep", ev_sweep, "search the alpha grid");
  eval_cmd->add_option("--classifier", ev_classifier, "logistic|svm");
  eval_cmd->add_option("--folds", ev_folds, "outer folds");
  eval_cmd->add_option("--out", ev_out, "also write the report here");
  eval_cmd->add_option("--seed", ev_common.seed, "master seed");

  // analyze
  auto* an_cmd =
      app.add_subcommand("analyze", "correlation and MAPD diagnostics");
  an_cmd->set_config("--config", "", "config file (INI, keys mirror flags)");
  CommonOpts an_common;
  std::string an_ckpt, an_out = "report", an_corr_mode = "deepgcfx";
  bool an_trace = false, an_mapd = false, an_corr = false;
  int an_mmax = -1, an_graph = 0;
  an_cmd->add_option("--dataset", an_common.dataset, "TU dataset directory")
      ->required();
  an_cmd->add_option("--ckpt", an_ckpt, "checkpoint path")->required();
  an_cmd->add_option("--out", an_out, "output directory");
  an_cmd->add_flag("--trace", an_trace, "Spearman trace vs ACCUM iterations");
  an_cmd->add_flag("--mapd", an_mapd, "inter-patch MAPD report");
  an_cmd->add_flag("--corrmatrix", an_corr, "common/local correlation matrix");
  an_cmd->add_option("--corrmatrix-mode", an_corr_mode,
                     "deepgcfx|split_half");
  an_cmd->add_option("--m-max", an_mmax, "trace iterations (-1: model M)");
  an_cmd->add_option("--graph-index", an_graph, "sample graph for the trace");
  an_cmd->add_option("--seed", an_common.seed, "master seed");

  // synth-gen
  auto* sy_cmd =
      app.add_subcommand("synth-gen", "generate a synthetic TU dataset");
  sy_cmd->set_config("--config", "", "config file (INI, keys mirror flags)");
  std::string sy_out = "data/SYN", sy_kind = "density";
  int sy_classes = 2, sy_graphs = 500, sy_min = 10, sy_max = 20,
      sy_categories = 3;
  double sy_background = 0.05;
  std::vector<double> sy_probs;
  std::uint64_t sy_seed = 1;
  sy_cmd->add_option("--out", sy_out, "dataset directory to create");
  sy_cmd->add_option("--classes", sy_classes, "number of classes");
  sy_cmd->add_option("--graphs", sy_graphs, "number of graphs");
  sy_cmd->add_option("--min-nodes", sy_min, "minimum node count");
  sy_cmd->add_option("--max-nodes", sy_max, "maximum node count");
  sy_cmd->add_option("--p", sy_probs, "per-class edge probabilities");
  sy_cmd->add_option("--kind", sy_kind, "density|motif");
  sy_cmd->add_option("--categories", sy_categories,
                     "node feature categories");
  sy_cmd->add_option("--background", sy_background, "motif background rate");
  sy_cmd->add_option("--seed", sy_seed, "master seed");

  // gradcheck
  auto* gc_cmd = app.add_subcommand(
      "gradcheck", "finite-difference check of the taped gradients");
  gc_cmd->set_config("--config", "", "config file (INI, keys mirror flags)");
  double gc_eps = 1e-4, gc_threshold = 1e-3;
  std::uint64_t gc_seed = 1;
  gc_cmd->add_option("--epsilon", gc_eps, "finite-difference step");
  gc_cmd->add_option("--threshold", gc_threshold, "max relative error");
  gc_cmd->add_option("--seed", gc_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help, --version
    std::cerr << "error: " << e.what() << "\n"
              << app.help() << "\n";
    return 2;
  }

  try {
    if (*train_cmd)
      return run_train(app, tr_common, tc, tr_mask, tr_reg, tr_out);
    if (*embed_cmd)
      return run_embed(app, em_common, em_ckpt, em_out, em_nodes,
                       em_stochastic);
    if (*eval_cmd)
      return run_eval(app, ev_common, ev_ckpt, ev_alpha, ev_sweep,
                      ev_classifier, ev_folds, ev_out);
    if (*an_cmd)
      return run_analyze(app, an_common, an_ckpt, an_out, an_trace, an_mapd,
                         an_corr, an_corr_mode, an_mmax, an_graph);
    if (*sy_cmd)
      return run_synth(app, sy_out, sy_classes, sy_graphs, sy_min, sy_max,
                       sy_probs, sy_kind, sy_categories, sy_background,
                       sy_seed);
    if (*gc_cmd) return run_gradcheck(gc_eps, gc_threshold, gc_seed);
  } catch (const Error& e) {
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
