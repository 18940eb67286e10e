#pragma once

#include <cstdint>
#include <vector>

#include "gcfx/loss.hpp"
#include "gcfx/model.hpp"

namespace gcfx {

struct TrainConfig {
  ModelConfig model;
  double beta = 0.5;
  double gamma = 0.1;
  int epochs = 100;
  int batch_size = 64;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct EpochLog {
  int epoch = 0;       // 1-based
  LossParts mean;      // averaged over all graphs seen this epoch
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> history;
  int epochs_run = 0;
  bool aborted_nan = false;  // params then hold the last epoch-end state
};

/// Minibatch training: seeded shuffle per epoch, batch loss averaged over its
/// graphs, one adaptive-moment step per batch. Gradients reduce over graphs
/// in a fixed order, so runs are bitwise reproducible for a given seed at any
/// thread count. Non-finite loss aborts, restoring the last epoch-end params.
TrainResult train(const std::vector<Graph>& dataset, const TrainConfig& cfg,
                  ModelParams init);

TrainResult train(const std::vector<Graph>& dataset, const TrainConfig& cfg);

/// Central finite differences against the taped gradient over every
/// parameter entry. Relative error |ga - gf| / max(|ga|, |gf|); entries where
/// both magnitudes are below 1e-10 count as 0. Requires soft masks.
double gradient_check(const Graph& g, const ModelParams& params,
                      const ModelConfig& cfg, const LossOptions& opt,
                      const NoiseBundle& noise, double epsilon);

}  // namespace gcfx
