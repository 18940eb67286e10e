#pragma once

#include <string>

#include "gcfx/featurize.hpp"
#include "gcfx/trainer.hpp"

namespace gcfx {

/// Everything needed to resume or apply a trained model: weights, the full
/// train config, the featurization vocabulary the weights were fit on, and a
/// free-text provenance blob (the CLI stores its effective config there).
struct Checkpoint {
  TrainConfig config;
  ModelParams params;
  FeaturizeInfo featurization;
  int epoch = 0;
  LossParts last_loss;
  std::string provenance;
};

/// Versioned binary container: magic, version, JSON metadata, then named
/// tensors as row-major 64-bit floats. Parameters round-trip bitwise.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace gcfx
