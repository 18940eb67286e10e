#pragma once

#include <map>
#include <vector>

#include "gcfx/graph.hpp"

namespace gcfx {

enum class FeatureMode { node_label_onehot, degree_onehot };

const char* feature_mode_name(FeatureMode mode);
FeatureMode feature_mode_from_name(const std::string& name);

/// Vocabulary fixed at featurization time so that embedding a new graph later
/// reuses the same column layout.
struct FeaturizeInfo {
  FeatureMode mode = FeatureMode::degree_onehot;
  int d_in = 0;
  std::map<int, int> label_to_column;  // node_label_onehot only
  int degree_cap = 0;                  // degree_onehot only; bucket D catches >= D
};

/// Fill node_features with one-hot rows. node_label_onehot uses the sorted
/// distinct node labels of the dataset (d_in = vocabulary size) and rejects
/// unlabeled datasets; degree_onehot uses d_in = D+1 with degrees >= D clamped
/// into the last bucket. D defaults to the dataset's maximum degree.
FeaturizeInfo featurize(std::vector<Graph>& graphs, FeatureMode mode,
                        int degree_cap = -1);

/// Featurize further graphs with a vocabulary learned earlier. Unseen node
/// labels are a validation error.
void featurize_with(std::vector<Graph>& graphs, const FeaturizeInfo& info);

}  // namespace gcfx
