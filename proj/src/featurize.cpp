#include "gcfx/featurize.hpp"

#include <algorithm>
#include <string>

namespace gcfx {

const char* feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::node_label_onehot: return "node_label_onehot";
    case FeatureMode::degree_onehot: return "degree_onehot";
  }
  throw Error(ErrorKind::argument, "graph_data", "unknown feature mode");
}

FeatureMode feature_mode_from_name(const std::string& name) {
  if (name == "node_label_onehot") return FeatureMode::node_label_onehot;
  if (name == "degree_onehot") return FeatureMode::degree_onehot;
  throw Error(ErrorKind::config, "graph_data",
              "unknown feature mode \"" + name +
                  "\" (expected node_label_onehot or degree_onehot)");
}

FeaturizeInfo featurize(std::vector<Graph>& graphs, FeatureMode mode,
                        int degree_cap) {
  FeaturizeInfo info;
  info.mode = mode;
  if (mode == FeatureMode::node_label_onehot) {
    for (const auto& g : graphs)
      if (!g.node_labels)
        throw Error(ErrorKind::config, "graph_data",
                    "node_label_onehot requires node labels; graph " +
                        std::to_string(g.graph_id) + " has none");
    for (const auto& g : graphs)
      for (int l : *g.node_labels) info.label_to_column.emplace(l, 0);
    int col = 0;
    for (auto& [label, column] : info.label_to_column) column = col++;
    info.d_in = col;
  } else {
    if (degree_cap < 0) {
      degree_cap = 0;
      for (const auto& g : graphs)
        for (int d : g.degrees()) degree_cap = std::max(degree_cap, d);
    }
    info.degree_cap = degree_cap;
    info.d_in = degree_cap + 1;
  }
  featurize_with(graphs, info);
  return info;
}

void featurize_with(std::vector<Graph>& graphs, const FeaturizeInfo& info) {
  if (info.d_in <= 0)
    throw Error(ErrorKind::config, "graph_data", "empty feature vocabulary");
  for (auto& g : graphs) {
    g.node_features = Mat::Zero(g.node_count, info.d_in);
    if (info.mode == FeatureMode::node_label_onehot) {
      if (!g.node_labels)
        throw Error(ErrorKind::config, "graph_data",
                    "node_label_onehot requires node labels; graph " +
                        std::to_string(g.graph_id) + " has none");
      for (int v = 0; v < g.node_count; ++v) {
        const int label = (*g.node_labels)[v];
        const auto it = info.label_to_column.find(label);
        if (it == info.label_to_column.end())
          throw Error(ErrorKind::validation, "graph_data",
                      "graph " + std::to_string(g.graph_id) + ": node label " +
                          std::to_string(label) +
                          " missing from the featurization vocabulary");
        g.node_features(v, it->second) = 1.0;
      }
    } else {
      const auto degs = g.degrees();
      for (int v = 0; v < g.node_count; ++v)
        g.node_features(v, std::min(degs[v], info.degree_cap)) = 1.0;
    }
  }
}

}  // namespace gcfx
