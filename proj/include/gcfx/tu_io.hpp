#pragma once

#include <string>
#include <vector>

#include "gcfx/graph.hpp"

namespace gcfx {

/// Load a dataset laid out as <root>/<name>/<name>_A.txt (1-indexed "i, j"
/// edge lines, both directions listed), <name>_graph_indicator.txt (one graph
/// id per node line) and, when present, <name>_graph_labels.txt and
/// <name>_node_labels.txt. Returned graphs use 0-indexed contiguous node ids,
/// mirrored edge lines collapse to one undirected edge, duplicates are
/// deduplicated and self-loop lines are dropped. Node features are left empty;
/// run featurize() afterwards.
std::vector<Graph> parse_tu_dataset(const std::string& root,
                                    const std::string& name);

/// Same, for a single directory path whose basename is the dataset name.
std::vector<Graph> parse_tu_dataset(const std::string& dataset_dir);

/// Write graphs back out in the same layout (both edge directions, sorted by
/// source node). Labels are emitted only when every graph carries one; node
/// labels likewise. Re-parsing the result reproduces edge sets, counts and
/// labels exactly.
void save_tu_dataset(const std::vector<Graph>& graphs, const std::string& root,
                     const std::string& name);

}  // namespace gcfx
