#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "gcfx/graph.hpp"
#include "gcfx/rng.hpp"

namespace gcfx {

DatasetSplit make_folds(const std::vector<Graph>& graphs, int k,
                        std::uint64_t seed) {
  const int n = static_cast<int>(graphs.size());
  if (k < 2)
    throw Error(ErrorKind::argument, "graph_data",
                "fold count must be at least 2, got " + std::to_string(k));
  if (n < k)
    throw Error(ErrorKind::argument, "graph_data",
                std::to_string(n) + " graphs cannot fill " + std::to_string(k) +
                    " folds");

  DatasetSplit split;
  split.k = k;
  split.seed = seed;
  split.fold_assignments.assign(n, -1);

  auto engine = rng::stream(seed, rng::kFolds);

  std::map<int, std::vector<int>> by_label;
  bool all_labeled = true;
  for (int i = 0; i < n; ++i) {
    if (!graphs[i].label) {
      all_labeled = false;
      break;
    }
    by_label[*graphs[i].label].push_back(i);
  }
  bool can_stratify = all_labeled;
  if (can_stratify)
    for (const auto& [label, members] : by_label)
      if (static_cast<int>(members.size()) < k) can_stratify = false;

  // A single fold pointer continues across classes so the global fold sizes
  // differ by at most one even when class sizes are not multiples of k.
  if (can_stratify) {
    split.stratified = true;
    int fold = 0;
    for (auto& [label, members] : by_label) {
      std::shuffle(members.begin(), members.end(), engine);
      for (int idx : members) {
        split.fold_assignments[idx] = fold;
        fold = (fold + 1) % k;
      }
    }
  } else {
    split.stratification_fallback = all_labeled;  // labeled but too sparse
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), engine);
    int fold = 0;
    for (int idx : order) {
      split.fold_assignments[idx] = fold;
      fold = (fold + 1) % k;
    }
  }
  return split;
}

}  // namespace gcfx
