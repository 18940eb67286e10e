#include "gcfx/tu_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace gcfx {
namespace {

struct NumberedLine {
  int lineno;
  std::string text;
};

std::vector<NumberedLine> read_lines(const fs::path& path, bool mandatory) {
  std::ifstream in(path);
  if (!in) {
    if (mandatory)
      throw Error(ErrorKind::format, "graph_data",
                  "missing mandatory file " + path.string());
    return {};
  }
  std::vector<NumberedLine> lines;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = raw.find_last_not_of(" \t\r");
    lines.push_back({lineno, raw.substr(first, last - first + 1)});
  }
  return lines;
}

int parse_int(const std::string& text, const fs::path& path, int lineno) {
  try {
    std::size_t consumed = 0;
    const int value = std::stoi(text, &consumed);
    if (consumed != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw Error(ErrorKind::format, "graph_data",
                path.string() + ":" + std::to_string(lineno) +
                    ": expected an integer, got \"" + text + "\"");
  }
}

std::pair<int, int> parse_edge_line(const NumberedLine& line,
                                    const fs::path& path) {
  const auto comma = line.text.find(',');
  if (comma == std::string::npos)
    throw Error(ErrorKind::format, "graph_data",
                path.string() + ":" + std::to_string(line.lineno) +
                    ": expected \"i, j\", got \"" + line.text + "\"");
  auto strip = [](std::string s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  return {parse_int(strip(line.text.substr(0, comma)), path, line.lineno),
          parse_int(strip(line.text.substr(comma + 1)), path, line.lineno)};
}

}  // namespace

std::vector<Graph> parse_tu_dataset(const std::string& root,
                                    const std::string& name) {
  const fs::path dir = fs::path(root) / name;
  const auto file = [&](const char* suffix) {
    return dir / (name + suffix);
  };

  const auto indicator_lines = read_lines(file("_graph_indicator.txt"), true);
  const auto edge_lines = read_lines(file("_A.txt"), true);
  const auto graph_label_lines = read_lines(file("_graph_labels.txt"), false);
  const auto node_label_lines = read_lines(file("_node_labels.txt"), false);

  const int total_nodes = static_cast<int>(indicator_lines.size());
  if (total_nodes == 0)
    throw Error(ErrorKind::format, "graph_data",
                file("_graph_indicator.txt").string() + ": no nodes listed");

  // Graph ids must start at 1 and never jump; nodes of one graph form a
  // contiguous block.
  std::vector<int> node_graph(total_nodes);
  int graph_count = 0;
  for (int i = 0; i < total_nodes; ++i) {
    const int gid = parse_int(indicator_lines[i].text,
                              file("_graph_indicator.txt"),
                              indicator_lines[i].lineno);
    if (gid != graph_count && gid != graph_count + 1)
      throw Error(ErrorKind::validation, "graph_data",
                  file("_graph_indicator.txt").string() + ":" +
                      std::to_string(indicator_lines[i].lineno) +
                      ": non-contiguous graph indicator " +
                      std::to_string(gid) + " after graph " +
                      std::to_string(graph_count));
    graph_count = std::max(graph_count, gid);
    node_graph[i] = gid - 1;
  }

  std::vector<Graph> graphs(graph_count);
  std::vector<int> node_local(total_nodes);
  for (int g = 0; g < graph_count; ++g) graphs[g].graph_id = g;
  for (int i = 0; i < total_nodes; ++i) {
    Graph& g = graphs[node_graph[i]];
    node_local[i] = g.node_count++;
  }

  std::vector<std::vector<std::pair<int, int>>> raw_edges(graph_count);
  for (const auto& line : edge_lines) {
    auto [i, j] = parse_edge_line(line, file("_A.txt"));
    if (i < 1 || i > total_nodes || j < 1 || j > total_nodes)
      throw Error(ErrorKind::validation, "graph_data",
                  file("_A.txt").string() + ":" + std::to_string(line.lineno) +
                      ": edge references unknown node (" + std::to_string(i) +
                      ", " + std::to_string(j) + "), dataset has " +
                      std::to_string(total_nodes) + " nodes");
    if (node_graph[i - 1] != node_graph[j - 1])
      throw Error(ErrorKind::validation, "graph_data",
                  file("_A.txt").string() + ":" + std::to_string(line.lineno) +
                      ": edge crosses graphs " +
                      std::to_string(node_graph[i - 1] + 1) + " and " +
                      std::to_string(node_graph[j - 1] + 1));
    raw_edges[node_graph[i - 1]].push_back(
        {node_local[i - 1], node_local[j - 1]});
  }
  for (int g = 0; g < graph_count; ++g)
    graphs[g].edges = canonical_edges(std::move(raw_edges[g]));

  if (!graph_label_lines.empty()) {
    if (static_cast<int>(graph_label_lines.size()) != graph_count)
      throw Error(ErrorKind::validation, "graph_data",
                  file("_graph_labels.txt").string() + ": " +
                      std::to_string(graph_label_lines.size()) +
                      " labels for " + std::to_string(graph_count) + " graphs");
    for (int g = 0; g < graph_count; ++g)
      graphs[g].label = parse_int(graph_label_lines[g].text,
                                  file("_graph_labels.txt"),
                                  graph_label_lines[g].lineno);
  }

  if (!node_label_lines.empty()) {
    if (static_cast<int>(node_label_lines.size()) != total_nodes)
      throw Error(ErrorKind::validation, "graph_data",
                  file("_node_labels.txt").string() + ": " +
                      std::to_string(node_label_lines.size()) +
                      " labels for " + std::to_string(total_nodes) + " nodes");
    for (auto& g : graphs) g.node_labels.emplace(g.node_count);
    for (int i = 0; i < total_nodes; ++i)
      (*graphs[node_graph[i]].node_labels)[node_local[i]] =
          parse_int(node_label_lines[i].text, file("_node_labels.txt"),
                    node_label_lines[i].lineno);
  }

  for (const auto& g : graphs) g.validate();
  return graphs;
}

std::vector<Graph> parse_tu_dataset(const std::string& dataset_dir) {
  const fs::path dir(dataset_dir);
  const std::string name = dir.filename().string();
  if (name.empty())
    throw Error(ErrorKind::argument, "graph_data",
                "cannot infer dataset name from \"" + dataset_dir + "\"");
  return parse_tu_dataset(dir.parent_path().string(), name);
}

void save_tu_dataset(const std::vector<Graph>& graphs, const std::string& root,
                     const std::string& name) {
  if (graphs.empty())
    throw Error(ErrorKind::argument, "graph_data", "nothing to save");
  const fs::path dir = fs::path(root) / name;
  fs::create_directories(dir);
  const auto open = [&](const char* suffix) {
    const fs::path p = dir / (name + suffix);
    std::ofstream out(p);
    if (!out)
      throw Error(ErrorKind::io, "graph_data", "cannot write " + p.string());
    return out;
  };

  auto indicator = open("_graph_indicator.txt");
  auto a_file = open("_A.txt");
  int offset = 0;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    graphs[g].validate();
    for (int i = 0; i < graphs[g].node_count; ++i)
      indicator << (g + 1) << "\n";
    std::vector<std::vector<int>> adj(graphs[g].node_count);
    for (const auto& [u, v] : graphs[g].edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (int u = 0; u < graphs[g].node_count; ++u) {
      std::sort(adj[u].begin(), adj[u].end());
      for (int v : adj[u])
        a_file << (offset + u + 1) << ", " << (offset + v + 1) << "\n";
    }
    offset += graphs[g].node_count;
  }

  const bool all_labeled = std::all_of(
      graphs.begin(), graphs.end(), [](const Graph& g) { return bool(g.label); });
  if (all_labeled) {
    auto labels = open("_graph_labels.txt");
    for (const auto& g : graphs) labels << *g.label << "\n";
  }
  const bool all_node_labeled =
      std::all_of(graphs.begin(), graphs.end(),
                  [](const Graph& g) { return bool(g.node_labels); });
  if (all_node_labeled) {
    auto labels = open("_node_labels.txt");
    for (const auto& g : graphs)
      for (int l : *g.node_labels) labels << l << "\n";
  }
}

}  // namespace gcfx
