#include "graphembed/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "graphembed/error.hpp"
#include "text_util.hpp"

namespace graphembed {

NodeDictionary::NodeDictionary(std::vector<std::string> tokens) {
  for (auto& t : tokens) {
    if (find(t)) throw ContractViolation("duplicate node token '" + t + "'");
    intern(t);
  }
}

NodeIndex NodeDictionary::intern(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  auto idx = static_cast<NodeIndex>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), idx);
  return idx;
}

std::optional<NodeIndex> NodeDictionary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

void build_csr(std::size_t n, const std::vector<Edge>& edges, bool reverse,
               std::vector<std::size_t>& offsets, std::vector<NodeIndex>& targets,
               std::vector<double>& weights, bool both_directions) {
  offsets.assign(n + 1, 0);
  for (const auto& e : edges) {
    ++offsets[(reverse ? e.target : e.source) + 1];
    if (both_directions) ++offsets[(reverse ? e.source : e.target) + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  targets.assign(offsets.back(), 0);
  weights.assign(offsets.back(), 0.0);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  auto put = [&](NodeIndex from, NodeIndex to, double w) {
    targets[fill[from]] = to;
    weights[fill[from]] = w;
    ++fill[from];
  };
  for (const auto& e : edges) {
    if (reverse) put(e.target, e.source, e.weight);
    else put(e.source, e.target, e.weight);
    if (both_directions) put(e.target, e.source, e.weight);
  }
  // Each row is sorted: sort (target, weight) pairs within the row.
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::pair<NodeIndex, double>> row;
    row.reserve(offsets[u + 1] - offsets[u]);
    for (auto k = offsets[u]; k < offsets[u + 1]; ++k) row.emplace_back(targets[k], weights[k]);
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      targets[offsets[u] + k] = row[k].first;
      weights[offsets[u] + k] = row[k].second;
    }
  }
}

} // namespace

Graph Graph::build(bool directed, NodeDictionary nodes, std::vector<Edge> edges,
                   bool accumulate_weights) {
  Graph g;
  g.directed_ = directed;
  const auto n = nodes.size();
  g.nodes_ = std::move(nodes);

  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (auto e : edges) {
    if (e.source >= n || e.target >= n) throw ContractViolation("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ContractViolation("edge weight must be a positive finite number");
    if (e.source == e.target) {
      ++g.self_loops_dropped_;
      continue;
    }
    if (!directed && e.source > e.target) std::swap(e.source, e.target);
    kept.push_back(e);
  }
  // Stable so the first occurrence of a duplicate wins.
  std::stable_sort(kept.begin(), kept.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (const auto& e : kept) {
    if (!g.edges_.empty() && g.edges_.back().source == e.source &&
        g.edges_.back().target == e.target) {
      ++g.duplicates_dropped_;
      if (accumulate_weights) g.edges_.back().weight += e.weight;
      continue;
    }
    g.edges_.push_back(e);
  }

  build_csr(n, g.edges_, false, g.out_offsets_, g.out_targets_, g.out_weights_, !directed);
  if (directed) build_csr(n, g.edges_, true, g.in_offsets_, g.in_sources_, g.in_weights_, false);
  return g;
}

std::span<const NodeIndex> Graph::out_neighbors(NodeIndex u) const {
  return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::span<const double> Graph::out_weights(NodeIndex u) const {
  return {out_weights_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::span<const NodeIndex> Graph::in_neighbors(NodeIndex u) const {
  if (!directed_) return out_neighbors(u);
  return {in_sources_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
}

std::span<const double> Graph::in_weights(NodeIndex u) const {
  if (!directed_) return out_weights(u);
  return {in_weights_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
}

bool Graph::has_edge(NodeIndex u, NodeIndex v) const {
  auto nbrs = out_neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

ParsedGraph parse_edge_list(std::istream& in, const IngestOptions& options,
                            std::span<const std::string> known_nodes) {
  NodeDictionary nodes{std::vector<std::string>(known_nodes.begin(), known_nodes.end())};
  std::vector<Edge> edges;
  IngestStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = detail::split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(line_no, "expected '<src> <dst> [weight]', got " +
                                    std::to_string(fields.size()) + " fields");
    Edge e;
    e.source = nodes.intern(fields[0]);
    e.target = nodes.intern(fields[1]);
    if (fields.size() == 3) {
      auto w = detail::parse_double(fields[2]);
      if (!w) throw ParseError(line_no, "non-numeric weight '" + std::string(fields[2]) + "'");
      if (!(*w > 0.0) || !std::isfinite(*w))
        throw ParseError(line_no, "weight must be positive, got '" + std::string(fields[2]) + "'");
      e.weight = *w;
    }
    edges.push_back(e);
    ++stats.edge_lines;
  }
  ParsedGraph result;
  result.graph = Graph::build(options.directed, std::move(nodes), std::move(edges),
                              options.accumulate_weights);
  stats.self_loops_dropped = result.graph.self_loops_dropped();
  stats.duplicates_dropped = result.graph.duplicates_dropped();
  result.stats = stats;
  return result;
}

ParsedGraph parse_edge_list(std::string_view text, const IngestOptions& options,
                            std::span<const std::string> known_nodes) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in, options, known_nodes);
}

void serialize_edge_list(const Graph& g, std::ostream& out) {
  const bool weighted =
      std::any_of(g.edges().begin(), g.edges().end(), [](const Edge& e) { return e.weight != 1.0; });
  for (const auto& e : g.edges()) {
    out << g.token(e.source) << ' ' << g.token(e.target);
    if (weighted) out << ' ' << detail::format_double(e.weight);
    out << '\n';
  }
}

std::string serialize_edge_list(const Graph& g) {
  std::ostringstream out;
  serialize_edge_list(g, out);
  return out.str();
}

Graph canonicalize(const Graph& g) {
  constexpr auto unassigned = static_cast<NodeIndex>(-1);
  std::vector<NodeIndex> remap(g.num_nodes(), unassigned);
  NodeDictionary nodes;
  auto map = [&](NodeIndex u) {
    if (remap[u] == unassigned) remap[u] = nodes.intern(g.token(u));
    return remap[u];
  };
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    auto s = map(e.source);
    auto t = map(e.target);
    edges.push_back({s, t, e.weight});
  }
  return Graph::build(g.directed(), std::move(nodes), std::move(edges));
}

Graph to_undirected(const Graph& g) {
  if (!g.directed()) throw ContractViolation("to_undirected: graph is already undirected");
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (auto& e : edges)
    if (e.source > e.target) std::swap(e.source, e.target);
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.source != b.source) return a.source < b.source;
    if (a.target != b.target) return a.target < b.target;
    return a.weight > b.weight;
  });
  return Graph::build(false, g.nodes(), std::move(edges));
}

namespace {

LabelTable build_label_table(const std::vector<std::pair<NodeIndex, std::string>>& raw,
                             const Graph& g) {
  std::vector<std::string> names;
  for (const auto& [node, cls] : raw) names.push_back(cls);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const bool numeric = std::all_of(names.begin(), names.end(), [](const std::string& s) {
    return detail::parse_int(s).has_value();
  });
  if (numeric)
    std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      return *detail::parse_int(a) < *detail::parse_int(b);
    });
  std::map<std::string, ClassId> class_index;
  for (std::size_t i = 0; i < names.size(); ++i) class_index[names[i]] = static_cast<ClassId>(i);

  LabelTable table;
  table.class_names = std::move(names);
  table.labels.assign(g.num_nodes(), 0);
  for (const auto& [node, cls] : raw) table.labels[node] = class_index.at(cls);
  return table;
}

} // namespace

LabelTable parse_labels(std::istream& in, const Graph& g) {
  std::vector<std::pair<NodeIndex, std::string>> raw;
  std::vector<std::size_t> seen_on(g.num_nodes(), 0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = detail::split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() != 2)
      throw ParseError(line_no, "expected '<node> <class>', got " + std::to_string(fields.size()) +
                                    " fields");
    auto node = g.nodes().find(fields[0]);
    if (!node) throw ParseError(line_no, "unknown node '" + std::string(fields[0]) + "'");
    if (seen_on[*node] != 0)
      throw ParseError(line_no, "node '" + std::string(fields[0]) + "' already labeled on line " +
                                    std::to_string(seen_on[*node]));
    seen_on[*node] = line_no;
    raw.emplace_back(*node, std::string(fields[1]));
  }
  for (NodeIndex u = 0; u < g.num_nodes(); ++u)
    if (seen_on[u] == 0) throw ParseError(0, "node '" + g.token(u) + "' has no label");
  return build_label_table(raw, g);
}

LabelTable parse_labels(std::string_view text, const Graph& g) {
  std::istringstream in{std::string(text)};
  return parse_labels(in, g);
}

void serialize_labels(const LabelTable& labels, const Graph& g, std::ostream& out) {
  for (NodeIndex u = 0; u < labels.size(); ++u)
    out << g.token(u) << ' ' << labels.class_names[labels[u]] << '\n';
}

} // namespace graphembed
