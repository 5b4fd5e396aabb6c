#include "qg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace qg {

WeightedGraph::WeightedGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges)
    : vertex_names_(std::move(vertex_names)), edges_(std::move(edges)) {
  const int nv = num_vertices();
  {
    std::set<std::string> seen;
    for (const auto& n : vertex_names_)
      if (!seen.insert(n).second) throw precondition_error("duplicate vertex name '" + n + "'");
    seen.clear();
    for (const auto& e : edges_)
      if (!seen.insert(e.name).second) throw precondition_error("duplicate edge name '" + e.name + "'");
  }
  for (const auto& e : edges_) {
    if (e.tail < 0 || e.tail >= nv || e.head < 0 || e.head >= nv)
      throw precondition_error("edge '" + e.name + "' references an unknown vertex");
    if (!(e.length > 0) || !std::isfinite(e.length))
      throw precondition_error("edge '" + e.name + "' has non-positive length");
  }

  slots_.assign(nv, {});
  for (int e = 0; e < num_edges(); ++e) {
    slots_[edges_[e].tail].push_back({e, EdgeEnd::minus});
    slots_[edges_[e].head].push_back({e, EdgeEnd::plus});
  }
  for (auto& sl : slots_)
    std::sort(sl.begin(), sl.end(), [](const Slot& a, const Slot& b) {
      return a.edge != b.edge ? a.edge < b.edge : a.end < b.end;
    });

  slot_offset_.assign(nv + 1, 0);
  slot_of_edge_end_.assign(2 * num_edges(), -1);
  for (int v = 0; v < nv; ++v) {
    slot_offset_[v + 1] = slot_offset_[v] + static_cast<int>(slots_[v].size());
    for (int i = 0; i < static_cast<int>(slots_[v].size()); ++i) {
      const Slot& s = slots_[v][i];
      slot_of_edge_end_[2 * s.edge + static_cast<int>(s.end)] = slot_offset_[v] + i;
      slot_owner_.push_back({v, i});
    }
  }

  min_length_ = edges_.empty() ? 0 : edges_[0].length;
  max_length_ = min_length_;
  total_length_ = 0;
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : edges_) {
    min_length_ = std::min(min_length_, e.length);
    max_length_ = std::max(max_length_, e.length);
    total_length_ += e.length;
    if (e.tail == e.head) has_self_loops_ = true;
    auto key = std::minmax(e.tail, e.head);
    if (!pairs.insert({key.first, key.second}).second && e.tail != e.head)
      has_double_edges_ = true;
  }
}

int WeightedGraph::vertex_index(const std::string& name) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (vertex_names_[v] == name) return v;
  return -1;
}

int WeightedGraph::edge_index(const std::string& name) const {
  for (int e = 0; e < num_edges(); ++e)
    if (edges_[e].name == name) return e;
  return -1;
}

int WeightedGraph::other_end(int e, int v) const {
  const Edge& ed = edges_.at(e);
  if (ed.tail == v) return ed.head;
  if (ed.head == v) return ed.tail;
  throw precondition_error("vertex not incident to edge '" + ed.name + "'");
}

std::pair<int, int> WeightedGraph::slot_owner(int s) const { return slot_owner_.at(s); }

const Slot& WeightedGraph::slot_at(int global_index) const {
  auto [v, i] = slot_owner_.at(global_index);
  return slots_[v][i];
}

bool WeightedGraph::is_equilateral(double rel_tol) const {
  if (edges_.empty()) return true;
  return max_length_ - min_length_ <= rel_tol * max_length_;
}

bool WeightedGraph::connected_underlying() const {
  const int nv = num_vertices();
  if (nv == 0) return false;
  std::vector<char> seen(nv, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Slot& s : slots_[v]) {
      int w = endpoint(s.edge, s.end == EdgeEnd::minus ? EdgeEnd::plus : EdgeEnd::minus);
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

ValidationReport WeightedGraph::validate() const {
  if (edges_.empty()) throw precondition_error("empty edge set");
  ValidationReport r;
  r.degree.resize(num_vertices());
  for (int v = 0; v < num_vertices(); ++v) {
    r.degree[v] = degree(v);
    if (r.degree[v] == 0)
      throw precondition_error("isolated vertex '" + vertex_names_[v] + "'");
  }
  r.min_length = min_length_;
  r.total_length = total_length_;
  r.connected = connected_underlying();
  r.has_self_loops = has_self_loops_;
  r.has_double_edges = has_double_edges_;
  return r;
}

int segments_per_edge(double length, int n_per_unit) {
  if (n_per_unit < 1) throw precondition_error("n_per_unit must be >= 1");
  double m = std::ceil(n_per_unit * length - 1e-12);
  return std::max(1, static_cast<int>(m));
}

SubdivisionResult subdivide(const WeightedGraph& g, int n_per_unit) {
  std::vector<std::string> names = g.vertex_names();
  std::vector<SubdivisionNode> pos(names.size(), SubdivisionNode{-1, 0.0});
  std::vector<Edge> new_edges;
  std::vector<std::vector<int>> chains(g.num_edges());

  auto unique_name = [&](std::string base) {
    // collisions with user names are unlikely but must not corrupt indexing
    while (std::find(names.begin(), names.end(), base) != names.end()) base += "'";
    return base;
  };

  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    const int m = segments_per_edge(ed.length, n_per_unit);
    const double h = ed.length / m;
    int prev = ed.tail;
    for (int i = 1; i <= m; ++i) {
      int next;
      if (i == m) {
        next = ed.head;
      } else {
        names.push_back(unique_name(ed.name + ":n" + std::to_string(i)));
        pos.push_back(SubdivisionNode{e, i * h});
        next = static_cast<int>(names.size()) - 1;
      }
      chains[e].push_back(static_cast<int>(new_edges.size()));
      new_edges.push_back(Edge{ed.name + ":" + std::to_string(i), prev, next, h});
      prev = next;
    }
  }
  return SubdivisionResult{WeightedGraph(std::move(names), std::move(new_edges)),
                           std::move(pos), std::move(chains)};
}

}  // namespace qg
