#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qg/errors.hpp"

namespace qg {

// Endpoint selector of an oriented edge: minus = initial point (coordinate 0),
// plus = terminal point (coordinate length).
enum class EdgeEnd { minus = 0, plus = 1 };

struct Edge {
  std::string name;
  int tail;       // vertex index of the minus end
  int head;       // vertex index of the plus end
  double length;  // > 0
};

// One edge-endpoint as seen from its vertex. A self-loop contributes two
// distinct slots to its vertex.
struct Slot {
  int edge;
  EdgeEnd end;
  bool operator==(const Slot&) const = default;
};

struct ValidationReport {
  double min_length = 0;  // the derived lower bound on edge lengths
  double total_length = 0;
  std::vector<int> degree;
  bool connected = false;
  bool has_self_loops = false;
  bool has_double_edges = false;
};

// Finite weighted multigraph with oriented edges and positive lengths.
// Vertices and edges keep their user-facing names but all computations use
// the canonical indices (order of first appearance). Immutable after
// construction.
class WeightedGraph {
 public:
  WeightedGraph(std::vector<std::string> vertex_names, std::vector<Edge> edges);

  int num_vertices() const { return static_cast<int>(vertex_names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_slots() const { return 2 * num_edges(); }

  const std::string& vertex_name(int v) const { return vertex_names_.at(v); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  // -1 when the name is unknown.
  int vertex_index(const std::string& name) const;
  int edge_index(const std::string& name) const;

  int degree(int v) const { return static_cast<int>(slots_[v].size()); }
  int endpoint(int e, EdgeEnd end) const {
    return end == EdgeEnd::minus ? edges_[e].tail : edges_[e].head;
  }
  // Opposite vertex along e; e must not be a self-loop when ends coincide,
  // but the result is well defined for any non-loop edge.
  int other_end(int e, int v) const;

  // Slots at v in canonical order: ascending edge index, minus before plus.
  const std::vector<Slot>& incident_slots(int v) const {
    if (v < 0 || v >= num_vertices()) throw precondition_error("unknown vertex");
    return slots_[v];
  }
  // Position of a slot inside the global coordinate order of G^max
  // (vertices in canonical order, slots in SlotOrder within each vertex).
  int slot_index(int e, EdgeEnd end) const { return slot_of_edge_end_[2 * e + static_cast<int>(end)]; }
  int slot_offset(int v) const { return slot_offset_[v]; }
  // (vertex, position within the vertex's slot list) of a global slot index.
  std::pair<int, int> slot_owner(int s) const;
  const Slot& slot_at(int global_index) const;

  double min_length() const { return min_length_; }  // ℓ0
  double total_length() const { return total_length_; }
  double max_length() const { return max_length_; }
  bool has_self_loops() const { return has_self_loops_; }
  bool has_double_edges() const { return has_double_edges_; }
  bool is_equilateral(double rel_tol = 1e-12) const;
  bool connected_underlying() const;

  // Aggregated structural report. Throws precondition_error for an empty edge
  // set or an isolated vertex; non-positive lengths are rejected already at
  // construction.
  ValidationReport validate() const;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Slot>> slots_;   // per vertex, canonical order
  std::vector<int> slot_offset_;           // per vertex
  std::vector<int> slot_of_edge_end_;      // 2e + end -> global slot index
  std::vector<std::pair<int, int>> slot_owner_;  // global slot -> (vertex, local pos)
  double min_length_ = 0, max_length_ = 0, total_length_ = 0;
  bool has_self_loops_ = false, has_double_edges_ = false;
};

// Position of a subdivision node on an original edge. Original vertices carry
// edge = -1.
struct SubdivisionNode {
  int edge;
  double coord;
};

struct SubdivisionResult {
  WeightedGraph graph;
  std::vector<SubdivisionNode> node_position;  // indexed by new vertex
  // New edge indices along each original edge, in order from the minus end.
  std::vector<std::vector<int>> chain_edges;
};

// Number of equal sub-edges an edge of length ell gets at mesh density n.
int segments_per_edge(double length, int n_per_unit);

// Replace each edge by ceil(n_per_unit * ell_e) sub-edges of equal length.
// Original vertices keep their indices; interior nodes are appended.
SubdivisionResult subdivide(const WeightedGraph& g, int n_per_unit);

}  // namespace qg
