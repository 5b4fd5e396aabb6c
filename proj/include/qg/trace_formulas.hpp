#pragma once

#include <functional>

#include "qg/discrete_laplacian.hpp"
#include "qg/vertex_space.hpp"

namespace qg {

// Directed traversal of an edge: forward = minus end to plus end.
struct BondStep {
  int edge;
  bool forward;
  bool operator==(const BondStep&) const = default;
};

// Properly closed combinatorial path, stored as the cyclic sequence of fully
// traversed bonds (e_0, v_0, e_1, ..., v_{n-1}, e_n = e_0). The vertex v_i is
// the head of steps[i]; closure means head(steps[n-1]) = tail(steps[0]).
// A combinatorial length 0 path is a bare vertex.
struct CombinatorialPath {
  std::vector<BondStep> steps;
  int base_vertex = -1;  // only for length-0 paths

  int length() const { return static_cast<int>(steps.size()); }
  int step_tail(const WeightedGraph& g, int i) const;
  int step_head(const WeightedGraph& g, int i) const;
  // v_0 ... v_{n-1}
  std::vector<int> vertex_sequence(const WeightedGraph& g) const;
  double metric_length(const WeightedGraph& g) const;
  bool properly_closed(const WeightedGraph& g) const;
};

// All properly closed paths of combinatorial length n. Requires a graph
// without self-loops. `cap` bounds the enumeration (numeric_error beyond it).
std::vector<CombinatorialPath> enumerate_properly_closed(const WeightedGraph& g, int n,
                                                         std::size_t cap = 1000000);
std::size_t count_properly_closed(const WeightedGraph& g, int n, std::size_t cap = 1000000);

// Rotation class of a properly closed path with canonical representative.
struct Cycle {
  CombinatorialPath rep;        // lexicographically minimal rotation
  double metric_length = 0;
  int power = 1;                // rep = power-fold repetition of prime_rep
  CombinatorialPath prime_rep;  // canonical representative of the prime base
  bool prime() const { return power == 1; }
};

Cycle cycle_normal_form(const WeightedGraph& g, const CombinatorialPath& c);

// Product of per-vertex scattering entries S_{e_i, e_{i+1}}(v_i); rotation
// invariant, so well defined on cycles.
cx scattering_amplitude(const WeightedGraph& g, const TotalVertexSpace& total,
                        const CombinatorialPath& c);

// W_G(c) = tr[A_G(v_0,v_1) ... A_G(v_{n-1},v_0)] over principal-part blocks.
// Requires a simple equilateral graph (ell_e = 1).
cx discrete_weight(const WeightedGraph& g, const TotalVertexSpace& total,
                   const CombinatorialPath& c);

// sum_{c in C_n} W_G(c) by literal path enumeration (desk-scale oracle for
// tr M^n).
cx path_weight_sum(const WeightedGraph& g, const TotalVertexSpace& total, int n,
                   std::size_t cap = 1000000);

struct ValueWithBound {
  double value;
  double bound;  // remainder / truncation estimate, always an upper bound
};

// e^{-t} sum_{n<=N} t^n/n! tr M^n with remainder bound e^{-t} dim G
// sum_{n>N} t^n/n!. The partial sums evaluate the path series through the
// regrouped matrix powers of the principal part.
ValueWithBound heat_trace_discrete(const WeightedGraph& g, const TotalVertexSpace& total,
                                   double t, int n_max);

// All prime cycles of metric length <= cutoff (deduplicated canonical forms).
// With prune_by_amplitude, subtrees whose partial amplitude falls below 1e-30
// are skipped; when amplitude_slack is given it accumulates a rigorous bound
// on the pruned amplitude mass so callers can widen their error estimates.
std::vector<Cycle> prime_cycles(const WeightedGraph& g, double cutoff, std::size_t cap = 1000000,
                                const TotalVertexSpace* prune_by_amplitude = nullptr,
                                double* amplitude_slack = nullptr);

// vol X / (2 sqrt(pi t)) + (dim G - |E|)/2
//   + 1/(2 sqrt(pi t)) sum_{prime c, p >= 1, p l(c) <= cutoff} S(c)^p l(c) e^{-p^2 l(c)^2/(4t)}.
// The bound covers every term dropped by the cutoff (Gaussian tail with a
// crude path-count majorant).
ValueWithBound heat_trace_metric(const WeightedGraph& g, const TotalVertexSpace& total,
                                 double t, double cutoff, std::size_t cap = 1000000);

struct MetricPoint {
  int edge;
  double coord;  // in [0, ell_e]
};

// Heat kernel p_t(x,y) through the path expansion, paths of metric length up
// to cutoff.
double heat_kernel_metric(const WeightedGraph& g, const TotalVertexSpace& total,
                          MetricPoint x, MetricPoint y, double t, double cutoff,
                          std::size_t cap = 1000000);

}  // namespace qg
