#pragma once

#include <vector>

#include "qg/graph.hpp"
#include "qg/linalg.hpp"

namespace qg {

// Open subset of the metric graph: per-edge disjoint open subintervals plus a
// vertex membership set.
struct MetricSubset {
  std::vector<std::vector<std::pair<double, double>>> intervals;  // per edge, sorted
  std::vector<int> vertices;

  static MetricSubset empty(const WeightedGraph& g);
  double vol1() const;
  void check_consistent(const WeightedGraph& g) const;
};

struct DiscreteCheegerResult {
  double h;
  std::vector<int> witness;  // the subset W achieving h
};

// min over nonempty proper W of |E(W, ~W)| / min(vol0 W, vol0 ~W) with
// vol0 W = sum of degrees. Exhaustive enumeration (|V| <= 24); the
// non-exhaustive mode runs a Fiedler-vector sweep and returns an upper bound.
// Requires unit lengths and no self-loops.
DiscreteCheegerResult cheeger_discrete(const WeightedGraph& g, bool exhaustive = true);

struct CutConfiguration {
  std::vector<char> label;          // per vertex, 1 = inside Y
  std::vector<int> carved;          // monochromatic edges carved with 2 interior cuts
  std::vector<std::pair<int, double>> cut_positions;  // (edge, Y-volume on that edge)
  int boundary_points = 0;
  double volume = 0;                // vol1 of the Y side realizing the optimum
  double ratio = 0;
};

struct MetricCheegerResult {
  double h_ub;
  CutConfiguration witness;
};

// Exact infimum over subsets with at most 2 boundary points per edge
// (labelings x carve sets, volumes optimized by linearity); an upper bound for
// h(X) in general. Requires a compact connected graph.
MetricCheegerResult cheeger_metric_upper(const WeightedGraph& g, int carve_depth);

// Distance between disjoint nonempty subsets via multi-source Dijkstra over
// vertices plus same-edge direct gaps.
double metric_distance(const WeightedGraph& g, const MetricSubset& a, const MetricSubset& b);

// (4 / d(A,B)^2) (log(vol1 X / sqrt(vol1 A vol1 B)))^2  >= lambda_2(X).
double lambda2_upper_bound(const WeightedGraph& g, const MetricSubset& a, const MetricSubset& b);

struct CheegerVerification {
  double lambda2_metric = 0, h_ub = 0;
  bool metric_ok = false;
  double lambda2_discrete = 0, h_discrete = 0;
  bool discrete_ok = false;
  bool discrete_applicable = false;
};

// lambda_2(X) >= h_ub(X)^2/4 and lambda_2(G) >= h(G)^2/2 on standard spaces.
CheegerVerification verify_cheeger(const WeightedGraph& g, int carve_depth = 1);

}  // namespace qg
