#include "qg/isoperimetric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>

#include "qg/discrete_laplacian.hpp"
#include "qg/metric_laplacian.hpp"
#include "qg/vertex_space.hpp"

namespace qg {

MetricSubset MetricSubset::empty(const WeightedGraph& g) {
  MetricSubset s;
  s.intervals.resize(g.num_edges());
  return s;
}

double MetricSubset::vol1() const {
  double v = 0;
  for (const auto& edge_ints : intervals)
    for (const auto& [a, b] : edge_ints) v += b - a;
  return v;
}

static void check_intervals(const WeightedGraph& g, const MetricSubset& s) {
  if (static_cast<int>(s.intervals.size()) != g.num_edges())
    throw precondition_error("subset interval table does not match the edge count");
  for (int e = 0; e < g.num_edges(); ++e) {
    double prev = -1;
    for (const auto& [a, b] : s.intervals[e]) {
      if (!(a < b) || a < 0 || b > g.edge(e).length)
        throw precondition_error("invalid interval on edge '" + g.edge(e).name + "'");
      if (a <= prev) throw precondition_error("intervals overlap or are unsorted");
      prev = b;
    }
  }
}

void MetricSubset::check_consistent(const WeightedGraph& g) const {
  check_intervals(g, *this);
  // a member vertex needs every incident slot covered up to the endpoint
  for (int v : vertices) {
    for (const Slot& s : g.incident_slots(v)) {
      const double ell = g.edge(s.edge).length;
      bool touched = false;
      for (const auto& [a, b] : intervals[s.edge])
        if ((s.end == EdgeEnd::minus && a == 0.0) || (s.end == EdgeEnd::plus && b == ell))
          touched = true;
      if (!touched)
        throw precondition_error("vertex '" + g.vertex_name(v) +
                                 "' in subset without a neighborhood on every incident slot");
    }
  }
}

// ---------------------------------------------------------------------------
// Discrete Cheeger constant

namespace {

struct SubsetScan {
  const WeightedGraph& g;
  double vol_total = 0;
  std::vector<int> deg;
  DiscreteCheegerResult best{std::numeric_limits<double>::infinity(), {}};

  explicit SubsetScan(const WeightedGraph& gg) : g(gg), deg(gg.num_vertices()) {
    for (int v = 0; v < g.num_vertices(); ++v) {
      deg[v] = g.degree(v);
      vol_total += deg[v];
    }
  }

  void consider(std::uint32_t mask) {
    const int nv = g.num_vertices();
    if (mask == 0 || mask == (nv == 32 ? ~0u : (1u << nv) - 1)) return;
    int cut = 0;
    double vol = 0;
    for (int v = 0; v < nv; ++v)
      if (mask >> v & 1) vol += deg[v];
    for (int e = 0; e < g.num_edges(); ++e) {
      const bool t = mask >> g.edge(e).tail & 1, h = mask >> g.edge(e).head & 1;
      if (t != h) ++cut;
    }
    const double denom = std::min(vol, vol_total - vol);
    if (denom <= 0) return;
    const double ratio = cut / denom;
    if (ratio < best.h) {
      best.h = ratio;
      best.witness.clear();
      for (int v = 0; v < nv; ++v)
        if (mask >> v & 1) best.witness.push_back(v);
    }
  }
};

}  // namespace

DiscreteCheegerResult cheeger_discrete(const WeightedGraph& g, bool exhaustive) {
  if (g.has_self_loops()) throw precondition_error("discrete Cheeger requires no self-loops");
  if (!g.is_equilateral() || std::abs(g.min_length() - 1.0) > 1e-12)
    throw precondition_error("discrete Cheeger requires unit edge lengths");
  const int nv = g.num_vertices();
  SubsetScan scan(g);
  if (exhaustive) {
    if (nv > 24) throw precondition_error("exhaustive Cheeger search capped at 24 vertices");
    for (std::uint32_t m = 1; m + 1 < (1u << nv); ++m) scan.consider(m);
    return scan.best;
  }
  // Fiedler sweep: order by the second eigenvector of the standard Laplacian,
  // take prefix cuts
  TotalVertexSpace std_total = standard_total(g);
  HermEig eig = hermitian_eigen(laplacian(g, std_total, 0));
  std::vector<std::pair<double, int>> order;
  for (int v = 0; v < nv; ++v) order.push_back({std::real(eig.vectors(v, 1)), v});
  std::sort(order.begin(), order.end());
  std::uint32_t mask = 0;
  for (int i = 0; i + 1 < nv; ++i) {
    mask |= 1u << order[i].second;
    scan.consider(mask);
  }
  return scan.best;
}

// ---------------------------------------------------------------------------
// Metric Cheeger upper bound

MetricCheegerResult cheeger_metric_upper(const WeightedGraph& g, int carve_depth) {
  if (!g.connected_underlying()) throw precondition_error("metric Cheeger requires a connected graph");
  const int nv = g.num_vertices();
  const int ne = g.num_edges();
  if (nv > 20) throw precondition_error("labeling enumeration capped at 20 vertices");
  const double vol_total = g.total_length();

  MetricCheegerResult best{std::numeric_limits<double>::infinity(), {}};
  auto consider = [&](std::uint32_t mask, const std::vector<int>& carved) {
    int boundary = 0;
    double vol_fixed = 0, vol_free = 0;  // fixed volume + freely adjustable span
    for (int e = 0; e < ne; ++e) {
      const bool t = mask >> g.edge(e).tail & 1, h = mask >> g.edge(e).head & 1;
      const bool is_carved = std::find(carved.begin(), carved.end(), e) != carved.end();
      if (t != h) {
        ++boundary;
        vol_free += g.edge(e).length;
      } else if (is_carved) {
        boundary += 2;
        vol_free += g.edge(e).length;
      } else if (t) {
        vol_fixed += g.edge(e).length;
      }
    }
    if (boundary == 0) return;
    const double lo = vol_fixed, hi = vol_fixed + vol_free;
    const double vol = std::clamp(vol_total / 2, lo, hi);
    const double denom = std::min(vol, vol_total - vol);
    if (denom <= 0) return;
    const double ratio = boundary / denom;
    const bool better =
        ratio < best.h_ub ||
        (ratio == best.h_ub && boundary < best.witness.boundary_points);
    if (!better) return;

    CutConfiguration w;
    w.label.assign(nv, 0);
    for (int v = 0; v < nv; ++v) w.label[v] = mask >> v & 1;
    w.carved = carved;
    w.boundary_points = boundary;
    w.volume = vol;
    w.ratio = ratio;
    // realize the optimum: greedily distribute vol - lo over the free edges
    double need = vol - lo;
    for (int e = 0; e < ne; ++e) {
      const bool t = mask >> g.edge(e).tail & 1, h = mask >> g.edge(e).head & 1;
      const bool is_carved = std::find(carved.begin(), carved.end(), e) != carved.end();
      if (t == h && !is_carved) continue;
      const double take = std::clamp(need, 0.0, g.edge(e).length);
      w.cut_positions.push_back({e, take});
      need -= take;
    }
    best.h_ub = ratio;
    best.witness = std::move(w);
  };

  std::vector<int> mono;
  for (std::uint32_t mask = 0; mask < (1u << nv); ++mask) {
    mono.clear();
    for (int e = 0; e < ne; ++e) {
      const bool t = mask >> g.edge(e).tail & 1, h = mask >> g.edge(e).head & 1;
      if (t == h) mono.push_back(e);
    }
    std::vector<int> carved;
    std::function<void(std::size_t, int)> choose = [&](std::size_t from, int depth) {
      consider(mask, carved);
      if (depth == 0) return;
      for (std::size_t i = from; i < mono.size(); ++i) {
        carved.push_back(mono[i]);
        choose(i + 1, depth - 1);
        carved.pop_back();
      }
    };
    choose(0, carve_depth);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Distances and the eigenvalue upper bound

namespace {

// distance from every vertex to the subset (initial potentials + Dijkstra)
std::vector<double> distances_to_subset(const WeightedGraph& g, const MetricSubset& s) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.num_vertices(), inf);
  for (int v : s.vertices) dist[v] = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    const double ell = g.edge(e).length;
    for (const auto& [a, b] : s.intervals[e]) {
      dist[g.edge(e).tail] = std::min(dist[g.edge(e).tail], a);
      dist[g.edge(e).head] = std::min(dist[g.edge(e).head], ell - b);
    }
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (dist[v] < inf) pq.push({dist[v], v});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const Slot& sl : g.incident_slots(v)) {
      const int w = g.endpoint(sl.edge, sl.end == EdgeEnd::minus ? EdgeEnd::plus : EdgeEnd::minus);
      const double nd = d + g.edge(sl.edge).length;
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return dist;
}

void check_disjoint(const WeightedGraph& g, const MetricSubset& a, const MetricSubset& b) {
  for (int v : a.vertices)
    for (int w : b.vertices)
      if (v == w) throw precondition_error("subsets overlap at a vertex");
  for (int e = 0; e < g.num_edges(); ++e)
    for (const auto& [a1, b1] : a.intervals[e])
      for (const auto& [a2, b2] : b.intervals[e])
        if (std::max(a1, a2) < std::min(b1, b2))
          throw precondition_error("subsets overlap on edge '" + g.edge(e).name + "'");
}

}  // namespace

double metric_distance(const WeightedGraph& g, const MetricSubset& a, const MetricSubset& b) {
  check_intervals(g, a);
  check_intervals(g, b);
  if (a.vol1() == 0 && a.vertices.empty()) throw precondition_error("subset A is empty");
  if (b.vol1() == 0 && b.vertices.empty()) throw precondition_error("subset B is empty");
  check_disjoint(g, a, b);

  const std::vector<double> da = distances_to_subset(g, a);
  const std::vector<double> db = distances_to_subset(g, b);
  double d = std::numeric_limits<double>::infinity();
  for (int v = 0; v < g.num_vertices(); ++v) d = std::min(d, da[v] + db[v]);

  // direct same-edge gaps, no vertex in between
  for (int e = 0; e < g.num_edges(); ++e)
    for (const auto& [a1, b1] : a.intervals[e])
      for (const auto& [a2, b2] : b.intervals[e])
        d = std::min(d, std::max(a2 - b1, a1 - b2));
  return std::max(d, 0.0);
}

double lambda2_upper_bound(const WeightedGraph& g, const MetricSubset& a, const MetricSubset& b) {
  const double va = a.vol1(), vb = b.vol1();
  if (va <= 0 || vb <= 0) throw precondition_error("subsets must have positive volume");
  const double d = metric_distance(g, a, b);
  if (d <= 0) throw precondition_error("subsets must be at positive distance");
  const double log_term = std::log(g.total_length() / std::sqrt(va * vb));
  return 4.0 / (d * d) * log_term * log_term;
}

// ---------------------------------------------------------------------------

CheegerVerification verify_cheeger(const WeightedGraph& g, int carve_depth) {
  if (!g.connected_underlying()) throw precondition_error("Cheeger verification requires connectivity");
  CheegerVerification r;
  TotalVertexSpace std_total = standard_total(g);

  MetricCheegerResult mc = cheeger_metric_upper(g, carve_depth);
  r.h_ub = mc.h_ub;
  // lambda_2 <= second decoupled Dirichlet eigenvalue <= (2 pi / ell_min)^2
  const double scan_max = std::pow(2 * std::numbers::pi / g.min_length(), 2) + 1;
  SpectrumResult bond = bond_secular_spectrum(g, std_total, scan_max);
  for (const auto& line : bond.lines)
    if (line.lambda > 1e-9) {
      r.lambda2_metric = line.lambda;
      break;
    }
  r.metric_ok = r.lambda2_metric >= mc.h_ub * mc.h_ub / 4 - 1e-9;

  r.discrete_applicable =
      !g.has_self_loops() && g.is_equilateral() && std::abs(g.min_length() - 1.0) <= 1e-12;
  if (r.discrete_applicable) {
    DiscreteCheegerResult dc = cheeger_discrete(g, g.num_vertices() <= 16);
    r.h_discrete = dc.h;
    RVec ev = hermitian_eigenvalues(laplacian(g, std_total, 0));
    r.lambda2_discrete = ev.size() > 1 ? ev(1) : 0.0;
    r.discrete_ok = r.lambda2_discrete >= dc.h * dc.h / 2 - 1e-9;
  }
  return r;
}

}  // namespace qg
