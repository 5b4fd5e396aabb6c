#include "qg/trace_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qg {

using std::numbers::pi;

int CombinatorialPath::step_tail(const WeightedGraph& g, int i) const {
  const BondStep& b = steps.at(i);
  return g.endpoint(b.edge, b.forward ? EdgeEnd::minus : EdgeEnd::plus);
}

int CombinatorialPath::step_head(const WeightedGraph& g, int i) const {
  const BondStep& b = steps.at(i);
  return g.endpoint(b.edge, b.forward ? EdgeEnd::plus : EdgeEnd::minus);
}

std::vector<int> CombinatorialPath::vertex_sequence(const WeightedGraph& g) const {
  std::vector<int> vs;
  for (int i = 0; i < length(); ++i) vs.push_back(step_head(g, i));
  return vs;
}

double CombinatorialPath::metric_length(const WeightedGraph& g) const {
  double ell = 0;
  for (const BondStep& b : steps) ell += g.edge(b.edge).length;
  return ell;
}

bool CombinatorialPath::properly_closed(const WeightedGraph& g) const {
  if (steps.empty()) return base_vertex >= 0;
  for (int i = 0; i < length(); ++i)
    if (step_head(g, i) != step_tail(g, (i + 1) % length())) return false;
  return true;
}

namespace {

void require_no_self_loops(const WeightedGraph& g) {
  if (g.has_self_loops())
    throw precondition_error("combinatorial path machinery requires a graph without self-loops");
}

// in-slot of an arriving bond and out-slot of a departing bond at a vertex,
// as local positions in SlotOrder
int end_slot_local(const WeightedGraph& g, const BondStep& b) {
  const int s = g.slot_index(b.edge, b.forward ? EdgeEnd::plus : EdgeEnd::minus);
  return g.slot_owner(s).second;
}
int start_slot_local(const WeightedGraph& g, const BondStep& b) {
  const int s = g.slot_index(b.edge, b.forward ? EdgeEnd::minus : EdgeEnd::plus);
  return g.slot_owner(s).second;
}

// Enumerates properly closed bond walks of length exactly n, invoking fn on
// each. Walks are pointed: every rotation is visited once.
void visit_closed_walks(const WeightedGraph& g, int n, std::size_t cap,
                        const std::function<void(const CombinatorialPath&)>& fn) {
  require_no_self_loops(g);
  if (n == 0) {
    for (int v = 0; v < g.num_vertices(); ++v) {
      CombinatorialPath c;
      c.base_vertex = v;
      fn(c);
    }
    return;
  }
  std::size_t visited = 0;
  CombinatorialPath c;
  c.steps.reserve(n);
  std::function<void(int)> dfs = [&](int at) {
    if (++visited > cap) throw numeric_error("path enumeration overflow (cap exceeded)");
    if (c.length() == n) {
      if (at == c.step_tail(g, 0)) fn(c);
      return;
    }
    for (const Slot& s : g.incident_slots(at)) {
      const BondStep next{s.edge, s.end == EdgeEnd::minus};
      c.steps.push_back(next);
      dfs(c.step_head(g, c.length() - 1));
      c.steps.pop_back();
    }
  };
  for (int e = 0; e < g.num_edges(); ++e)
    for (bool fwd : {true, false}) {
      c.steps = {BondStep{e, fwd}};
      dfs(c.step_head(g, 0));
    }
  c.steps.clear();
}

}  // namespace

std::vector<CombinatorialPath> enumerate_properly_closed(const WeightedGraph& g, int n,
                                                         std::size_t cap) {
  std::vector<CombinatorialPath> out;
  visit_closed_walks(g, n, cap, [&](const CombinatorialPath& c) {
    if (out.size() >= cap) throw numeric_error("path enumeration overflow (cap exceeded)");
    out.push_back(c);
  });
  return out;
}

std::size_t count_properly_closed(const WeightedGraph& g, int n, std::size_t cap) {
  std::size_t count = 0;
  visit_closed_walks(g, n, cap, [&](const CombinatorialPath&) { ++count; });
  return count;
}

namespace {

// lexicographic key of a step for rotation canonicalization: (edge, head vertex)
std::pair<int, int> step_key(const WeightedGraph& g, const CombinatorialPath& c, int i) {
  return {c.steps[i].edge, c.step_head(g, i)};
}

CombinatorialPath min_rotation(const WeightedGraph& g, const CombinatorialPath& c) {
  const int n = c.length();
  int best = 0;
  for (int r = 1; r < n; ++r) {
    for (int i = 0; i < n; ++i) {
      auto a = step_key(g, c, (r + i) % n), b = step_key(g, c, (best + i) % n);
      if (a < b) { best = r; break; }
      if (b < a) break;
    }
  }
  CombinatorialPath out;
  for (int i = 0; i < n; ++i) out.steps.push_back(c.steps[(best + i) % n]);
  return out;
}

}  // namespace

Cycle cycle_normal_form(const WeightedGraph& g, const CombinatorialPath& c) {
  if (!c.properly_closed(g)) throw precondition_error("path is not properly closed");
  Cycle cy;
  cy.metric_length = c.metric_length(g);
  if (c.length() == 0) {
    cy.rep = c;
    cy.prime_rep = c;
    cy.power = 1;
    return cy;
  }
  cy.rep = min_rotation(g, c);
  const int n = c.length();
  int period = n;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = cy.rep.steps[i] == cy.rep.steps[(i + d) % n];
    if (ok) { period = d; break; }
  }
  cy.power = n / period;
  CombinatorialPath base;
  base.steps.assign(cy.rep.steps.begin(), cy.rep.steps.begin() + period);
  cy.prime_rep = min_rotation(g, base);
  return cy;
}

cx scattering_amplitude(const WeightedGraph& g, const TotalVertexSpace& total,
                        const CombinatorialPath& c) {
  const int n = c.length();
  if (n == 0) return cx(1, 0);
  cx amp(1, 0);
  for (int i = 0; i < n; ++i) {
    const int v = c.step_head(g, i);
    const Mat s = scattering_matrix(total.spaces[v]);
    amp *= s(end_slot_local(g, c.steps[i]), start_slot_local(g, c.steps[(i + 1) % n]));
  }
  return amp;
}

namespace {

void require_simple_equilateral(const WeightedGraph& g) {
  if (g.has_self_loops() || g.has_double_edges() || !g.is_equilateral() ||
      std::abs(g.min_length() - 1.0) > 1e-12)
    throw precondition_error("discrete weights require a simple graph with unit lengths");
}

cx weight_from_blocks(const WeightedGraph& g, const PrincipalPart& pp,
                      const TotalVertexSpace& total, const CombinatorialPath& c) {
  if (c.length() == 0) return cx(total.spaces[c.base_vertex].dim(), 0);
  const auto vs = c.vertex_sequence(g);
  const int n = static_cast<int>(vs.size());
  Mat prod = pp.blocks.at({vs[0], vs[1 % n]});
  for (int i = 1; i < n; ++i) prod = prod * pp.blocks.at({vs[i], vs[(i + 1) % n]});
  return prod.trace();
}

}  // namespace

cx discrete_weight(const WeightedGraph& g, const TotalVertexSpace& total,
                   const CombinatorialPath& c) {
  require_simple_equilateral(g);
  return weight_from_blocks(g, principal_part(g, total), total, c);
}

cx path_weight_sum(const WeightedGraph& g, const TotalVertexSpace& total, int n, std::size_t cap) {
  require_simple_equilateral(g);
  const PrincipalPart pp = principal_part(g, total);
  cx sum(0, 0);
  visit_closed_walks(g, n, cap,
                     [&](const CombinatorialPath& c) { sum += weight_from_blocks(g, pp, total, c); });
  return sum;
}

ValueWithBound heat_trace_discrete(const WeightedGraph& g, const TotalVertexSpace& total,
                                   double t, int n_max) {
  require_simple_equilateral(g);
  if (t < 0 || n_max < 0) throw precondition_error("heat trace needs t >= 0 and N >= 0");
  const PrincipalPart pp = principal_part(g, total);
  const int dim = static_cast<int>(pp.m.rows());

  double value = 0;
  Mat power = Mat::Identity(dim, dim);
  double factor = std::exp(-t);  // e^{-t} t^n / n!
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      power = power * pp.m;
      factor *= t / n;
    }
    value += factor * std::real(power.trace());
  }

  // tail: e^{-t} sum_{n>N} t^n/n!, summed forward from the first dropped term
  double tail = 0;
  double term = std::exp(-t);
  for (int n = 1; n <= n_max + 1; ++n) term *= t / n;
  for (int n = n_max + 1; n < n_max + 1000000; ++n) {
    tail += term;
    if (term < 1e-300 || term < 1e-18 * tail) break;
    term *= t / (n + 1);
  }
  return {value, dim * tail};
}

std::vector<Cycle> prime_cycles(const WeightedGraph& g, double cutoff, std::size_t cap,
                                const TotalVertexSpace* prune_by_amplitude,
                                double* amplitude_slack) {
  require_no_self_loops(g);
  std::vector<Mat> sv;
  if (prune_by_amplitude)
    for (int v = 0; v < g.num_vertices(); ++v)
      sv.push_back(scattering_matrix(prune_by_amplitude->spaces[v]));
  int dmax = 1;
  for (int v = 0; v < g.num_vertices(); ++v) dmax = std::max(dmax, g.degree(v));
  constexpr double prune_tol = 1e-30;

  std::map<std::vector<std::pair<int, int>>, Cycle> cycles;  // canonical key -> cycle
  std::size_t visited = 0;
  CombinatorialPath c;

  auto record = [&](const CombinatorialPath& closed) {
    Cycle cy = cycle_normal_form(g, closed);
    if (!cy.prime()) return;
    std::vector<std::pair<int, int>> key;
    for (int i = 0; i < cy.rep.length(); ++i) key.push_back(step_key(g, cy.rep, i));
    cycles.try_emplace(std::move(key), std::move(cy));
  };

  std::function<void(int, double, cx)> dfs = [&](int at, double len, cx amp) {
    if (++visited > cap) throw numeric_error("cycle enumeration overflow (cap exceeded)");
    if (at == c.step_tail(g, 0)) record(c);
    for (const Slot& s : g.incident_slots(at)) {
      const double len2 = len + g.edge(s.edge).length;
      if (len2 > cutoff) continue;
      const BondStep next{s.edge, s.end == EdgeEnd::minus};
      cx amp2 = amp;
      if (prune_by_amplitude) {
        amp2 *= sv[at](end_slot_local(g, c.steps.back()), start_slot_local(g, next));
        if (std::abs(amp2) < prune_tol) {
          // every prime in the dropped subtree has |S| <= |amp2| and there are
          // at most dmax^depth_left of them
          if (amplitude_slack && amp2 != cx(0, 0)) {
            const double depth_left = std::max(0.0, (cutoff - len2) / g.min_length()) + 1;
            *amplitude_slack += std::abs(amp2) * std::pow(double(dmax), depth_left);
          }
          continue;
        }
      }
      c.steps.push_back(next);
      dfs(c.step_head(g, c.length() - 1), len2, amp2);
      c.steps.pop_back();
    }
  };

  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.edge(e).length > cutoff) continue;
    for (bool fwd : {true, false}) {
      c.steps = {BondStep{e, fwd}};
      dfs(c.step_head(g, 0), g.edge(e).length, cx(1, 0));
    }
  }

  std::vector<Cycle> out;
  for (auto& [key, cy] : cycles) out.push_back(std::move(cy));
  std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    return a.metric_length < b.metric_length;
  });
  return out;
}

ValueWithBound heat_trace_metric(const WeightedGraph& g, const TotalVertexSpace& total,
                                 double t, double cutoff, std::size_t cap) {
  require_no_self_loops(g);
  if (t <= 0) throw precondition_error("heat trace needs t > 0");
  const double weyl = g.total_length() / (2 * std::sqrt(pi * t));
  const IndexResult idx = index_discrete(g, total);

  double cycle_sum = 0;
  double pruned_amp = 0;
  for (const Cycle& cy : prime_cycles(g, cutoff, cap, &total, &pruned_amp)) {
    const cx s = scattering_amplitude(g, total, cy.rep);
    const double ell = cy.metric_length;
    cx contrib(0, 0);
    cx spow(1, 0);
    for (int p = 1; p * ell <= cutoff; ++p) {
      spow *= s;
      contrib += spow * ell * std::exp(-p * p * ell * ell / (4 * t));
    }
    cycle_sum += std::real(contrib);
  }

  // Gaussian-tail majorant over all dropped (cycle, power) pairs, grouped by
  // the combinatorial length of the repeated path
  int dmax = 1;
  for (int v = 0; v < g.num_vertices(); ++v) dmax = std::max(dmax, g.degree(v));
  const double l0 = g.min_length(), lmax = g.max_length();
  double est = 0;
  const int n_lo = std::max<int>(1, static_cast<int>(std::floor(cutoff / lmax)));
  for (int n = n_lo; n < n_lo + 200000; ++n) {
    const double d = std::max(n * l0, std::max(cutoff, 0.0));
    const double log_term = std::log(2.0 * g.num_edges()) + (n - 1) * std::log(double(dmax)) +
                            std::log(n * lmax) - d * d / (4 * t);
    const double term = std::exp(log_term);
    est += term;
    if (term < 1e-300 || term < 1e-18 * est) break;
  }

  // pruned primes: each contributes at most |S| ell sum_p exp(-p^2 ell^2/4t)
  const double powers_cap = 1.0 + 4 * t / (l0 * l0);
  est += pruned_amp * std::max(cutoff, 0.0) * powers_cap;

  const double norm = 1.0 / (2 * std::sqrt(pi * t));
  return {weyl + 0.5 * idx.index + norm * cycle_sum, norm * est};
}

double heat_kernel_metric(const WeightedGraph& g, const TotalVertexSpace& total,
                          MetricPoint x, MetricPoint y, double t, double cutoff,
                          std::size_t cap) {
  require_no_self_loops(g);
  auto check_point = [&](const MetricPoint& p) {
    if (p.edge < 0 || p.edge >= g.num_edges() || p.coord < 0 ||
        p.coord > g.edge(p.edge).length)
      throw precondition_error("point coordinate outside [0, ell_e]");
  };
  check_point(x);
  check_point(y);

  std::vector<Mat> sv;
  for (int v = 0; v < g.num_vertices(); ++v) sv.push_back(scattering_matrix(total.spaces[v]));

  cx sum(0, 0);
  if (x.edge == y.edge) sum += std::exp(-std::pow(x.coord - y.coord, 2) / (4 * t));

  std::size_t visited = 0;
  // walk states: arrived at vertex v on slot `in_local`, accumulated length acc
  std::function<void(int, int, double, cx)> dfs = [&](int v, int in_local, double acc, cx amp) {
    if (++visited > cap) throw numeric_error("path enumeration overflow (cap exceeded)");
    for (const Slot& s : g.incident_slots(v)) {
      const int out_local = g.slot_owner(g.slot_index(s.edge, s.end)).second;
      const cx amp2 = amp * sv[v](in_local, out_local);
      if (amp2 == cx(0, 0)) continue;
      // terminal transition onto y's edge
      if (s.edge == y.edge) {
        const double dist_y = s.end == EdgeEnd::minus ? y.coord : g.edge(s.edge).length - y.coord;
        const double d = acc + dist_y;
        if (dist_y > 0 && d <= cutoff) sum += amp2 * std::exp(-d * d / (4 * t));
      }
      // full traversal
      const double acc2 = acc + g.edge(s.edge).length;
      if (acc2 > cutoff) continue;
      const EdgeEnd far = s.end == EdgeEnd::minus ? EdgeEnd::plus : EdgeEnd::minus;
      dfs(g.endpoint(s.edge, far), g.slot_owner(g.slot_index(s.edge, far)).second, acc2, amp2);
    }
  };

  for (EdgeEnd end : {EdgeEnd::minus, EdgeEnd::plus}) {
    const double dist0 = end == EdgeEnd::minus ? x.coord : g.edge(x.edge).length - x.coord;
    if (dist0 <= 0 || dist0 > cutoff) continue;
    const int v0 = g.endpoint(x.edge, end);
    dfs(v0, g.slot_owner(g.slot_index(x.edge, end)).second, dist0, cx(1, 0));
  }

  return std::real(sum) / (2 * std::sqrt(pi * t));
}

}  // namespace qg
