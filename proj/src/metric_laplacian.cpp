#include "qg/metric_laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qg {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Dirichlet set

DirichletSet DirichletSet::compute(const WeightedGraph& g, double lambda_max) {
  DirichletSet s;
  s.lambda_max = lambda_max;
  std::vector<std::pair<double, int>> raw;
  for (int e = 0; e < g.num_edges(); ++e) {
    const double ell = g.edge(e).length;
    for (int k = 1;; ++k) {
      const double val = (pi * k / ell) * (pi * k / ell);
      if (val > lambda_max + window(val)) break;
      raw.push_back({val, e});
    }
  }
  std::sort(raw.begin(), raw.end());
  for (const auto& [val, e] : raw) {
    if (!s.values.empty() && val - s.values.back().lambda <= 1e-12 * (1 + val))
      s.values.back().edges.push_back(e);
    else
      s.values.push_back({val, {e}});
  }
  return s;
}

bool DirichletSet::excluded(double z) const {
  for (const auto& v : values)
    if (std::abs(z - v.lambda) <= window(v.lambda)) return true;
  return false;
}

std::vector<std::pair<double, double>> DirichletSet::windows() const {
  std::vector<std::pair<double, double>> w;
  for (const auto& v : values) {
    double a = v.lambda - window(v.lambda), b = v.lambda + window(v.lambda);
    if (!w.empty() && a <= w.back().second)
      w.back().second = std::max(w.back().second, b);
    else
      w.push_back({a, b});
  }
  for (auto& [a, b] : w) {
    a = std::max(a, 0.0);
    b = std::min(b, lambda_max);
  }
  return w;
}

// ---------------------------------------------------------------------------
// DtN map

static void check_off_sigma(const WeightedGraph& g, cx z) {
  for (int e = 0; e < g.num_edges(); ++e) {
    const double ell = g.edge(e).length;
    const double re = std::max(std::real(z), 0.0);
    const int m = static_cast<int>(std::lround(std::sqrt(re) * ell / pi));
    if (m < 1) continue;
    const double sigma = (pi * m / ell) * (pi * m / ell);
    if (std::abs(z - sigma) <= DirichletSet::window(sigma))
      throw precondition_error("spectral parameter inside the exclusion window of the Dirichlet set");
  }
}

Mat dtn_matrix(const WeightedGraph& g, const TotalVertexSpace& total, cx z) {
  check_off_sigma(g, z);
  Mat m = Mat::Zero(g.num_slots(), g.num_slots());
  const bool affine = std::abs(z) < 1e-12;
  const cx s = std::sqrt(z);
  for (int e = 0; e < g.num_edges(); ++e) {
    const double ell = g.edge(e).length;
    cx diag, cross;
    if (affine) {
      diag = 1.0 / ell;
      cross = -1.0 / ell;
    } else {
      const cx sn = std::sin(s * ell);
      diag = s * std::cos(s * ell) / sn;
      cross = -s / sn;
    }
    const int sm = g.slot_index(e, EdgeEnd::minus);
    const int sp = g.slot_index(e, EdgeEnd::plus);
    m(sm, sm) += diag;
    m(sp, sp) += diag;
    m(sm, sp) += cross;
    m(sp, sm) += cross;
  }
  Mat b = total.full_basis(g);
  return b.adjoint() * m * b;
}

// ---------------------------------------------------------------------------
// DtN secular scan

SpectrumResult secular_spectrum_dtn(const WeightedGraph& g, const TotalVertexSpace& total,
                                    double lambda_max, double tol) {
  if (lambda_max <= 0) throw precondition_error("lambda_max must be positive");
  SpectrumResult out;
  DirichletSet sigma = DirichletSet::compute(g, lambda_max);
  out.unresolved = sigma.windows();

  const int dim = total.total_dim();
  if (dim == 0) return out;  // Q lives on a zero-dimensional space

  // conservative against root skipping; branches are monotone between poles
  double step = pi * pi / (4.0 * std::sqrt(lambda_max) * g.max_length());
  for (size_t i = 1; i < sigma.values.size(); ++i)
    step = std::min(step, (sigma.values[i].lambda - sigma.values[i - 1].lambda) / 4.0);
  step = std::min(step, lambda_max / 64.0);
  step = std::max(step, 1e-9);

  auto branches = [&](double lam) { return hermitian_eigenvalues(dtn_matrix(g, total, lam), -1); };

  // scan segments between exclusion windows, inset so the endpoints stay
  // strictly outside the excluded closed windows
  auto inset = [](double x) { return 2.5e-7 * (1 + std::abs(x)); };
  std::vector<std::pair<double, double>> segments;
  double a = 0.0;
  for (const auto& [wa, wb] : out.unresolved) {
    if (wa - inset(wa) > a) segments.push_back({a, wa - inset(wa)});
    a = wb + inset(wb);
  }
  if (a < lambda_max) segments.push_back({a, lambda_max});

  std::vector<std::pair<double, int>> roots;  // (lambda, branch hits)
  for (const auto& [sa, sb] : segments) {
    const int npts = std::max(2, static_cast<int>(std::ceil((sb - sa) / step)) + 1);
    const double h = (sb - sa) / (npts - 1);
    RVec prev = branches(sa);
    if (sa == 0.0) {
      // lambda = 0 cannot show as a sign change (branches only decrease)
      const double t0 = tol * (1 + prev.cwiseAbs().maxCoeff());
      for (int i = 0; i < dim; ++i)
        if (std::abs(prev(i)) < t0) roots.push_back({sa, i});
    }
    for (int j = 1; j < npts; ++j) {
      const double lb = sa + j * h;
      RVec cur = branches(lb);
      for (int i = 0; i < dim; ++i) {
        if (prev(i) > 0 && cur(i) <= 0) {
          double lo = lb - h, hi = lb;
          for (int it = 0; it < 200 && hi - lo > 1e-14 * (1 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (branches(mid)(i) > 0 ? lo : hi) = mid;
          }
          roots.push_back({0.5 * (lo + hi), i});
        }
      }
      prev = cur;
    }
  }

  std::sort(roots.begin(), roots.end());
  size_t i = 0;
  while (i < roots.size()) {
    size_t j = i + 1;
    while (j < roots.size() && roots[j].first - roots[j - 1].first <= 1e-8 * (1 + roots[j].first)) ++j;
    double lam = 0;
    for (size_t q = i; q < j; ++q) lam += roots[q].first;
    lam /= (j - i);
    RVec ev = branches(lam);
    const double t = tol * (1 + ev.cwiseAbs().maxCoeff());
    int mult = 0;
    for (int q = 0; q < dim; ++q)
      if (std::abs(ev(q)) < t) ++mult;
    if (mult > 0) out.lines.push_back({lam, mult, "dtn"});
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bond secular method

namespace {

struct BondTable {
  // bond 2e: forward (minus -> plus); bond 2e+1: backward
  int start_slot(const WeightedGraph& g, int b) const {
    return g.slot_index(b / 2, b % 2 == 0 ? EdgeEnd::minus : EdgeEnd::plus);
  }
  int end_slot(const WeightedGraph& g, int b) const {
    return g.slot_index(b / 2, b % 2 == 0 ? EdgeEnd::plus : EdgeEnd::minus);
  }
};

}  // namespace

Mat bond_matrix(const WeightedGraph& g, const TotalVertexSpace& total) {
  const int nb = 2 * g.num_edges();
  BondTable bt;
  Mat s = Mat::Zero(nb, nb);
  std::vector<Mat> sv;
  for (int v = 0; v < g.num_vertices(); ++v) sv.push_back(scattering_matrix(total.spaces[v]));
  for (int bin = 0; bin < nb; ++bin) {
    const auto [v, in_local] = g.slot_owner(bt.end_slot(g, bin));
    for (int bout = 0; bout < nb; ++bout) {
      const auto [w, out_local] = g.slot_owner(bt.start_slot(g, bout));
      if (w == v) s(bout, bin) = sv[v](in_local, out_local);  // S_{e,e'}(v)
    }
  }
  return s;
}

Mat bond_evolution(const WeightedGraph& g, const TotalVertexSpace& total, double k) {
  Mat u = bond_matrix(g, total);
  const int nb = 2 * g.num_edges();
  Vec d(nb);
  for (int b = 0; b < nb; ++b) d(b) = std::polar(1.0, k * g.edge(b / 2).length);
  return u * d.asDiagonal();
}

namespace {

// golden-section minimization of f over [a, b] down to width `width`
template <typename F>
double golden_min(F&& f, double a, double b, double width) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > width) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a); f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SpectrumResult bond_secular_spectrum(const WeightedGraph& g, const TotalVertexSpace& total,
                                     double lambda_max, double tol) {
  if (lambda_max <= 0) throw precondition_error("lambda_max must be positive");
  SpectrumResult out;

  const MetricIndexResult idx = metric_index(g, total);
  if (idx.h0 > 0) out.lines.push_back({0.0, idx.h0, "index"});

  const Mat s_bond = bond_matrix(g, total);
  const int nb = 2 * g.num_edges();
  Vec lens(nb);
  for (int b = 0; b < nb; ++b) lens(b) = g.edge(b / 2).length;

  auto evolution = [&](double k) -> Mat {
    Vec d(nb);
    for (int b = 0; b < nb; ++b) d(b) = std::polar(1.0, k * std::real(lens(b)));
    return s_bond * d.asDiagonal();
  };
  // I - U is normal (U unitary), so its squared singular values are the
  // eigenvalues of the Hermitian 2(I - Re U). Cheap surrogate for bracketing;
  // the second-smallest value doubles as a hidden-neighbor detector.
  auto lowest_two = [&](double k) -> std::pair<double, double> {
    Mat u = evolution(k);
    Mat h = 2.0 * Mat::Identity(nb, nb) - u - u.adjoint();
    RVec ev = hermitian_eigenvalues(h, -1);
    return {ev(0), ev.size() > 1 ? ev(1) : 1e300};
  };
  auto surrogate = [&](double k) { return lowest_two(k).first; };
  auto smin = [&](double k) {
    return sigma_min(Mat::Identity(nb, nb) - evolution(k));
  };

  const double k_min = 1e-5, k_max = std::sqrt(lambda_max);
  const double lmax_edge = g.max_length();
  const double step = std::clamp(pi / (4.0 * g.total_length()), 1e-4, 0.01);
  std::vector<double> found;
  std::vector<double> zoom_queue;
  auto near_found = [&](double k, double width) {
    for (double r : found)
      if (std::abs(r - k) < width) return true;
    return false;
  };
  // refine a bracketed dip: golden section on the smooth surrogate first, then
  // on sigma_min itself for absolute accuracy ~1e-15. Skip radii and the
  // polish window shrink with the bracket so deep zoom levels can still accept
  // a new root close to a known one.
  auto refine = [&](double lo, double hi, double h) {
    const double stage1 = std::min(1e-6, h / 4);
    const double k1 = golden_min(surrogate, lo, hi, stage1);
    if (near_found(k1, std::min(1e-6, h) * (1 + k1))) return;  // a known root again
    const double w2 = std::max(2 * stage1, 1e-9);
    const double k2 = golden_min(smin, std::max(k_min, k1 - w2), std::min(k_max, k1 + w2), 5e-13);
    const double s2 = smin(k2);
    if (s2 >= tol || near_found(k2, 1e-8 * (1 + k2))) return;
    // reject shoulder points of a nearby zero: sigma_min(k2) < tol also holds
    // within tol/slope of a root without being its bottom
    const double delta = 1e-10 * (1 + k2);
    if (s2 > smin(k2 - delta) || s2 > smin(k2 + delta)) return;
    found.push_back(k2);
    zoom_queue.push_back(k2);
  };

  // pass 1: promoted local minima of the surrogate on the coarse grid
  {
    const int npts = std::max(3, static_cast<int>(std::ceil((k_max - k_min) / step)));
    const double h = (k_max - k_min) / npts;
    std::vector<double> vs(npts + 1);
    for (int j = 0; j <= npts; ++j) vs[j] = surrogate(k_min + j * h);
    const double promote = std::pow(2.0 * lmax_edge * h, 2);
    for (int j = 0; j <= npts; ++j) {
      const bool local_min =
          (j == 0 || vs[j] <= vs[j - 1]) && (j == npts || vs[j] <= vs[j + 1]);
      if (!local_min || vs[j] > promote) continue;
      refine(k_min + std::max(0, j - 1) * h, k_min + std::min(npts, j + 1) * h, h);
    }
  }

  // pass 2: zoom around every accepted root on geometrically finer rings, so a
  // neighbor hiding in the same coarse cell surfaces once the ring spacing
  // drops below the gap. The detector is the SECOND singular value: the center
  // root's own dip leaves it large, a second root nearby pulls it down.
  for (std::size_t qi = 0; qi < zoom_queue.size(); ++qi) {
    const double center = zoom_queue[qi];
    for (int level = 1; level <= 12; ++level) {
      const double h = step / std::pow(3.0, level);
      for (int j : {-5, -4, -3, -2, 2, 3, 4, 5}) {
        const double k = center + j * h;
        if (k <= k_min || k >= k_max) continue;
        if (near_found(k, 2 * h)) continue;  // some known root owns this sample
        const double d = std::abs(k - center);
        const double thr = 2.0 * lmax_edge * (d + 2 * h);
        if (lowest_two(k).second < thr * thr) refine(k - h, k + h, h);
      }
    }
  }

  std::sort(found.begin(), found.end());
  for (double k : found) {
    RVec sv = singular_values(Mat::Identity(nb, nb) - evolution(k));
    int mult = 0;
    for (int q = 0; q < sv.size(); ++q)
      if (sv(q) < tol) ++mult;
    if (mult > 0) out.lines.push_back({k * k, mult, "bond"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equilateral transfer

SpectrumResult equilateral_spectrum(const WeightedGraph& g, const TotalVertexSpace& total,
                                    double lambda_max) {
  if (!g.is_equilateral(1e-12))
    throw precondition_error("equilateral transfer requires all edge lengths equal");
  const double c = g.edge(0).length;
  SpectrumResult disc = spectrum_discrete(laplacian(g, total, 0));

  struct Lift {
    double lambda;
    int mult;
    bool dirichlet;
  };
  std::vector<Lift> lifts;
  for (const auto& line : disc.lines) {
    double x = 1.0 - c * line.lambda;
    x = std::clamp(x, -1.0, 1.0);
    double alpha = std::acos(x);
    // acos turns eigenvalue roundoff near mu in {0, 2/c} into ~1e-8 of angle;
    // snap so Dirichlet points are recognized and the two branches merge
    if (alpha < 1e-7) alpha = 0.0;
    if (pi - alpha < 1e-7) alpha = pi;
    std::vector<double> thetas;
    for (int k = 0;; ++k) {
      bool done = true;
      for (double th : {alpha + 2 * pi * k, -alpha + 2 * pi * (k + 1)}) {
        if (th < 0) continue;
        const double lam = (th / c) * (th / c);
        if (lam > lambda_max) continue;
        done = false;
        bool dup = false;
        for (double prev : thetas)
          if (std::abs(prev - th) < 1e-9) dup = true;
        if (!dup) thetas.push_back(th);
      }
      if (done && (2 * pi * k / c) * (2 * pi * k / c) > lambda_max) break;
    }
    for (double th : thetas) {
      const double r = std::remainder(th, pi);
      const bool dirichlet = th > 1e-9 && std::abs(r) < 1e-9;
      lifts.push_back({(th / c) * (th / c), line.multiplicity, dirichlet});
    }
  }
  std::sort(lifts.begin(), lifts.end(), [](const Lift& a, const Lift& b) { return a.lambda < b.lambda; });

  SpectrumResult out;
  out.cluster_tol = disc.cluster_tol;
  for (const auto& l : lifts) {
    if (!out.lines.empty() && l.lambda - out.lines.back().lambda <= 1e-9 * (1 + l.lambda)) {
      out.lines.back().multiplicity += l.mult;
      if (l.dirichlet) out.lines.back().tag = "dirichlet-point, multiplicity unverified";
    } else {
      out.lines.push_back({l.lambda, l.mult,
                           l.dirichlet ? "dirichlet-point, multiplicity unverified" : "equilateral"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// FEM oracle

SpectrumResult fem_spectrum(const WeightedGraph& g, const TotalVertexSpace& total,
                            int n_per_unit, int count) {
  if (count < 1) throw precondition_error("count must be >= 1");
  const int dim_g = total.total_dim();

  // dof layout: vertex coordinates first, then interior nodes edge by edge
  std::vector<int> interior_offset(g.num_edges() + 1, dim_g);
  std::vector<int> segs(g.num_edges());
  double h_max = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    segs[e] = segments_per_edge(g.edge(e).length, n_per_unit);
    h_max = std::max(h_max, g.edge(e).length / segs[e]);
    interior_offset[e + 1] = interior_offset[e] + segs[e] - 1;
  }
  const int n_dof = interior_offset[g.num_edges()];
  if (count > n_dof)
    throw precondition_error("count exceeds the discrete dimension " + std::to_string(n_dof));

  // scatter list of a mesh node: value = sum coeff * dof
  using Scatter = std::vector<std::pair<int, cx>>;
  auto endpoint_scatter = [&](int e, EdgeEnd end) {
    Scatter sc;
    const auto [v, local] = g.slot_owner(g.slot_index(e, end));
    const VertexSpace& s = total.spaces[v];
    const int off = total.offset(v);
    for (int j = 0; j < s.dim(); ++j) sc.push_back({off + j, s.basis(local, j)});
    return sc;
  };

  Mat stiff = Mat::Zero(n_dof, n_dof), mass = Mat::Zero(n_dof, n_dof);
  for (int e = 0; e < g.num_edges(); ++e) {
    const int m = segs[e];
    const double h = g.edge(e).length / m;
    auto node_scatter = [&](int i) -> Scatter {
      if (i == 0) return endpoint_scatter(e, EdgeEnd::minus);
      if (i == m) return endpoint_scatter(e, EdgeEnd::plus);
      return {{interior_offset[e] + i - 1, cx(1, 0)}};
    };
    const double k_loc[2][2] = {{1 / h, -1 / h}, {-1 / h, 1 / h}};
    const double m_loc[2][2] = {{h / 3, h / 6}, {h / 6, h / 3}};
    for (int i = 0; i < m; ++i) {
      Scatter sc[2] = {node_scatter(i), node_scatter(i + 1)};
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          for (const auto& [ip, cp] : sc[p])
            for (const auto& [iq, cq] : sc[q]) {
              stiff(ip, iq) += std::conj(cp) * k_loc[p][q] * cq;
              mass(ip, iq) += std::conj(cp) * m_loc[p][q] * cq;
            }
    }
  }

  RVec ev = generalized_hermitian_eigenvalues(stiff, mass);
  SpectrumResult out;
  out.fem_h = h_max;
  const double delta = 1e-7 * (1 + std::abs(ev(std::min<int>(count, ev.size()) - 1)));
  out.cluster_tol = delta;
  RVec head = ev.head(count);
  for (auto [val, mult] : cluster_values(head, delta)) out.lines.push_back({val, mult, "fem"});
  return out;
}

double fem_eigenvalue_error_estimate(double lambda, double h) {
  return lambda * lambda * h * h / 12.0 + 1e-12 * (1 + std::abs(lambda));
}

// ---------------------------------------------------------------------------
// Eigenfunctions

cx EdgewiseSolution::value(const WeightedGraph& g, int e, double x) const {
  const double ell = g.edge(e).length;
  const auto& [a, b] = coeff.at(e);
  if (std::abs(z) < 1e-12) return a * (1.0 - x / ell) + b * (x / ell);
  const cx s = std::sqrt(z);
  const cx sn = std::sin(s * ell);
  return a * std::sin(s * (ell - x)) / sn + b * std::sin(s * x) / sn;
}

cx EdgewiseSolution::derivative(const WeightedGraph& g, int e, double x) const {
  const double ell = g.edge(e).length;
  const auto& [a, b] = coeff.at(e);
  if (std::abs(z) < 1e-12) return (b - a) / ell;
  const cx s = std::sqrt(z);
  const cx sn = std::sin(s * ell);
  return -a * s * std::cos(s * (ell - x)) / sn + b * s * std::cos(s * x) / sn;
}

EdgewiseSolution eigenfunction(const WeightedGraph& g, const TotalVertexSpace& total,
                               double lambda, const Vec& f_coords, double tol) {
  const Mat q = dtn_matrix(g, total, lambda);  // also enforces lambda off Sigma
  const double qn = inf_norm(q);
  if ((q * f_coords).norm() > tol * (1 + qn) * f_coords.norm() || f_coords.norm() == 0)
    throw precondition_error("F is not in the numerical kernel of Q(lambda)");
  const Vec slot_values = total.full_basis(g) * f_coords;
  EdgewiseSolution sol;
  sol.z = lambda;
  for (int e = 0; e < g.num_edges(); ++e)
    sol.coeff.push_back({slot_values(g.slot_index(e, EdgeEnd::minus)),
                         slot_values(g.slot_index(e, EdgeEnd::plus))});
  return sol;
}

ResidualReport check_eigenfunction(const WeightedGraph& g, const TotalVertexSpace& total,
                                   const EdgewiseSolution& sol) {
  ResidualReport r{0, 0, 0};
  double scale = 0;
  for (int e = 0; e < g.num_edges(); ++e)
    for (int i = 0; i <= 8; ++i)
      scale = std::max(scale, std::abs(sol.value(g, e, g.edge(e).length * i / 8.0)));
  if (scale == 0) scale = 1;

  // independent finite-difference check of -f'' = z f (5-point stencil)
  for (int e = 0; e < g.num_edges(); ++e) {
    const double ell = g.edge(e).length;
    const double h = ell / 256;
    for (int i = 2; i <= 254; i += 36) {
      const double x = i * h;
      const cx fdd = (-sol.value(g, e, x - 2 * h) + 16.0 * sol.value(g, e, x - h) -
                      30.0 * sol.value(g, e, x) + 16.0 * sol.value(g, e, x + h) -
                      sol.value(g, e, x + 2 * h)) /
                     (12 * h * h);
      r.ode = std::max(r.ode, std::abs(-fdd - sol.z * sol.value(g, e, x)) /
                                  ((1 + std::abs(sol.z)) * scale));
    }
  }

  // vertex conditions from freshly evaluated traces
  Vec under(g.num_slots()), orient_deriv(g.num_slots());
  for (int e = 0; e < g.num_edges(); ++e) {
    const double ell = g.edge(e).length;
    under(g.slot_index(e, EdgeEnd::minus)) = sol.value(g, e, 0.0);
    under(g.slot_index(e, EdgeEnd::plus)) = sol.value(g, e, ell);
    orient_deriv(g.slot_index(e, EdgeEnd::minus)) = -sol.derivative(g, e, 0.0);
    orient_deriv(g.slot_index(e, EdgeEnd::plus)) = sol.derivative(g, e, ell);
  }
  const Mat p = total.full_projection(g);
  r.trace = inf_norm(under - p * under) / scale;
  r.flux = inf_norm(p * orient_deriv) / ((1 + std::sqrt(std::abs(sol.z))) * scale);
  return r;
}

// ---------------------------------------------------------------------------
// Metric index

MetricIndexResult metric_index(const WeightedGraph& g, const TotalVertexSpace& total) {
  const int ne = g.num_edges();
  Mat iota = Mat::Zero(g.num_slots(), ne), iota_pm = Mat::Zero(g.num_slots(), ne);
  for (int e = 0; e < ne; ++e) {
    iota(g.slot_index(e, EdgeEnd::minus), e) = 1;
    iota(g.slot_index(e, EdgeEnd::plus), e) = 1;
    iota_pm(g.slot_index(e, EdgeEnd::minus), e) = -1;
    iota_pm(g.slot_index(e, EdgeEnd::plus), e) = 1;
  }
  const Mat p = total.full_projection(g);
  const Mat eye = Mat::Identity(g.num_slots(), g.num_slots());
  MetricIndexResult r{};
  // the constraint matrices can vanish (trace space inside G); sqrt(2) is the
  // natural scale of the iota columns
  const double scale = std::sqrt(2.0);
  r.h0 = kernel_dimension(Mat((eye - p) * iota), 1e-10, scale);
  r.h1 = kernel_dimension(Mat(p * iota_pm), 1e-10, scale);
  r.index = r.h0 - r.h1;

  const IndexResult disc = index_discrete(g, total);
  if (r.index != disc.index)
    throw numeric_error("metric index disagrees with the discrete index");

  // chain morphism check on a basis of edgewise-affine extensions
  const int dim_g = total.total_dim();
  double resid = 0;
  for (int j = 0; j < dim_g; ++j) {
    Vec f = Vec::Zero(dim_g);
    f(j) = 1;
    EdgewiseSolution aff = eigenfunction(g, total, 0.0, f, 1e30);  // beta(0), no kernel demand
    const Vec slot_values = total.full_basis(g) * f;
    for (int e = 0; e < ne; ++e) {
      const double ell = g.edge(e).length;
      // Phi_1 d f: integral of f' over the edge by Simpson (f' is constant)
      const cx int_df = (aff.derivative(g, e, 0) + 4.0 * aff.derivative(g, e, ell / 2) +
                         aff.derivative(g, e, ell)) * ell / 6.0;
      const cx d_disc = slot_values(g.slot_index(e, EdgeEnd::plus)) -
                        slot_values(g.slot_index(e, EdgeEnd::minus));
      resid = std::max(resid, std::abs(int_df - d_disc));
      // Psi_1 d_G f = d Psi_0 f pointwise
      const cx psi1 = d_disc / ell;
      for (double x : {0.25 * ell, 0.7 * ell})
        resid = std::max(resid, std::abs(aff.derivative(g, e, x) - psi1));
    }
  }
  r.chain_residual = resid;
  return r;
}

}  // namespace qg
