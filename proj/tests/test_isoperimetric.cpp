#include <doctest.h>

#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "qg/discrete_laplacian.hpp"
#include "qg/isoperimetric.hpp"
#include "qg/metric_laplacian.hpp"

using namespace qg;
using namespace qgtest;
using std::numbers::pi;

namespace {

// independent oracle: plain bitmask loop, no shared code with the library scan
double brute_force_discrete_cheeger(const WeightedGraph& g) {
  const int nv = g.num_vertices();
  double vol_total = 0;
  for (int v = 0; v < nv; ++v) vol_total += g.degree(v);
  double best = 1e300;
  for (unsigned mask = 1; mask + 1 < (1u << nv); ++mask) {
    int cut = 0;
    double vol = 0;
    for (int v = 0; v < nv; ++v)
      if (mask >> v & 1) vol += g.degree(v);
    for (const Edge& e : g.edges())
      if (((mask >> e.tail) & 1) != ((mask >> e.head) & 1)) ++cut;
    best = std::min(best, cut / std::min(vol, vol_total - vol));
  }
  return best;
}

MetricSubset ball(const WeightedGraph& g, int edge, double center, double radius) {
  MetricSubset s = MetricSubset::empty(g);
  s.intervals[edge].push_back({center - radius, center + radius});
  return s;
}

}  // namespace

TEST_CASE("discrete Cheeger constants of the stock graphs") {
  SUBCASE("K4: h = 2/3 with a pair as witness") {
    DiscreteCheegerResult r = cheeger_discrete(complete_graph(4));
    CHECK(r.h == doctest::Approx(2.0 / 3));
    CHECK(r.witness.size() == 2);
  }
  SUBCASE("cycles: h = 1/floor(n/2)") {
    for (int n = 3; n <= 8; ++n) {
      DiscreteCheegerResult r = cheeger_discrete(cycle_graph(n));
      CHECK(r.h == doctest::Approx(1.0 / (n / 2)));
    }
  }
  SUBCASE("K2: h = 1") {
    CHECK(cheeger_discrete(interval()).h == doctest::Approx(1.0));
  }
}

TEST_CASE("discrete Cheeger matches the closed form and the bitmask oracle on K_n") {
  for (int n = 3; n <= 6; ++n) {
    WeightedGraph g = complete_graph(n);
    DiscreteCheegerResult r = cheeger_discrete(g);
    // min over 1 <= k <= n/2 of k(n-k) / (k(n-1))
    double closed = 1e300;
    for (int k = 1; 2 * k <= n; ++k)
      closed = std::min(closed, double(k * (n - k)) / (k * (n - 1)));
    CHECK(r.h == doctest::Approx(closed));
    CHECK(r.h == doctest::Approx(brute_force_discrete_cheeger(g)));
  }
}

TEST_CASE("discrete Cheeger oracle cross-check on random simple graphs") {
  std::mt19937_64 rng(61);
  int done = 0;
  while (done < 10) {
    WeightedGraph g = random_connected_graph(rng, {.simple = true});
    if (g.has_double_edges() || g.has_self_loops()) continue;
    DiscreteCheegerResult r = cheeger_discrete(g);
    CHECK(r.h == doctest::Approx(brute_force_discrete_cheeger(g)));
    // the Fiedler sweep is an upper bound
    CHECK(cheeger_discrete(g, false).h >= r.h - 1e-12);
    ++done;
  }
}

TEST_CASE("discrete Cheeger preconditions") {
  CHECK_THROWS_AS(cheeger_discrete(self_loop_graph()), precondition_error);
  WeightedGraph stretched = triangle(2.0);
  CHECK_THROWS_AS(cheeger_discrete(stretched), precondition_error);
}

TEST_CASE("metric Cheeger upper bound on the stock graphs") {
  SUBCASE("triangle: exactly 4/3, two balanced cuts") {
    MetricCheegerResult r = cheeger_metric_upper(triangle(), 1);
    CHECK(r.h_ub == 4.0 / 3.0);  // exact double arithmetic
    CHECK(r.witness.boundary_points == 2);
    CHECK(r.witness.volume == doctest::Approx(1.5));
  }
  SUBCASE("theta: 2 with a 2-boundary-point witness after tie-break") {
    MetricCheegerResult r = cheeger_metric_upper(theta(), 1);
    CHECK(r.h_ub == doctest::Approx(2.0));
    CHECK(r.witness.boundary_points == 2);
  }
  SUBCASE("interval: one cut at the midpoint") {
    MetricCheegerResult r = cheeger_metric_upper(interval(), 1);
    CHECK(r.h_ub == doctest::Approx(2.0));
    CHECK(r.witness.boundary_points == 1);
    CHECK(r.witness.volume == doctest::Approx(0.5));
  }
  SUBCASE("metric circles: h = 4/L for any subdivision") {
    for (int n = 3; n <= 6; ++n) {
      MetricCheegerResult r = cheeger_metric_upper(cycle_graph(n), 1);
      CHECK(r.h_ub == doctest::Approx(4.0 / n));
    }
    SubdivisionResult sub = subdivide(triangle(), 2);
    CHECK(cheeger_metric_upper(sub.graph, 1).h_ub == doctest::Approx(4.0 / 3.0));
  }
}

TEST_CASE("deeper carving never increases the bound") {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 6; ++trial) {
    WeightedGraph g = random_connected_graph(rng, {.equilateral = false});
    double prev = 1e300;
    for (int depth = 0; depth <= 2; ++depth) {
      MetricCheegerResult r = cheeger_metric_upper(g, depth);
      CHECK(r.h_ub <= prev + 1e-14);
      prev = r.h_ub;
    }
  }
}

TEST_CASE("metric distances") {
  WeightedGraph g = triangle();
  SUBCASE("balls on adjacent edges meet through the shared vertex") {
    MetricSubset a = ball(g, 0, 0.5, 0.25);
    MetricSubset b = ball(g, 1, 0.5, 0.25);
    CHECK(metric_distance(g, a, b) == doctest::Approx(0.5));
  }
  SUBCASE("touching intervals on one edge are separated by their gap") {
    MetricSubset a = MetricSubset::empty(g);
    a.intervals[0].push_back({0.1, 0.3});
    MetricSubset b = MetricSubset::empty(g);
    b.intervals[0].push_back({0.5, 0.7});
    CHECK(metric_distance(g, a, b) == doctest::Approx(0.2));
  }
  SUBCASE("vertex singletons reproduce the graph distance") {
    MetricSubset a = MetricSubset::empty(g);
    a.vertices = {0};
    MetricSubset b = MetricSubset::empty(g);
    b.vertices = {1};
    CHECK(metric_distance(g, a, b) == doctest::Approx(1.0));
  }
  SUBCASE("overlapping subsets are rejected") {
    MetricSubset a = ball(g, 0, 0.5, 0.25);
    MetricSubset b = ball(g, 0, 0.6, 0.25);
    CHECK_THROWS_AS(metric_distance(g, a, b), precondition_error);
  }
}

TEST_CASE("lambda2 upper bound") {
  WeightedGraph g = triangle();
  MetricSubset a = ball(g, 0, 0.5, 0.25);
  MetricSubset b = ball(g, 1, 0.5, 0.25);
  const double bound = lambda2_upper_bound(g, a, b);
  // 16 (log 6)^2 with d = 0.5, vol A = vol B = 0.5, vol X = 3
  CHECK(bound == doctest::Approx(16.0 * std::pow(std::log(6.0), 2)));
  CHECK(bound >= std::pow(2 * pi / 3, 2));  // true lambda_2

  MetricSubset empty_vol = MetricSubset::empty(g);
  empty_vol.vertices = {0};
  CHECK_THROWS_AS(lambda2_upper_bound(g, empty_vol, b), precondition_error);
}

TEST_CASE("upper bound dominates the FEM lambda2 on random subset pairs") {
  std::mt19937_64 rng(63);
  for (const WeightedGraph& g : {triangle(), theta(), cycle_graph(4)}) {
    SpectrumResult fem = fem_spectrum(g, standard_total(g), 100, 2);
    const double lambda2 = fem.flatten()[1];
    std::uniform_real_distribution<double> unif(0, 1);
    for (int trial = 0; trial < 25; ++trial) {
      const int ea = static_cast<int>(rng() % g.num_edges());
      int eb = static_cast<int>(rng() % g.num_edges());
      if (eb == ea) eb = (eb + 1) % g.num_edges();
      const double ra = 0.05 + 0.15 * unif(rng), rb = 0.05 + 0.15 * unif(rng);
      MetricSubset a = ball(g, ea, 0.5, ra), b = ball(g, eb, 0.5, rb);
      CHECK(lambda2_upper_bound(g, a, b) >= lambda2 - 1e-6);
    }
  }
}

TEST_CASE("Cheeger verification on the stock graphs") {
  SUBCASE("triangle") {
    CheegerVerification cv = verify_cheeger(triangle(), 1);
    CHECK(cv.lambda2_metric == doctest::Approx(std::pow(2 * pi / 3, 2)));
    CHECK(cv.h_ub == doctest::Approx(4.0 / 3));
    CHECK(cv.metric_ok);
    CHECK(cv.discrete_ok);
    CHECK(cv.lambda2_discrete == doctest::Approx(1.5));
  }
  SUBCASE("K4 discrete: lambda2 = 4/3 >= (2/3)^2/2") {
    CheegerVerification cv = verify_cheeger(complete_graph(4), 1);
    CHECK(cv.lambda2_discrete == doctest::Approx(4.0 / 3));
    CHECK(cv.h_discrete == doctest::Approx(2.0 / 3));
    CHECK(cv.discrete_ok);
    CHECK(cv.metric_ok);
  }
  SUBCASE("theta metric: lambda2 = pi^2 >= 1") {
    CheegerVerification cv = verify_cheeger(theta(), 1);
    CHECK(cv.lambda2_metric == doctest::Approx(pi * pi).epsilon(1e-8));
    CHECK(cv.h_ub == doctest::Approx(2.0));
    CHECK(cv.metric_ok);
  }
}

TEST_CASE("subset consistency checks") {
  WeightedGraph g = triangle();
  MetricSubset bad = MetricSubset::empty(g);
  bad.intervals[0].push_back({0.5, 0.4});
  CHECK_THROWS_AS(bad.check_consistent(g), precondition_error);
  MetricSubset vertex_no_nbhd = MetricSubset::empty(g);
  vertex_no_nbhd.vertices = {0};
  CHECK_THROWS_AS(vertex_no_nbhd.check_consistent(g), precondition_error);
  MetricSubset good = MetricSubset::empty(g);
  good.vertices = {0};
  good.intervals[0].push_back({0.0, 0.25});
  good.intervals[2].push_back({0.75, 1.0});
  CHECK_NOTHROW(good.check_consistent(g));
}
