#pragma once

// shared graph fixtures and deterministic random instances for the test and
// acceptance suites

#include <random>

#include "qg/graph.hpp"
#include "qg/vertex_space.hpp"

namespace qgtest {

using namespace qg;

inline WeightedGraph interval(double ell = 1.0) {
  return WeightedGraph({"a", "b"}, {{"e", 0, 1, ell}});
}

inline WeightedGraph triangle(double ell = 1.0) {
  return WeightedGraph({"v1", "v2", "v3"},
                       {{"e1", 0, 1, ell}, {"e2", 1, 2, ell}, {"e3", 2, 0, ell}});
}

inline WeightedGraph theta(double ell = 1.0) {
  return WeightedGraph({"a", "b"}, {{"e1", 0, 1, ell}, {"e2", 0, 1, ell}, {"e3", 0, 1, ell}});
}

inline WeightedGraph cycle_graph(int n, double ell = 1.0) {
  std::vector<std::string> names;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    edges.push_back({"e" + std::to_string(i + 1), i, (i + 1) % n, ell});
  return WeightedGraph(std::move(names), std::move(edges));
}

inline WeightedGraph complete_graph(int n) {
  std::vector<std::string> names;
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i + 1));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({"e" + std::to_string(++k), i, j, 1.0});
  return WeightedGraph(std::move(names), std::move(edges));
}

inline WeightedGraph self_loop_graph() {
  return WeightedGraph({"a"}, {{"loop", 0, 0, 1.0}});
}

struct RandomGraphOptions {
  int max_vertices = 6;
  int max_extra_edges = 4;
  bool equilateral = true;
  bool allow_double_edges = true;
  bool simple = false;  // forbids double edges when set
};

inline WeightedGraph random_connected_graph(std::mt19937_64& rng, const RandomGraphOptions& opt = {}) {
  std::uniform_int_distribution<int> nv_dist(2, opt.max_vertices);
  const int nv = nv_dist(rng);
  std::vector<std::string> names;
  for (int i = 0; i < nv; ++i) names.push_back("v" + std::to_string(i + 1));
  std::vector<Edge> edges;
  std::uniform_real_distribution<double> len_dist(0.5, 2.0);
  auto length = [&]() { return opt.equilateral ? 1.0 : len_dist(rng); };
  // spanning tree first
  for (int i = 1; i < nv; ++i) {
    std::uniform_int_distribution<int> prev(0, i - 1);
    edges.push_back({"e" + std::to_string(edges.size() + 1), prev(rng), i, length()});
  }
  std::uniform_int_distribution<int> extra_dist(0, opt.max_extra_edges);
  const int extra = extra_dist(rng);
  std::uniform_int_distribution<int> pick(0, nv - 1);
  for (int k = 0; k < extra; ++k) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;  // no self-loops in random instances
    if (opt.simple) {
      bool dup = false;
      for (const Edge& e : edges)
        if ((e.tail == a && e.head == b) || (e.tail == b && e.head == a)) dup = true;
      if (dup) continue;
    }
    edges.push_back({"e" + std::to_string(edges.size() + 1), a, b, length()});
  }
  return WeightedGraph(std::move(names), std::move(edges));
}

inline VertexSpace random_space(std::mt19937_64& rng, const WeightedGraph& g, int v) {
  const int d = g.degree(v);
  std::uniform_int_distribution<int> dim_dist(0, d);
  const int dim = dim_dist(rng);
  std::normal_distribution<double> gauss(0, 1);
  Mat a(d, dim);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cx(gauss(rng), gauss(rng));
  VertexSpace s;
  s.vertex = v;
  s.basis = orthonormalize_columns(a, 1e-10, true);
  return s;
}

inline TotalVertexSpace random_total(std::mt19937_64& rng, const WeightedGraph& g,
                                     int min_total_dim = 0) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    TotalVertexSpace t;
    for (int v = 0; v < g.num_vertices(); ++v) t.spaces.push_back(random_space(rng, g, v));
    if (t.total_dim() >= min_total_dim) return t;
  }
  return standard_total(g);
}

}  // namespace qgtest
