#include <doctest.h>

#include "fixtures.hpp"
#include "qg/graph.hpp"

using namespace qg;
using namespace qgtest;

TEST_CASE("triangle validates as simple connected unit-length graph") {
  WeightedGraph g = triangle();
  ValidationReport r = g.validate();
  CHECK(r.min_length == 1.0);
  CHECK(r.total_length == 3.0);
  CHECK(r.connected);
  CHECK_FALSE(r.has_self_loops);
  CHECK_FALSE(r.has_double_edges);
  for (int d : r.degree) CHECK(d == 2);
}

TEST_CASE("non-positive length is rejected") {
  CHECK_THROWS_WITH_AS(WeightedGraph({"a", "b"}, {{"e", 0, 1, 0.0}}),
                       doctest::Contains("non-positive length"), precondition_error);
  CHECK_THROWS_AS(WeightedGraph({"a", "b"}, {{"e", 0, 1, -1.0}}), precondition_error);
}

TEST_CASE("theta graph is flagged for double edges") {
  WeightedGraph g = theta();
  ValidationReport r = g.validate();
  CHECK(r.has_double_edges);
  CHECK_FALSE(r.has_self_loops);
  CHECK(g.degree(0) == 3);
}

TEST_CASE("empty edge set and isolated vertices are validation errors") {
  WeightedGraph empty({"a"}, {});
  CHECK_THROWS_WITH_AS(empty.validate(), doctest::Contains("empty edge set"), precondition_error);
  WeightedGraph isolated({"a", "b", "c"}, {{"e", 0, 1, 1.0}});
  CHECK_THROWS_WITH_AS(isolated.validate(), doctest::Contains("isolated"), precondition_error);
}

TEST_CASE("incident slots follow SlotOrder") {
  // triangle with e1 = (v1,v2), e3 = (v3,v1): v1 sees (e1,minus), (e3,plus)
  WeightedGraph g = triangle();
  const auto& slots = g.incident_slots(0);
  REQUIRE(slots.size() == 2);
  CHECK(slots[0].edge == 0);
  CHECK(slots[0].end == EdgeEnd::minus);
  CHECK(slots[1].edge == 2);
  CHECK(slots[1].end == EdgeEnd::plus);
}

TEST_CASE("a self-loop contributes two distinct slots") {
  WeightedGraph g = self_loop_graph();
  CHECK(g.degree(0) == 2);
  const auto& slots = g.incident_slots(0);
  REQUIRE(slots.size() == 2);
  CHECK(slots[0].end == EdgeEnd::minus);
  CHECK(slots[1].end == EdgeEnd::plus);
  CHECK(slots[0].edge == slots[1].edge);
}

TEST_CASE("slot indexing is a bijection onto the 2|E| endpoints") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = random_connected_graph(rng, {.equilateral = false});
    int total_deg = 0;
    for (int v = 0; v < g.num_vertices(); ++v) total_deg += g.degree(v);
    CHECK(total_deg == 2 * g.num_edges());
    std::vector<char> seen(g.num_slots(), 0);
    for (int e = 0; e < g.num_edges(); ++e)
      for (EdgeEnd end : {EdgeEnd::minus, EdgeEnd::plus}) {
        const int s = g.slot_index(e, end);
        CHECK(!seen[s]);
        seen[s] = 1;
        const auto [v, local] = g.slot_owner(s);
        CHECK(g.incident_slots(v)[local].edge == e);
        CHECK(g.incident_slots(v)[local].end == end);
        CHECK(g.endpoint(e, end) == v);
      }
  }
}

TEST_CASE("subdivision splits edges into equal pieces") {
  SUBCASE("single edge, n = 2") {
    SubdivisionResult r = subdivide(interval(), 2);
    CHECK(r.graph.num_edges() == 2);
    CHECK(r.graph.num_vertices() == 3);
    for (const Edge& e : r.graph.edges()) CHECK(e.length == doctest::Approx(0.5));
    CHECK(r.node_position[2].edge == 0);
    CHECK(r.node_position[2].coord == doctest::Approx(0.5));
  }
  SUBCASE("triangle, n = 1 is the identity up to relabeling") {
    SubdivisionResult r = subdivide(triangle(), 1);
    CHECK(r.graph.num_edges() == 3);
    CHECK(r.graph.num_vertices() == 3);
  }
  SUBCASE("length 1.5 at n = 2 gives ceil(3) pieces") {
    SubdivisionResult r = subdivide(interval(1.5), 2);
    CHECK(r.graph.num_edges() == 3);
    for (const Edge& e : r.graph.edges()) CHECK(e.length == doctest::Approx(0.5));
  }
}

TEST_CASE("subdivision preserves total length exactly") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 8; ++trial) {
    WeightedGraph g = random_connected_graph(rng, {.equilateral = false});
    for (int n : {1, 3, 7}) {
      SubdivisionResult r = subdivide(g, n);
      CHECK(r.graph.total_length() == doctest::Approx(g.total_length()).epsilon(1e-14));
      CHECK(static_cast<int>(r.chain_edges.size()) == g.num_edges());
    }
  }
}

TEST_CASE("other_end rejects non-incident vertices") {
  WeightedGraph g = triangle();
  CHECK(g.other_end(0, 0) == 1);
  CHECK(g.other_end(0, 1) == 0);
  CHECK_THROWS_AS(g.other_end(0, 2), precondition_error);
}
