#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "qg/graphspec.hpp"

using namespace qg;
using namespace qgtest;

namespace {

const char* kTriangleFile = R"(graphspec v1
# the unit triangle
vertex v1
vertex v2
vertex v3
edge e1 v1 v2 1
edge e2 v2 v3 1
edge e3 v3 v1 1
)";

}  // namespace

TEST_CASE("triangle file parses with standard defaults") {
  ParsedGraph p = parse_graphspec(kTriangleFile);
  CHECK(p.graph.num_vertices() == 3);
  CHECK(p.graph.num_edges() == 3);
  CHECK(p.graph.edge(0).length == 1.0);
  for (int v = 0; v < 3; ++v) CHECK(recognize_space(p.total.spaces[v]) == "standard");
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("1") == cx(1, 0));
  CHECK(parse_complex("-2.5") == cx(-2.5, 0));
  CHECK(parse_complex("1+2i") == cx(1, 2));
  CHECK(parse_complex("0.5-0.5i") == cx(0.5, -0.5));
  CHECK(parse_complex("1e-3+2e-4i") == cx(1e-3, 2e-4));
  CHECK_THROWS_AS(parse_complex("foo"), parse_error);
  CHECK_THROWS_AS(parse_complex("1+2"), parse_error);
  CHECK_THROWS_AS(parse_complex("1+2j"), parse_error);
  CHECK(parse_complex(format_complex(cx(0.1, -0.3))) == cx(0.1, -0.3));
}

TEST_CASE("magnetic space directive at a degree-3 vertex") {
  const char* file = R"(graphspec v1
vertex a
vertex b
edge e1 a b 1
edge e2 a b 1
edge e3 a b 1
space a magnetic 1
)";
  ParsedGraph p = parse_graphspec(file);
  const double th = 2 * std::numbers::pi / 3;
  Vec w(3);
  for (int j = 0; j < 3; ++j) w(j) = std::polar(1.0 / std::sqrt(3.0), th * j);
  CHECK(inf_norm(p.total.spaces[0].projection() - w * w.adjoint()) < 1e-14);
  CHECK(recognize_space(p.total.spaces[0]) == "magnetic 1");
  CHECK(recognize_space(p.total.spaces[1]) == "standard");
}

TEST_CASE("explicit basis rows are orthonormalized") {
  const char* file = R"(graphspec v1
vertex a
vertex b
edge e1 a b 1
edge e2 a b 1
space a basis 1
2 2
)";
  ParsedGraph p = parse_graphspec(file);
  CHECK(p.total.spaces[0].dim() == 1);
  CHECK(std::abs(p.total.spaces[0].basis(0, 0) - cx(1 / std::numbers::sqrt2, 0)) < 1e-12);
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("missing header") {
    CHECK_THROWS_AS(parse_graphspec("vertex a\n"), parse_error);
  }
  SUBCASE("edge referencing an undeclared vertex") {
    try {
      parse_graphspec("graphspec v1\nvertex a\nedge e a zz 1\n");
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.line == 3);
      CHECK(std::string(e.what()).find("undeclared") != std::string::npos);
    }
  }
  SUBCASE("basis row with wrong arity") {
    const char* file = "graphspec v1\nvertex a\nvertex b\nedge e a b 1\nspace a basis 1\n1 0\n";
    CHECK_THROWS_WITH_AS(parse_graphspec(file), doctest::Contains("arity"), parse_error);
  }
  SUBCASE("rank-deficient basis") {
    const char* file =
        "graphspec v1\nvertex a\nvertex b\nedge e1 a b 1\nedge e2 a b 1\n"
        "space a basis 2\n1 1\n2 2\n";
    CHECK_THROWS_WITH_AS(parse_graphspec(file), doctest::Contains("orthonormalizable"), parse_error);
  }
  SUBCASE("unknown directive") {
    CHECK_THROWS_AS(parse_graphspec("graphspec v1\nvertex a\nfrobnicate\n"), parse_error);
  }
  SUBCASE("duplicate names") {
    CHECK_THROWS_AS(parse_graphspec("graphspec v1\nvertex a\nvertex a\n"), parse_error);
    CHECK_THROWS_AS(
        parse_graphspec("graphspec v1\nvertex a\nvertex b\nedge e a b 1\nspace a standard\nspace a minimal\n"),
        parse_error);
  }
  SUBCASE("magnetic parameter out of range") {
    CHECK_THROWS_AS(parse_graphspec("graphspec v1\nvertex a\nvertex b\nedge e a b 1\nspace a magnetic 5\n"),
                    parse_error);
  }
}

TEST_CASE("print/parse round-trips graphs and spaces") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    WeightedGraph g = random_connected_graph(rng, {.equilateral = false});
    TotalVertexSpace total = random_total(rng, g);
    const std::string text = print_graphspec(g, total);
    ParsedGraph p = parse_graphspec(text);
    REQUIRE(p.graph.num_vertices() == g.num_vertices());
    REQUIRE(p.graph.num_edges() == g.num_edges());
    for (int v = 0; v < g.num_vertices(); ++v) CHECK(p.graph.vertex_name(v) == g.vertex_name(v));
    for (int e = 0; e < g.num_edges(); ++e) {
      CHECK(p.graph.edge(e).name == g.edge(e).name);
      CHECK(p.graph.edge(e).tail == g.edge(e).tail);
      CHECK(p.graph.edge(e).head == g.edge(e).head);
      CHECK(p.graph.edge(e).length == g.edge(e).length);  // %.17g is exact
    }
    for (int v = 0; v < g.num_vertices(); ++v)
      CHECK(inf_norm(p.total.spaces[v].projection() - total.spaces[v].projection()) < 1e-12);
  }
}

TEST_CASE("keyword spaces survive the round-trip by name") {
  WeightedGraph g = theta();
  TotalVertexSpace total = standard_total(g);
  total.spaces[0] = make_space(SpaceKind::magnetic, g, 0, 2);
  total.spaces[1] = make_space(SpaceKind::dualstandard, g, 1);
  const std::string text = print_graphspec(g, total);
  CHECK(text.find("space a magnetic 2") != std::string::npos);
  CHECK(text.find("space b dualstandard") != std::string::npos);
  ParsedGraph p = parse_graphspec(text);
  for (int v = 0; v < 2; ++v)
    CHECK(inf_norm(p.total.spaces[v].projection() - total.spaces[v].projection()) < 1e-12);
}
