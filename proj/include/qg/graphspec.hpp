#pragma once

#include <iosfwd>
#include <string>

#include "qg/vertex_space.hpp"

namespace qg {

struct ParsedGraph {
  WeightedGraph graph;
  TotalVertexSpace total;
};

// graphspec v1: line-based, whitespace separated; '#' starts a comment when it
// opens a token (so split-vertex names like "v#2" round-trip).
//
//   graphspec v1
//   vertex <name>
//   edge <name> <tailvertex> <headvertex> <length>
//   space <vertex> standard | minimal | maximal | dualstandard | magnetic <p> | basis <k>
//   <k lines of deg(v) complex entries "a", "a+bi" or "a-bi">
//
// Vertices without a space directive default to standard. basis rows are
// orthonormalized (modified Gram-Schmidt, drop tolerance 1e-12 of the row
// norm); a dropped row is a rank-deficient basis and an error.
ParsedGraph parse_graphspec(const std::string& text);
ParsedGraph parse_graphspec_file(const std::string& path);

// Round-trippable printer. Recognized constructor spaces print as keywords,
// everything else as explicit basis rows with 17 significant digits.
std::string print_graphspec(const WeightedGraph& g, const TotalVertexSpace& total);

std::string format_complex(cx z);
cx parse_complex(const std::string& token);  // throws parse_error

}  // namespace qg
