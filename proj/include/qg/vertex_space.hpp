#pragma once

#include <string>
#include <vector>

#include "qg/graph.hpp"
#include "qg/linalg.hpp"

namespace qg {

// Subspace G_v of C^{E_v}, stored as an orthonormal basis (deg v rows in
// SlotOrder, dim G_v columns). The projection is derived, never stored as
// primary data.
struct VertexSpace {
  int vertex = -1;
  Mat basis;  // deg x dim, orthonormal columns

  int deg() const { return static_cast<int>(basis.rows()); }
  int dim() const { return static_cast<int>(basis.cols()); }
  Mat projection() const { return basis * basis.adjoint(); }
};

enum class SpaceKind { standard, minimal, maximal, dualstandard, magnetic };

// Total vertex space G = ⊕_v G_v; block-diagonal over vertices by construction.
struct TotalVertexSpace {
  std::vector<VertexSpace> spaces;  // indexed by vertex

  int total_dim() const;
  // First coordinate of G_v inside the stacked G coordinates.
  int offset(int v) const;
  // 2|E| x dim G block-diagonal basis matrix B (slot coordinates of G^max).
  Mat full_basis(const WeightedGraph& g) const;
  // 2|E| x 2|E| projection P = B B*.
  Mat full_projection(const WeightedGraph& g) const;
};

VertexSpace make_space(SpaceKind kind, const WeightedGraph& g, int v, int magnetic_p = 0);
VertexSpace make_basis_space(const WeightedGraph& g, int v, const Mat& rows, double drop_tol = 1e-12);

TotalVertexSpace make_total(SpaceKind kind, const WeightedGraph& g);
inline TotalVertexSpace standard_total(const WeightedGraph& g) { return make_total(SpaceKind::standard, g); }

// G_v^⊥ = G_v^max ⊖ G_v, projection 1 - P.
VertexSpace dual_space(const VertexSpace& s);
TotalVertexSpace dual_total(const TotalVertexSpace& t);

// Oriented version: basis multiplied by the diagonal sign matrix sigma_v
// (-1 on minus slots, +1 on plus slots); projection sigma P sigma.
VertexSpace oriented_space(const VertexSpace& s, const WeightedGraph& g);
TotalVertexSpace oriented_total(const TotalVertexSpace& t, const WeightedGraph& g);

// S_v = 2 P_v - 1; Hermitian and unitary.
Mat scattering_matrix(const VertexSpace& s);

struct Decomposition {
  WeightedGraph graph;               // same edges, split vertices
  TotalVertexSpace total;
  std::vector<int> pi;               // new vertex -> original vertex
  std::vector<std::vector<int>> fibers;  // original vertex -> new vertices
};

// Finest splitting of every vertex into irreducible components: slots i,j stay
// together iff |P_ij| > block_tol somewhere in their transitive closure.
Decomposition irreducible_decomposition(const WeightedGraph& g, const TotalVertexSpace& total,
                                        double block_tol = 1e-10);

// A vertex space counts as connected when its irreducible graph is connected.
bool is_connected(const WeightedGraph& g, const TotalVertexSpace& total);

// Smallest permutation-invariant space containing s (closure under all
// coordinate transpositions). Used to probe the symmetry classification.
VertexSpace permutation_closure(const VertexSpace& s);

// Recognize a constructor kind from the basis, for pretty-printing.
// Returns one of "standard", "minimal", "maximal", "dualstandard",
// "magnetic <p>" or "" when none matches.
std::string recognize_space(const VertexSpace& s, double tol = 1e-12);

}  // namespace qg
