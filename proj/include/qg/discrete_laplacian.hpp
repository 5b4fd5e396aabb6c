#pragma once

#include <map>

#include "qg/spectrum.hpp"
#include "qg/vertex_space.hpp"

namespace qg {

// Exterior derivative d_G : G -> l2(E) in orthonormal coordinates. Row e is
// (1/sqrt(ell_e)) (evaluation at the plus slot - evaluation at the minus slot)
// composed with the basis of G; operator norm <= sqrt(2/ell_0).
Mat exterior_derivative(const WeightedGraph& g, const TotalVertexSpace& total);

// d* d on G (degree 0) or d d* on l2(E) (degree 1). Hermitian, PSD, norm <= 2/ell_0.
Mat laplacian(const WeightedGraph& g, const TotalVertexSpace& total, int form_degree);

// Hermitian eigendecomposition clustered into multiplicities. delta < 0 picks
// the default 1e-8 * (1 + ||op||).
SpectrumResult spectrum_discrete(const Mat& op, double delta = -1);

struct PrincipalPart {
  Mat m;  // M_G = P A^max restricted to G, basis coordinates
  // generalized adjacency blocks A_G(v,w) = B_v^* A^max(v,w) B_w, keyed (v,w)
  std::map<std::pair<int, int>, Mat> blocks;
};

// Requires ell_e = 1, no double edges, no self-loops. Also verifies
// Delta^0 = 1 - M within 1e-10.
PrincipalPart principal_part(const WeightedGraph& g, const TotalVertexSpace& total);

struct IndexResult {
  int h0;     // dim ker d
  int h1;     // dim ker d*
  int index;  // h0 - h1 = dim G - |E|
};

IndexResult index_discrete(const WeightedGraph& g, const TotalVertexSpace& total);

}  // namespace qg
