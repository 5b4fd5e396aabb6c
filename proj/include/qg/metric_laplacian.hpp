#pragma once

#include "qg/discrete_laplacian.hpp"
#include "qg/spectrum.hpp"
#include "qg/vertex_space.hpp"

namespace qg {

// Dirichlet spectrum of the decoupled edges, Sigma = { (pi k / ell_e)^2 },
// where the DtN secular method is singular.
struct DirichletSet {
  struct Entry {
    double lambda;
    std::vector<int> edges;  // contributing edges
  };
  std::vector<Entry> values;  // ascending, grouped
  double lambda_max = 0;

  static DirichletSet compute(const WeightedGraph& g, double lambda_max);
  static double window(double sigma) { return 1e-6 * (1 + std::abs(sigma)); }
  bool excluded(double z) const;
  // Exclusion windows, overlaps merged, clipped to [0, lambda_max].
  std::vector<std::pair<double, double>> windows() const;
};

// Dirichlet-to-Neumann map Q(z) = B* M(z) B on G in the orthonormal basis of G.
// z must stay clear of Sigma by its exclusion window; z = 0 uses the affine limit.
// Hermitian for real z.
Mat dtn_matrix(const WeightedGraph& g, const TotalVertexSpace& total, cx z);

// Eigenvalues in [0, lambda_max] \ Sigma-windows located as parameters where
// ker Q(lambda) != 0. Branches of the Hermitian family Q(lambda) decrease in
// lambda between poles, so every root shows as a sign change on the grid and
// is bisected to tolerance. Sigma windows are reported as unresolved.
SpectrumResult secular_spectrum_dtn(const WeightedGraph& g, const TotalVertexSpace& total,
                                    double lambda_max, double tol = 1e-9);

// Directed-bond secular method: eigenvalues lambda = k^2 at k > 0 where
// sigma_min(I - S_bond D(k)) < tol, D(k) = diag(e^{ik ell_e}). Resolves Sigma.
// The k = 0 eigenvalue comes from metric_index (kernel dimension), tag "index".
SpectrumResult bond_secular_spectrum(const WeightedGraph& g, const TotalVertexSpace& total,
                                     double lambda_max, double tol = 1e-7);

// S_bond and U(k) = S_bond D(k) on the 2|E|-dimensional bond space.
// Bond 2e carries e forward (minus -> plus), bond 2e+1 backward.
Mat bond_matrix(const WeightedGraph& g, const TotalVertexSpace& total);
Mat bond_evolution(const WeightedGraph& g, const TotalVertexSpace& total, double k);

// Equilateral transfer: lifts every discrete eigenvalue (mu, m) through
// 1 - cos(c sqrt(lambda)) = c mu. Lifts landing in Sigma are emitted with tag
// "dirichlet-point, multiplicity unverified".
SpectrumResult equilateral_spectrum(const WeightedGraph& g, const TotalVertexSpace& total,
                                    double lambda_max);

// Galerkin P1 discretization of f -> ||d f||^2 on the subdivided graph, with
// endpoint values constrained to G_v. Lowest `count` eigenvalues, order-2
// convergence in 1/n.
SpectrumResult fem_spectrum(const WeightedGraph& g, const TotalVertexSpace& total,
                            int n_per_unit, int count);

// Asymptotic p1 eigenvalue error, lambda^2 h^2 / 12 with a small floor.
double fem_eigenvalue_error_estimate(double lambda, double h);

// Edgewise solution f_e = a_e s_-,e,z + b_e s_+,e,z of (-d^2/dx^2 - z) f = 0.
struct EdgewiseSolution {
  cx z = 0;
  std::vector<std::pair<cx, cx>> coeff;  // (a_e, b_e) per edge

  cx value(const WeightedGraph& g, int e, double x) const;
  cx derivative(const WeightedGraph& g, int e, double x) const;
};

// ker(Laplacian - lambda) = beta(lambda) ker Q(lambda): reconstructs the
// eigenfunction from vertex data F (coordinates in the basis of G).
EdgewiseSolution eigenfunction(const WeightedGraph& g, const TotalVertexSpace& total,
                               double lambda, const Vec& f_coords, double tol = 1e-8);

struct ResidualReport {
  double ode;    // finite-difference residual of -f'' = lambda f, sup norm
  double trace;  // ||(1-P) underline f||_inf
  double flux;   // ||P oriented f'||_inf
};
ResidualReport check_eigenfunction(const WeightedGraph& g, const TotalVertexSpace& total,
                                   const EdgewiseSolution& sol);

struct MetricIndexResult {
  int h0;
  int h1;
  int index;
  double chain_residual;  // max mismatch of Phi/Psi chain morphisms on a basis
};

// H^0 = edgewise constants with unoriented trace in G, H^1 = edgewise
// constants with oriented trace in G-perp; index equals the discrete index.
MetricIndexResult metric_index(const WeightedGraph& g, const TotalVertexSpace& total);

}  // namespace qg
