#pragma once

#include <string>
#include <vector>

namespace qg {

struct EigLine {
  double lambda;
  int multiplicity;
  std::string tag;
};

// Sorted eigenvalue list with multiplicities and per-eigenvalue method tags.
struct SpectrumResult {
  std::vector<EigLine> lines;
  double cluster_tol = 0;
  // Dirichlet-set windows a scan could not resolve (dtn route only).
  std::vector<std::pair<double, double>> unresolved;
  // Mesh width of the FEM discretization that produced the result (fem only).
  double fem_h = 0;

  int total_multiplicity() const {
    int m = 0;
    for (const auto& l : lines) m += l.multiplicity;
    return m;
  }
  // Multiplicity found within +-tol of lambda.
  int multiplicity_near(double lambda, double tol) const {
    int m = 0;
    for (const auto& l : lines)
      if (std::abs(l.lambda - lambda) <= tol) m += l.multiplicity;
    return m;
  }
  // Eigenvalues repeated by multiplicity, ascending.
  std::vector<double> flatten() const {
    std::vector<double> out;
    for (const auto& l : lines)
      for (int i = 0; i < l.multiplicity; ++i) out.push_back(l.lambda);
    return out;
  }
};

}  // namespace qg
