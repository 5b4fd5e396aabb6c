#pragma once

#include <string>
#include <vector>

#include "qg/spectrum.hpp"
#include "qg/vertex_space.hpp"

namespace qg {

struct CheckRow {
  std::string name;
  double lhs = 0, rhs = 0;  // the two sides of the inequality/identity
  double tol = 0;
  bool pass = false;
  std::string note;  // "skipped: ..." when a precondition gates the check
  bool skipped = false;
};

// Invariant suite over one input: structural vertex-space identities, norm
// bounds, supersymmetry, duality, index identities, cross-method spectra on
// [0, lambda_max], bracketing, trace formulas and Cheeger inequalities where
// their preconditions hold.
std::vector<CheckRow> run_verification(const WeightedGraph& g, const TotalVertexSpace& total,
                                       double lambda_max);

// sum of m_k exp(-t lambda_k) over `lines` plus a rigorous slack for the
// eigenvalues above lambda_max (Neumann bracketing tail).
std::pair<double, double> heat_spectral_sum(const WeightedGraph& g, const SpectrumResult& spec,
                                            double t, double lambda_max);

}  // namespace qg
