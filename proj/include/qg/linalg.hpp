#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qg/errors.hpp"

namespace qg {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline double inf_norm(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// Ascending eigenvalues of a Hermitian matrix. hermiticity_tol < 0 skips the check.
RVec hermitian_eigenvalues(const Mat& a, double hermiticity_tol = 1e-10);

struct HermEig {
  RVec values;   // ascending
  Mat vectors;   // orthonormal columns
};
HermEig hermitian_eigen(const Mat& a, double hermiticity_tol = 1e-10);

// Generalized problem A x = lambda B x with A Hermitian, B positive definite.
RVec generalized_hermitian_eigenvalues(const Mat& a, const Mat& b);

// Singular values in descending order (two-sided Jacobi; accurate small values).
RVec singular_values(const Mat& a);
double sigma_min(const Mat& a);

// dim ker A decided by the threshold rel_threshold * max(sigma_max, scale).
// `scale` guards constructions whose matrix may be numerically zero (sigma_max
// alone would then be roundoff noise); callers pass the natural norm bound of
// the construction. Any singular value inside (0.1, 10) x threshold makes the
// rank decision ambiguous and raises numeric_error instead of silently
// rounding.
int kernel_dimension(const Mat& a, double rel_threshold = 1e-10, double scale = 0);

// Orthonormal basis of ker A (columns), singular vectors below the threshold.
Mat kernel_basis(const Mat& a, double rel_threshold = 1e-10);

// Modified Gram-Schmidt over the columns. Columns whose residual drops below
// drop_tol times their original norm are rank-deficient; by default that is an
// error, with keep_dropping=true they are silently removed instead.
Mat orthonormalize_columns(const Mat& a, double drop_tol = 1e-12, bool keep_dropping = false);

// Orthonormal basis of the orthogonal complement of span(columns of a) in C^n.
Mat orthonormal_complement(const Mat& a);

// Cluster an ascending eigenvalue list into (value, multiplicity) pairs; a gap
// larger than delta separates clusters, the cluster value is the mean.
std::vector<std::pair<double, int>> cluster_values(const RVec& values, double delta);

}  // namespace qg
