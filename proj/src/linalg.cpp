#include "qg/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace qg {

static void require_hermitian(const Mat& a, double tol) {
  if (a.rows() != a.cols()) throw numeric_error("matrix is not square");
  if (tol >= 0 && inf_norm(a - a.adjoint()) > tol * (1 + inf_norm(a)))
    throw numeric_error("matrix is not Hermitian within tolerance");
}

RVec hermitian_eigenvalues(const Mat& a, double hermiticity_tol) {
  require_hermitian(a, hermiticity_tol);
  if (a.rows() == 0) return RVec(0);
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
  return es.eigenvalues();
}

HermEig hermitian_eigen(const Mat& a, double hermiticity_tol) {
  require_hermitian(a, hermiticity_tol);
  if (a.rows() == 0) return {RVec(0), Mat(0, 0)};
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

RVec generalized_hermitian_eigenvalues(const Mat& a, const Mat& b) {
  if (a.rows() == 0) return RVec(0);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw numeric_error("generalized eigensolver failed");
  return es.eigenvalues();
}

RVec singular_values(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return RVec(0);
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues();
}

double sigma_min(const Mat& a) {
  RVec s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

int kernel_dimension(const Mat& a, double rel_threshold, double scale) {
  const int n = static_cast<int>(a.cols());
  if (n == 0) return 0;
  if (a.rows() == 0) return n;
  RVec s = singular_values(a);
  const double smax = std::max(s(0), scale);
  if (smax == 0.0) return n;
  const double thr = rel_threshold * smax;
  int dim = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > 0.1 * thr && s(i) < 10.0 * thr)
      throw numeric_error("rank decision ambiguous: singular value " + std::to_string(s(i)) +
                          " inside the threshold window around " + std::to_string(thr) +
                          "; tolerance review required");
    if (s(i) <= thr) ++dim;
  }
  return dim + (n - static_cast<int>(s.size()));  // columns beyond rank bound
}

Mat kernel_basis(const Mat& a, double rel_threshold) {
  const int n = static_cast<int>(a.cols());
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  RVec s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double thr = rel_threshold * smax;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (smax > 0 && s(i) > thr) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Mat orthonormalize_columns(const Mat& a, double drop_tol, bool keep_dropping) {
  Mat q(a.rows(), a.cols());
  int k = 0;
  for (int j = 0; j < a.cols(); ++j) {
    Vec v = a.col(j);
    const double orig = v.norm();
    if (orig == 0.0) {
      if (!keep_dropping) throw numeric_error("zero vector in basis");
      continue;
    }
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < k; ++i) v -= q.col(i).dot(v) * q.col(i);
    const double rem = v.norm();
    if (rem <= drop_tol * orig) {
      if (!keep_dropping) throw numeric_error("rank-deficient basis: vector dropped by Gram-Schmidt");
      continue;
    }
    q.col(k++) = v / rem;
  }
  return q.leftCols(k);
}

Mat orthonormal_complement(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  const int k = static_cast<int>(a.cols());
  if (k == 0) return Mat::Identity(n, n);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - k);
}

std::vector<std::pair<double, int>> cluster_values(const RVec& values, double delta) {
  std::vector<std::pair<double, int>> out;
  int i = 0;
  const int n = static_cast<int>(values.size());
  while (i < n) {
    int j = i + 1;
    double sum = values(i);
    while (j < n && values(j) - values(j - 1) <= delta) sum += values(j++);
    out.push_back({sum / (j - i), j - i});
    i = j;
  }
  return out;
}

}  // namespace qg
