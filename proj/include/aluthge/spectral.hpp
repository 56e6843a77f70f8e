#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "aluthge/matrix.hpp"

namespace aluthge {

/// Eigenvalues ascending, eigenvectors as unitary columns.
struct HermitianEigen {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;
};

/// A = left * diag(singulars) * right^*, singulars descending.
struct Svd {
  ComplexMatrix left;
  Eigen::VectorXd singulars;
  ComplexMatrix right;
};

inline constexpr double kHermitianTolerance = 1e-8;

namespace detail {

inline Dense symmetrized(const Dense& h) { return (h + h.adjoint()) * 0.5; }

inline void require_hermitian(const ComplexMatrix& h, const char* op) {
  require_square(h, op);
  const double skew = (h.dense() - h.dense().adjoint()).norm();
  if (skew > kHermitianTolerance * (1.0 + h.dense().norm()))
    throw InvalidInput(std::string(op) + ": matrix is not Hermitian (||H - H*||_F = " +
                       std::to_string(skew) + ")");
}

/// Largest eigenvalue of an exactly Hermitian dense matrix. Hot path of the
/// angle sweep, so it skips validation and eigenvectors.
inline double lambda_max(const Dense& h) {
  Eigen::SelfAdjointEigenSolver<Dense> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

/// Largest singular value via the smaller Gram matrix. Relative accuracy is
/// that of the largest eigenvalue, i.e. a few ulps. The matrix is scaled to
/// unit max-entry first so the Gram product cannot overflow.
inline double largest_singular_value(const Dense& a) {
  const double s = a.cwiseAbs().maxCoeff();
  if (!std::isfinite(s)) throw NonFiniteValue("operator norm of a non-finite matrix");
  if (s == 0.0) return 0.0;
  const Dense b = a / s;
  const Dense gram = b.rows() >= b.cols() ? Dense(b.adjoint() * b) : Dense(b * b.adjoint());
  return s * std::sqrt(std::max(0.0, lambda_max(symmetrized(gram))));
}

}  // namespace detail

/// Input is symmetrized to (h + h*)/2 before decomposition.
inline HermitianEigen herm_eigen(const ComplexMatrix& h) {
  detail::require_hermitian(h, "herm_eigen");
  Eigen::SelfAdjointEigenSolver<Dense> es(detail::symmetrized(h.dense()));
  return {es.eigenvalues(), ComplexMatrix(es.eigenvectors())};
}

inline Svd svd(const ComplexMatrix& a) {
  Eigen::JacobiSVD<Dense> js(a.dense(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {ComplexMatrix(js.matrixU()), js.singularValues(), ComplexMatrix(js.matrixV())};
}

inline double operator_norm(const ComplexMatrix& a) { return detail::largest_singular_value(a.dense()); }

inline double spectral_radius(const ComplexMatrix& a) {
  require_square(a, "spectral_radius");
  Eigen::ComplexEigenSolver<Dense> es(a.dense(), false);
  if (es.info() != Eigen::Success) throw NonFiniteValue("spectral_radius: eigensolver did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace aluthge
