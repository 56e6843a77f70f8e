#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "aluthge/functions.hpp"
#include "aluthge/spectral.hpp"

namespace aluthge {

inline constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

namespace detail {

/// Q diag(values) Q^*, made exactly Hermitian.
inline Dense spectral_compose(const Dense& q, const Eigen::VectorXd& values) {
  for (Index i = 0; i < values.size(); ++i)
    if (!std::isfinite(values(i))) throw NonFiniteValue("functional calculus produced a non-finite eigenvalue");
  const Dense m = q * values.cast<Complex>().asDiagonal() * q.adjoint();
  return symmetrized(m);
}

}  // namespace detail

/// A = U P with U a partial isometry vanishing on the numerical kernel of P.
/// The right singular basis and singular values are kept so that functions
/// of |A| can be formed without another eigendecomposition.
struct PolarFactors {
  ComplexMatrix isometry;
  ComplexMatrix positive;
  int numerical_rank = 0;
  double rank_tolerance = 0.0;
  Eigen::VectorXd singular_values;  // descending
  ComplexMatrix basis;              // right singular vectors = eigenbasis of |A|

  /// fn(|A|); singular values at or below the rank tolerance count as 0.
  ComplexMatrix apply(const ScalarMap& fn) const {
    Eigen::VectorXd values(singular_values.size());
    for (Index i = 0; i < values.size(); ++i)
      values(i) = fn(singular_values(i) > rank_tolerance ? singular_values(i) : 0.0);
    return ComplexMatrix(detail::spectral_compose(basis.dense(), values));
  }

  /// Spectral projection of |A| onto its numerical range.
  ComplexMatrix range_projection() const {
    return apply([](double x) { return x > 0.0 ? 1.0 : 0.0; });
  }
};

/// Via A = W S V^*: rank = #{s_i > tau}, tau = n * eps * s_max unless
/// overridden; U = W_rank V_rank^*, P = V S V^*.
inline PolarFactors polar_decompose(const ComplexMatrix& a, std::optional<double> rank_tolerance = std::nullopt) {
  require_square(a, "polar_decompose");
  const auto n = a.rows();
  Eigen::JacobiSVD<Dense> js(a.dense(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = js.singularValues();
  const double tau = rank_tolerance.value_or(static_cast<double>(n) * kEpsilon * s(0));
  if (tau < 0.0) throw InvalidInput("rank tolerance must be non-negative");
  int rank = 0;
  while (rank < n && s(rank) > tau) ++rank;

  const Dense& w = js.matrixU();
  const Dense& v = js.matrixV();
  const Dense u = w.leftCols(rank) * v.leftCols(rank).adjoint();
  const Dense p = detail::symmetrized(v * s.cast<Complex>().asDiagonal() * v.adjoint());
  return PolarFactors{ComplexMatrix(u), ComplexMatrix(p), rank, tau, s, ComplexMatrix(v)};
}

/// fn(H) = Q fn(L) Q^* for Hermitian positive semidefinite H. Eigenvalues in
/// [-tau, tau], tau = 16 n eps ||H||, are treated as exact zeros; anything
/// below -tau is rejected.
inline ComplexMatrix matrix_function(const ComplexMatrix& h, const ScalarMap& fn) {
  const HermitianEigen eig = herm_eigen(h);
  const auto n = h.rows();
  const double scale = std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
  const double tau = 16.0 * static_cast<double>(n) * kEpsilon * scale;
  if (eig.eigenvalues(0) < -tau)
    throw InvalidInput("matrix_function: matrix is not positive semidefinite (lambda_min = " +
                       format_double(eig.eigenvalues(0)) + ")");
  Eigen::VectorXd values(n);
  for (Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues(i);
    values(i) = fn(lambda <= tau ? 0.0 : lambda);
  }
  return ComplexMatrix(detail::spectral_compose(eig.eigenvectors.dense(), values));
}

/// (A^* A)^(1/2).
inline ComplexMatrix abs_value(const ComplexMatrix& a) {
  require_square(a, "abs_value");
  const ComplexMatrix gram(detail::symmetrized(a.dense().adjoint() * a.dense()));
  return matrix_function(gram, [](double x) { return std::sqrt(x); });
}

}  // namespace aluthge
