#pragma once

// Test-side helpers. Random matrices come from std::mt19937_64 and the
// standard normal distribution, not the library generator, and the radius
// oracle below shares no code with the library sweep.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "aluthge/matrix.hpp"

namespace testing_support {

using aluthge::Complex;
using aluthge::ComplexMatrix;
using aluthge::Dense;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  Complex z() { return {nd_(eng_), nd_(eng_)}; }
  double u(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int i(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  Dense gauss(Eigen::Index r, Eigen::Index c) {
    Dense m(r, c);
    for (Eigen::Index a = 0; a < r; ++a)
      for (Eigen::Index b = 0; b < c; ++b) m(a, b) = z();
    return m;
  }

  ComplexMatrix square(Eigen::Index n) { return ComplexMatrix(gauss(n, n)); }

  Dense unitary(Eigen::Index n) {
    Eigen::HouseholderQR<Dense> qr(gauss(n, n));
    return qr.householderQ();
  }

  ComplexMatrix psd(Eigen::Index n) {
    const Dense g = gauss(n, n);
    const Dense h = g.adjoint() * g;
    return ComplexMatrix(Dense((h + h.adjoint()) * 0.5));
  }

  /// Q diag(d) Q^* with |d_i| >= 0.1.
  ComplexMatrix normal_invertible(Eigen::Index n) {
    const Dense q = unitary(n);
    Eigen::VectorXcd d(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      Complex v = z();
      if (std::abs(v) < 0.1) v = 0.1 * v / std::abs(v);
      d(k) = v;
    }
    return ComplexMatrix(Dense(q * d.asDiagonal() * q.adjoint()));
  }

  /// B C with B n x k, C k x n, k < n.
  ComplexMatrix rank_deficient(Eigen::Index n, Eigen::Index k) { return ComplexMatrix(Dense(gauss(n, k) * gauss(k, n))); }

  Eigen::VectorXcd unit(Eigen::Index n) {
    Eigen::VectorXcd v = gauss(n, 1);
    return v / v.norm();
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> nd_{0.0, 1.0};
};

/// w(A) by brute force: top eigenvalue of Re(e^{i theta} A) on a uniform
/// grid, then a ternary search around the best grid point.
inline double brute_radius(const Dense& a, int grid = 20000) {
  auto m = [&a](double th) {
    const Dense h = (std::polar(1.0, th) * a + std::polar(1.0, -th) * a.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Dense> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  };
  const double step = 2.0 * std::numbers::pi / grid;
  double best = -1e300, best_th = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double v = m(k * step);
    if (v > best) best = v, best_th = k * step;
  }
  double lo = best_th - step, hi = best_th + step;
  for (int it = 0; it < 100; ++it) {
    const double a1 = lo + (hi - lo) / 3, a2 = hi - (hi - lo) / 3;
    if (m(a1) < m(a2)) lo = a1; else hi = a2;
  }
  return std::max(best, m(0.5 * (lo + hi)));
}

inline double opnorm(const Dense& a) {
  Eigen::JacobiSVD<Dense> svd(a);
  return svd.singularValues()(0);
}

inline double fro(const Dense& a) { return a.norm(); }

}  // namespace testing_support
