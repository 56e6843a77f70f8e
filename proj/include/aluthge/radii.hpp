#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <numbers>
#include <vector>

#include "aluthge/random.hpp"
#include "aluthge/report.hpp"
#include "aluthge/spectral.hpp"

namespace aluthge {

struct SweepOptions {
  int grid = 720;
  double refine_tol = 1e-12;
};

enum class RadiusMethod { sweep, ellipse2x2, sampling };

inline const char* to_string(RadiusMethod m) {
  switch (m) {
    case RadiusMethod::sweep: return "sweep";
    case RadiusMethod::ellipse2x2: return "ellipse2x2";
    case RadiusMethod::sampling: return "sampling";
  }
  return "?";
}

struct RadiusEstimate {
  double value = 0.0;
  double theta_star = 0.0;  // in [0, 2 pi)
  RadiusMethod method = RadiusMethod::sweep;
  double lower_bound = 0.0;  // |<A x, x>| for an explicit unit witness x
  int grid_points = 0;
};

inline constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();

namespace detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInvPhi = 0.6180339887498948482;

inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

/// Re(e^{i theta} A) = cos(theta) H - sin(theta) K where A = H + i K.
class AnglePencil {
 public:
  explicit AnglePencil(const Dense& a)
      : h_((a + a.adjoint()) * 0.5), k_((a - a.adjoint()) * Complex(0.0, -0.5)) {}

  Dense at(double theta) const { return std::cos(theta) * h_ - std::sin(theta) * k_; }

 private:
  Dense h_;
  Dense k_;
};

struct Peak {
  double theta;
  double value;
};

/// Golden-section maximization of fn on [lo, hi]; returns the best point
/// evaluated.
template <class Fn>
Peak golden_max(Fn&& fn, double lo, double hi, double tol, Peak best) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = fn(c), fd = fn(d);
  auto keep = [&best](double theta, double v) {
    if (v > best.value) best = {theta, v};
  };
  keep(c, fc);
  keep(d, fd);
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
      keep(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
      keep(d, fd);
    }
  }
  return best;
}

/// Grid-local maxima of a periodic sequence worth refining. The farthest
/// point z* of the numerical range gives m(theta) >= |z*| cos(theta - theta*),
/// so the grid point nearest theta* is within a factor cos(step / 2) of w and
/// only hills whose grid peak clears best * cos(step / 2) can hold the
/// maximum. Rises smaller than `noise` do not count, so a flat m (disk-shaped
/// range) yields just the global grid best, which is always included.
inline std::vector<std::size_t> refinement_starts(const std::vector<double>& m, double step, double noise,
                                                  std::size_t max_starts) {
  const std::size_t n = m.size();
  const std::size_t best = static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
  const double floor = m[best] * std::cos(0.5 * step) - noise;
  std::vector<std::size_t> starts{best};
  for (std::size_t i = 0; i < n; ++i) {
    if (i == best) continue;
    const double left = m[(i + n - 1) % n], right = m[(i + 1) % n];
    if (m[i] > left + noise && m[i] + noise >= right && m[i] >= floor) starts.push_back(i);
  }
  std::stable_sort(starts.begin() + 1, starts.end(),
                   [&m](std::size_t x, std::size_t y) { return m[x] > m[y]; });
  if (starts.size() > max_starts) starts.resize(max_starts);
  return starts;
}

/// m(theta) = lambda_max(Re(e^{i theta} A)). For A = [[0, X], [Y, 0]] with
/// exactly zero diagonal blocks, Re(e^{i theta} A) = [[0, M], [M^*, 0]] with
/// M = (e^{i theta} X + e^{-i theta} Y^*) / 2, whose top eigenvalue is
/// sigma_max(M); the n x n problem replaces the 2n x 2n one and m has period
/// pi. Diagonal blocks at roundoff level (at most 64 eps max|a_ij|, as left
/// by the transform of a block matrix) are dropped; w is 1-Lipschitz in the
/// operator norm, so this moves the value by at most that residue.
class SupportFunction {
 public:
  explicit SupportFunction(const Dense& a) : pencil_(a) {
    const auto n = a.rows();
    if (n % 2 == 0) {
      const auto h = n / 2;
      const double residue = 64.0 * std::numeric_limits<double>::epsilon() * a.cwiseAbs().maxCoeff();
      offdiag_ = a.topLeftCorner(h, h).cwiseAbs().maxCoeff() <= residue &&
                 a.bottomRightCorner(h, h).cwiseAbs().maxCoeff() <= residue;
      if (offdiag_) {
        x_ = a.topRightCorner(h, h);
        ys_ = a.bottomLeftCorner(h, h).adjoint();
      }
    }
  }

  bool offdiag() const noexcept { return offdiag_; }

  double operator()(double theta) {
    if (offdiag_) return block_value(theta);
    es_.compute(pencil_.at(theta), Eigen::EigenvaluesOnly);
    return es_.eigenvalues()(es_.eigenvalues().size() - 1);
  }

  /// {m(theta), m(theta + pi)} from one decomposition.
  std::pair<double, double> opposite(double theta) {
    if (offdiag_) {
      const double v = block_value(theta);
      return {v, v};
    }
    es_.compute(pencil_.at(theta), Eigen::EigenvaluesOnly);
    const auto& ev = es_.eigenvalues();
    return {ev(ev.size() - 1), -ev(0)};
  }

 private:
  double block_value(double theta) {
    const Complex e = std::polar(0.5, theta);
    const Dense m = e * x_ + std::conj(e) * ys_;
    es_.compute(symmetrized(m.adjoint() * m), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es_.eigenvalues()(es_.eigenvalues().size() - 1)));
  }

  AnglePencil pencil_;
  bool offdiag_ = false;
  Dense x_, ys_;
  Eigen::SelfAdjointEigenSolver<Dense> es_;
};

inline double rayleigh_modulus(const Dense& a, const Eigen::VectorXcd& x) {
  return std::abs(x.dot(a * x)) / x.squaredNorm();
}

/// Witness vector: top eigenvector of Re(e^{i theta} A).
inline double witness_lower_bound(const Dense& a, double theta) {
  const AnglePencil pencil(a);
  Eigen::SelfAdjointEigenSolver<Dense> es(pencil.at(theta));
  return rayleigh_modulus(a, es.eigenvectors().col(a.rows() - 1));
}

}  // namespace detail

/// w(A) = max over theta of lambda_max(Re(e^{i theta} A)).
///
/// The support function m(theta) is evaluated on a uniform grid over
/// [0, 2 pi); every grid-local maximum that can still hold the maximum is
/// refined by golden section until the bracket is below refine_tol. m is
/// Lipschitz with constant ||A||, so the unrefined grid already lies within
/// pi ||A|| / grid of w(A). For even grids each eigensolve yields two grid
/// values, since lambda_max(H(theta + pi)) = -lambda_min(H(theta)).
inline RadiusEstimate numerical_radius_sweep(const ComplexMatrix& a, SweepOptions options = {}) {
  require_square(a, "numerical_radius_sweep");
  if (options.grid < 64) throw InvalidInput("numerical_radius_sweep: grid must be >= 64");
  if (!(options.refine_tol > 0.0)) throw InvalidInput("numerical_radius_sweep: refine_tol must be positive");

  const Dense& dense = a.dense();
  const int grid = options.grid;
  const double step = detail::kTwoPi / grid;
  detail::SupportFunction support(dense);

  std::vector<double> m(static_cast<std::size_t>(grid));
  if (grid % 2 == 0) {
    const int half = grid / 2;
    for (int k = 0; k < half; ++k) {
      const auto [here, opposite] = support.opposite(step * k);
      m[static_cast<std::size_t>(k)] = here;
      m[static_cast<std::size_t>(k + half)] = opposite;
    }
  } else {
    for (int k = 0; k < grid; ++k) m[static_cast<std::size_t>(k)] = support(step * k);
  }

  const double noise = 64.0 * kMachineEpsilon * dense.norm();
  const auto starts = detail::refinement_starts(m, step, noise, 16);
  detail::Peak best{step * static_cast<double>(starts.front()), m[starts.front()]};
  for (std::size_t i : starts) {
    const double centre = step * static_cast<double>(i);
    best = detail::golden_max(support, centre - step, centre + step, options.refine_tol, best);
  }

  RadiusEstimate est;
  est.value = std::max(best.value, 0.0);
  est.theta_star = detail::wrap_angle(best.theta);
  est.method = RadiusMethod::sweep;
  est.grid_points = grid;
  est.lower_bound = detail::witness_lower_bound(dense, est.theta_star);
  return est;
}

/// Independent oracle for 2x2 matrices: W(A) is the ellipse with foci at the
/// eigenvalues and minor axis sqrt(tr(A^*A) - |l1|^2 - |l2|^2). The farthest
/// boundary point from the origin is found by dense sampling plus golden
/// refinement.
inline RadiusEstimate numerical_radius_ellipse2x2(const ComplexMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw InvalidInput("numerical_radius_ellipse2x2: 2x2 matrix required");
  const Complex p = a(0, 0), q = a(0, 1), r = a(1, 0), s = a(1, 1);
  const Complex disc = std::sqrt((p - s) * (p - s) + 4.0 * q * r);
  const Complex l1 = 0.5 * (p + s + disc), l2 = 0.5 * (p + s - disc);
  const double minor_sq = std::max(0.0, a.dense().squaredNorm() - std::norm(l1) - std::norm(l2));
  const double minor = 0.5 * std::sqrt(minor_sq);
  const double focal = 0.5 * std::abs(l1 - l2);
  const double major = std::sqrt(minor * minor + focal * focal);
  const Complex centre = 0.5 * (l1 + l2);
  const Complex axis = focal > 0.0 ? (l1 - l2) / std::abs(l1 - l2) : Complex(1.0, 0.0);

  auto boundary = [&](double phi) { return centre + axis * Complex(major * std::cos(phi), minor * std::sin(phi)); };
  auto modulus = [&](double phi) { return std::abs(boundary(phi)); };

  constexpr int kSamples = 100000;
  const double step = detail::kTwoPi / kSamples;
  detail::Peak best{0.0, modulus(0.0)};
  for (int k = 1; k < kSamples; ++k) {
    const double v = modulus(step * k);
    if (v > best.value) best = {step * k, v};
  }
  best = detail::golden_max(modulus, best.theta - step, best.theta + step, 1e-13, best);

  RadiusEstimate est;
  est.value = best.value;
  est.theta_star = detail::wrap_angle(-std::arg(boundary(best.theta)));
  est.method = RadiusMethod::ellipse2x2;
  est.grid_points = kSamples;
  est.lower_bound = detail::witness_lower_bound(a.dense(), est.theta_star);
  return est;
}

/// max |<A x, x>| over Haar-random unit vectors; a lower bound only.
inline RadiusEstimate numerical_radius_sampling(const ComplexMatrix& a, int samples, std::uint64_t seed) {
  require_square(a, "numerical_radius_sampling");
  if (samples < 1) throw InvalidInput("numerical_radius_sampling: samples must be >= 1");
  Rng rng(seed);
  const Dense& dense = a.dense();
  double best = -1.0;
  Complex best_z;
  for (int k = 0; k < samples; ++k) {
    const Eigen::VectorXcd x = gaussian_matrix(rng, dense.rows(), 1, 1.0);
    const Complex z = x.dot(dense * x) / x.squaredNorm();
    if (std::abs(z) > best) {
      best = std::abs(z);
      best_z = z;
    }
  }
  RadiusEstimate est;
  est.value = best;
  est.lower_bound = best;
  est.theta_star = detail::wrap_angle(-std::arg(best_z));
  est.method = RadiusMethod::sampling;
  est.grid_points = samples;
  return est;
}

inline double numerical_radius(const ComplexMatrix& a, SweepOptions options = {}) {
  return numerical_radius_sweep(a, options).value;
}

/// w(A^n) <= w(A)^n.
inline InequalityReport check_power_inequality(const ComplexMatrix& a, int n, SweepOptions options = {},
                                               double relative = 1e-8) {
  require_square(a, "check_power_inequality");
  if (n < 1) throw InvalidInput("check_power_inequality: n must be >= 1");
  Dense power = Dense::Identity(a.rows(), a.cols());
  for (int k = 0; k < n; ++k) power = power * a.dense();
  InequalityReport report;
  report.id = "power_inequality";
  report.params.n = n;
  const RadiusEstimate base = numerical_radius_sweep(a, options);
  report.lhs = numerical_radius_sweep(ComplexMatrix(power), options).value;
  report.rhs = std::pow(base.value, n);
  report.witness = {{"theta_star", base.theta_star}};
  settle(report, relative, false);
  return report;
}

}  // namespace aluthge
