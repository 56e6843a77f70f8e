#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "aluthge/matrix.hpp"

namespace aluthge {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combination of two seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

/// mt19937_64 with its own uniform and Box-Muller normal so that draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

  /// Circular complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance = 1.0) {
    const double sd = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {sd * re, sd * im};
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

inline Dense gaussian_matrix(Rng& rng, Index rows, Index cols, double variance) {
  Dense m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.complex_normal(variance);
  return m;
}

/// Haar-distributed on the complex unit sphere.
inline Eigen::VectorXcd random_unit_vector(Rng& rng, Index n) {
  Eigen::VectorXcd v = gaussian_matrix(rng, n, 1, 1.0);
  return v / v.norm();
}

}  // namespace aluthge
