#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "aluthge/random.hpp"
#include "aluthge/report.hpp"

namespace aluthge {

enum class EnsembleKind { ginibre, haar_unitary, hermitian_psd, normal, nilpotent_shift, rank_deficient, scaled };

inline const char* to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::ginibre: return "ginibre";
    case EnsembleKind::haar_unitary: return "haar_unitary";
    case EnsembleKind::hermitian_psd: return "hermitian_psd";
    case EnsembleKind::normal: return "normal";
    case EnsembleKind::nilpotent_shift: return "nilpotent_shift";
    case EnsembleKind::rank_deficient: return "rank_deficient";
    case EnsembleKind::scaled: return "scaled";
  }
  return "?";
}

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 16;

/// "scaled" multiplies a base ensemble by one random complex scalar of modulus
/// in [1e-3, 1e3]; the base defaults to ginibre ("scaled:hermitian_psd" picks
/// another).
struct MatrixEnsemble {
  EnsembleKind kind = EnsembleKind::ginibre;
  EnsembleKind base = EnsembleKind::ginibre;
  int dim = 2;
  std::uint64_t seed = 0;

  std::string name() const {
    if (kind != EnsembleKind::scaled) return to_string(kind);
    return std::string("scaled:") + to_string(base);
  }
};

inline EnsembleKind parse_ensemble_kind(std::string_view s) {
  for (auto k : {EnsembleKind::ginibre, EnsembleKind::haar_unitary, EnsembleKind::hermitian_psd, EnsembleKind::normal,
                 EnsembleKind::nilpotent_shift, EnsembleKind::rank_deficient, EnsembleKind::scaled})
    if (s == to_string(k)) return k;
  throw InvalidInput("unknown ensemble '" + std::string(s) + "'");
}

/// Parses "ginibre", "scaled", "scaled:normal", ...; dim and seed stay default.
inline MatrixEnsemble parse_ensemble(std::string_view s) {
  MatrixEnsemble e;
  if (s.starts_with("scaled:")) {
    e.kind = EnsembleKind::scaled;
    e.base = parse_ensemble_kind(s.substr(7));
    if (e.base == EnsembleKind::scaled) throw InvalidInput("scaled ensemble cannot wrap itself");
  } else {
    e.kind = parse_ensemble_kind(s);
  }
  return e;
}

namespace detail {

inline Dense draw(Rng& rng, EnsembleKind kind, Index n) {
  const double v = 1.0 / static_cast<double>(n);
  switch (kind) {
    case EnsembleKind::ginibre:
      return gaussian_matrix(rng, n, n, v);
    case EnsembleKind::haar_unitary: {
      const Dense g = gaussian_matrix(rng, n, n, v);
      Eigen::HouseholderQR<Dense> qr(g);
      Dense q = qr.householderQ();
      const Dense r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (Index j = 0; j < n; ++j) {
        const double mod = std::abs(r(j, j));
        if (mod > 0.0) q.col(j) *= r(j, j) / mod;
      }
      return q;
    }
    case EnsembleKind::hermitian_psd: {
      const Dense g = gaussian_matrix(rng, n, n, v);
      return symmetrized(g.adjoint() * g);
    }
    case EnsembleKind::normal: {
      const Dense q = draw(rng, EnsembleKind::haar_unitary, n);
      Eigen::VectorXcd d(n);
      for (Index i = 0; i < n; ++i) d(i) = rng.complex_normal(1.0);
      return q * d.asDiagonal() * q.adjoint();
    }
    case EnsembleKind::nilpotent_shift: {
      Dense s = Dense::Zero(n, n);
      for (Index i = 0; i + 1 < n; ++i) s(i, i + 1) = 1.0;
      return s;
    }
    case EnsembleKind::rank_deficient: {
      const auto k = static_cast<Index>(1 + rng.next() % static_cast<std::uint64_t>(n - 1));
      const Dense u = gaussian_matrix(rng, n, k, v);
      const Dense w = gaussian_matrix(rng, n, k, v);
      return u * w.adjoint();
    }
    case EnsembleKind::scaled:
      break;
  }
  throw InvalidInput("scaled ensemble needs a base kind");
}

inline Complex draw_scale(std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x5ca1edULL));
  const double modulus = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(modulus, phase);
}

inline void check_dim(int dim) {
  if (dim < kMinDim || dim > kMaxDim)
    throw InvalidInput("ensemble dimension must lie in [" + std::to_string(kMinDim) + ", " +
                       std::to_string(kMaxDim) + "], got " + std::to_string(dim));
}

}  // namespace detail

/// Trial bundle: matrices A, B, C, D drawn in that order from one stream, then
/// unit vectors x, y. X, Y, S, T alias A, B, C, D. For the scaled ensemble the
/// matrices of the base bundle with the same seed are multiplied by a single
/// scalar, so both bundles share everything but scale.
inline Operands generate_bundle(const MatrixEnsemble& e) {
  detail::check_dim(e.dim);
  const EnsembleKind kind = e.kind == EnsembleKind::scaled ? e.base : e.kind;
  Rng rng(e.seed);
  const Index n = e.dim;
  Operands ops;
  const Complex c = e.kind == EnsembleKind::scaled ? detail::draw_scale(e.seed) : Complex(1.0, 0.0);
  for (const char* role : {"A", "B", "C", "D"}) ops.emplace(role, ComplexMatrix(c * detail::draw(rng, kind, n)));
  ops.emplace("x", ComplexMatrix(Dense(random_unit_vector(rng, n))));
  ops.emplace("y", ComplexMatrix(Dense(random_unit_vector(rng, n))));
  ops.emplace("X", ops.at("A"));
  ops.emplace("Y", ops.at("B"));
  ops.emplace("S", ops.at("C"));
  ops.emplace("T", ops.at("D"));
  return ops;
}

/// The first matrix of the bundle for (kind, dim, seed).
inline ComplexMatrix generate(const MatrixEnsemble& e) { return generate_bundle(e).at("A"); }

}  // namespace aluthge
