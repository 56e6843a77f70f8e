#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "aluthge/errors.hpp"
#include "aluthge/format.hpp"

namespace aluthge {

/// Stateless map on [0, inf). Must be safe to call concurrently.
using ScalarMap = std::function<double(double)>;

/// x in {0, 1e-6, 1e-3, 0.1k for k = 0..100, 1e2, 1e3}, ascending, no duplicates.
inline std::vector<double> validation_grid() {
  std::vector<double> grid{0.0, 1e-6, 1e-3};
  for (int k = 1; k <= 100; ++k) grid.push_back(0.1 * k);
  grid.push_back(1e2);
  grid.push_back(1e3);
  return grid;
}

enum class PairKind { power, custom };

/// Factorization f(x) g(x) = x of the identity on [0, inf).
struct FunctionPair {
  std::string label;
  ScalarMap f;
  ScalarMap g;
  bool monotone = false;
  PairKind kind = PairKind::custom;
  double exponent = 0.0;  // t for power pairs
};

enum class GaugeKind { power, expm1, custom };

/// Non-negative, non-decreasing, convex h on [0, inf).
struct GaugeFunction {
  std::string label;
  ScalarMap h;
  GaugeKind kind = GaugeKind::custom;
  double exponent = 1.0;  // r for power gauges
};

/// Grid points where f or g overflows are not representable and are left out
/// of the product check (the exp pair's g(1000) = e^1000).
inline void validate(const FunctionPair& pair) {
  const auto grid = validation_grid();
  double prev_f = 0.0, prev_g = 0.0;
  bool have_prev = false;
  for (double x : grid) {
    const double fx = pair.f(x), gx = pair.g(x);
    if (std::isnan(fx) || std::isnan(gx))
      throw InvalidInput("pair '" + pair.label + "' is NaN at x = " + format_double(x));
    if (fx < 0.0 || gx < 0.0)
      throw InvalidInput("pair '" + pair.label + "' is negative at x = " + format_double(x));
    const bool finite = std::isfinite(fx) && std::isfinite(gx);
    if (finite && std::abs(fx * gx - x) > 1e-10 * (1.0 + x))
      throw InvalidInput("pair '" + pair.label + "' violates f(x)g(x) = x at x = " + format_double(x));
    if (pair.monotone && have_prev && finite) {
      if (fx - prev_f < -1e-12 || gx - prev_g < -1e-12)
        throw InvalidInput("pair '" + pair.label + "' is flagged monotone but decreases near x = " +
                           format_double(x));
    }
    if (finite) {
      prev_f = fx;
      prev_g = gx;
      have_prev = true;
    }
  }
}

inline void validate(const GaugeFunction& gauge) {
  const auto grid = validation_grid();
  if (!(gauge.h(0.0) >= 0.0)) throw InvalidInput("gauge '" + gauge.label + "' is negative at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = gauge.h(grid[i - 1]), b = gauge.h(grid[i]);
    if (std::isnan(a) || std::isnan(b)) throw InvalidInput("gauge '" + gauge.label + "' is NaN");
    if (std::isfinite(b) && b - a < -1e-12 * (1.0 + std::abs(a)))
      throw InvalidInput("gauge '" + gauge.label + "' decreases near x = " + format_double(grid[i]));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double hx = gauge.h(grid[i]), hy = gauge.h(grid[j]);
      const double mid = gauge.h(0.5 * (grid[i] + grid[j]));
      if (!std::isfinite(hx) || !std::isfinite(hy) || !std::isfinite(mid)) continue;
      const double avg = 0.5 * (hx + hy);
      if (mid > avg + 1e-10 * (1.0 + std::abs(avg)))
        throw InvalidInput("gauge '" + gauge.label + "' fails midpoint convexity on [" +
                           format_double(grid[i]) + ", " + format_double(grid[j]) + "]");
    }
  }
}

/// f(x) = x^t, g(x) = x^(1-t), with 0^0 := 0 so that f(0) = g(0) = 0 for
/// every t; t = 1/2 is the Aluthge pair and t = 1 the Duggal pair.
inline FunctionPair make_power_pair(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("power pair exponent must lie in [0, 1], got " + format_double(t));
  const double s = 1.0 - t;
  FunctionPair pair{
      "power:" + format_double(t),
      [t](double x) { return x <= 0.0 ? 0.0 : std::pow(x, t); },
      [s](double x) { return x <= 0.0 ? 0.0 : std::pow(x, s); },
      true,
      PairKind::power,
      t,
  };
  return pair;
}

inline FunctionPair make_custom_pair(std::string label, ScalarMap f, ScalarMap g, bool monotone) {
  FunctionPair pair{std::move(label), std::move(f), std::move(g), monotone, PairKind::custom, 0.0};
  validate(pair);
  return pair;
}

/// Two pairs outside the power family. For both g(0) != 0, which is where the
/// partial-isometry convention of the polar factor matters.
inline std::vector<FunctionPair> builtin_custom_pairs() {
  return {
      make_custom_pair(
          "rational", [](double x) { return x / (1.0 + x); }, [](double x) { return 1.0 + x; }, true),
      make_custom_pair(
          "exp", [](double x) { return x * std::exp(-x); }, [](double x) { return std::exp(x); }, false),
  };
}

inline GaugeFunction make_power_gauge(double r) {
  if (!(r >= 1.0)) throw InvalidInput("power gauge exponent must be >= 1, got " + format_double(r));
  GaugeFunction gauge{
      "gauge:power:" + format_double(r),
      [r](double x) { return x <= 0.0 ? 0.0 : std::pow(x, r); },
      GaugeKind::power,
      r,
  };
  return gauge;
}

inline GaugeFunction make_expm1_gauge() {
  return {"gauge:expm1", [](double x) { return std::expm1(x); }, GaugeKind::expm1, 1.0};
}

inline GaugeFunction make_custom_gauge(std::string label, ScalarMap h) {
  GaugeFunction gauge{std::move(label), std::move(h), GaugeKind::custom, 1.0};
  validate(gauge);
  return gauge;
}

/// "power:<t>", "rational" or "exp".
inline FunctionPair parse_pair(std::string_view spec) {
  if (spec.starts_with("power:")) {
    const auto t = parse_double(spec.substr(6));
    if (!t) throw InvalidInput("bad power pair spec '" + std::string(spec) + "'");
    return make_power_pair(*t);
  }
  for (auto& pair : builtin_custom_pairs())
    if (pair.label == spec) return pair;
  throw InvalidInput("unknown function pair '" + std::string(spec) + "'");
}

/// "gauge:power:<r>" or "gauge:expm1"; the "gauge:" prefix is optional.
inline GaugeFunction parse_gauge(std::string_view spec) {
  if (spec.starts_with("gauge:")) spec.remove_prefix(6);
  if (spec == "expm1") return make_expm1_gauge();
  if (spec.starts_with("power:")) {
    const auto r = parse_double(spec.substr(6));
    if (!r) throw InvalidInput("bad power gauge spec '" + std::string(spec) + "'");
    return make_power_gauge(*r);
  }
  throw InvalidInput("unknown gauge '" + std::string(spec) + "'");
}

}  // namespace aluthge
