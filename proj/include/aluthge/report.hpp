#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aluthge/functions.hpp"
#include "aluthge/matrix.hpp"

namespace aluthge {

/// Operands keyed by role: "A".."D", "X", "Y", "S", "T" (matrices) and
/// "x", "y" (column vectors).
using Operands = std::map<std::string, ComplexMatrix>;

enum class Variant { as_stated, corrected };

inline const char* to_string(Variant v) { return v == Variant::corrected ? "corrected" : "as_stated"; }

inline Variant parse_variant(std::string_view s) {
  if (s == "corrected") return Variant::corrected;
  if (s == "as_stated") return Variant::as_stated;
  throw InvalidInput("unknown variant '" + std::string(s) + "'");
}

/// Every symbol a catalog statement may quantify over.
struct Params {
  std::optional<double> t;
  std::optional<double> r;
  std::optional<FunctionPair> pair;
  std::optional<GaugeFunction> gauge;
  std::optional<std::string> side;  // "lower" | "upper"
  std::optional<int> n;              // exponent of the power inequality

  /// Stable textual key; also the sort key for report ordering.
  std::string canonical() const {
    std::string out;
    auto add = [&out](const char* key, const std::string& value) {
      if (!out.empty()) out += ';';
      out += key;
      out += '=';
      out += value;
    };
    if (t) add("t", format_double(*t));
    if (r) add("r", format_double(*r));
    if (pair) add("pair", pair->label);
    if (gauge) add("gauge", gauge->label);
    if (side) add("side", *side);
    if (n) add("n", std::to_string(*n));
    return out;
  }
};

enum class Outcome { passed, failed, skipped };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::passed: return "passed";
    case Outcome::failed: return "failed";
    case Outcome::skipped: return "skipped";
  }
  return "?";
}

struct InequalityReport {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  std::string id;
  Variant variant = Variant::corrected;
  std::string inputs_digest;
  Params params;
  double lhs = kNaN;
  double rhs = kNaN;
  double slack = kNaN;  // rhs - lhs
  double tolerance = kNaN;
  Outcome outcome = Outcome::skipped;
  std::string note;  // skip reason or error text
  std::vector<std::pair<std::string, double>> witness;
  Operands inputs;  // replay bundle, filled for failures and tightness probes

  bool passed() const noexcept { return outcome == Outcome::passed; }
  bool skipped() const noexcept { return outcome == Outcome::skipped; }
};

/// tolerance = relative * (1 + scale), scale defaulting to max(|lhs|, |rhs|).
/// Inequalities pass when lhs <= rhs + tolerance, identities when
/// |lhs - rhs| <= tolerance.
inline void settle(InequalityReport& report, double relative, bool identity,
                   std::optional<double> scale = std::nullopt) {
  const double s = scale.value_or(std::max(std::abs(report.lhs), std::abs(report.rhs)));
  report.slack = report.rhs - report.lhs;
  report.tolerance = relative * (1.0 + s);
  const bool ok = identity ? std::abs(report.slack) <= report.tolerance
                           : report.lhs <= report.rhs + report.tolerance;
  report.outcome = ok ? Outcome::passed : Outcome::failed;
}

inline void mark_skipped(InequalityReport& report, std::string reason) {
  report.outcome = Outcome::skipped;
  report.note = std::move(reason);
  report.lhs = report.rhs = report.slack = report.tolerance = InequalityReport::kNaN;
}

}  // namespace aluthge
