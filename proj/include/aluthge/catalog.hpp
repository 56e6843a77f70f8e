#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aluthge/json_io.hpp"
#include "aluthge/radii.hpp"
#include "aluthge/report.hpp"
#include "aluthge/transforms.hpp"

namespace aluthge {

struct Tolerances {
  double relative = 1e-8;
  double positivity = 1e-10;  // lambda_min >= -positivity * (1 + ||A||)
  double normality = 1e-8;    // ||AA* - A*A|| <= normality * ||A||^2
  std::map<std::string, double> per_id{{"polarization", 1e-12}};
  SweepOptions sweep;
  std::optional<double> rank_tolerance;  // overrides n * eps * s_max in polar factors

  double relative_for(const std::string& id) const {
    auto it = per_id.find(id);
    return it == per_id.end() ? relative : it->second;
  }
};

enum class Constraint { none, positive, normal };

struct ParamNeeds {
  bool t = false;
  bool r = false;
  bool pair = false;
  bool gauge = false;
  bool side = false;
};

class Evaluator;

/// One side pair as produced by a catalog entry. scale overrides the default
/// tolerance scale max(|lhs|, |rhs|) for residual-type checks whose rhs is 0.
struct Sides {
  Sides() = default;
  Sides(double l, double r, std::optional<double> s = std::nullopt) : lhs(l), rhs(r), scale(s) {}

  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> scale;
  std::vector<std::pair<std::string, double>> witness;
};

using EvaluateFn = std::function<Sides(Evaluator&, const Params&, Variant)>;

struct CatalogEntry {
  std::string id;
  std::vector<std::string> roles;
  ParamNeeds needs;
  Constraint constraint = Constraint::none;
  bool monotone_pair = false;
  bool identity = false;
  bool homogeneous = false;  // both sides scale by the same power of |c| under A -> cA
  bool has_corrected = false;
  std::string statement;
  EvaluateFn evaluate;
};

const std::vector<CatalogEntry>& catalog();

/// Per-trial evaluation context. lhs and rhs quantities live in separate
/// caches so no polar factor or radius computed for one side is reused by the
/// other; within a side, quantities shared by several ids are computed once.
class Evaluator {
 public:
  Evaluator(Operands operands, Tolerances tolerances)
      : ops_(std::move(operands)), tol_(std::move(tolerances)) {}

  const Tolerances& tolerances() const noexcept { return tol_; }
  const Operands& operands() const noexcept { return ops_; }

  const ComplexMatrix& op(const std::string& role) const {
    auto it = ops_.find(role);
    if (it == ops_.end()) throw ConstraintViolation("missing operand '" + role + "'");
    return it->second;
  }

  // ---- lhs side: radii and norms of the original operands ----

  const RadiusEstimate& lhs_radius(const std::string& key, const std::function<ComplexMatrix()>& build) {
    return radius_in(lhs_radii_, key, build);
  }

  /// Polar factors used only by lhs routes (for example T-tilde of a block
  /// matrix), decomposed independently of anything the rhs sees.
  const PolarFactors& lhs_polar(const std::string& key, const std::function<ComplexMatrix()>& build) {
    auto it = lhs_polars_.find(key);
    if (it == lhs_polars_.end()) it = lhs_polars_.emplace(key, polar_decompose(build(), tol_.rank_tolerance)).first;
    return it->second;
  }

  // ---- rhs side: polar calculus and transforms ----

  /// expr is a role ("A") or its adjoint ("A*").
  const PolarFactors& polar(const std::string& expr) {
    auto it = rhs_polars_.find(expr);
    if (it == rhs_polars_.end()) {
      const bool star = expr.size() > 1 && expr.back() == '*';
      const ComplexMatrix& m = op(star ? expr.substr(0, expr.size() - 1) : expr);
      it = rhs_polars_.emplace(expr, polar_decompose(star ? adjoint(m) : m, tol_.rank_tolerance)).first;
    }
    return it->second;
  }

  /// fn(|expr|).
  ComplexMatrix of_abs(const std::string& expr, const ScalarMap& fn) { return polar(expr).apply(fn); }

  /// w of the generalized transform of a role.
  double transform_radius(const std::string& role, const FunctionPair& pair) {
    return radius_in(rhs_radii_, role + "|" + pair.label,
                     [&] { return aluthge_general(polar(role), pair).transformed; })
        .value;
  }

  double rhs_radius(const std::string& key, const std::function<ComplexMatrix()>& build) {
    return radius_in(rhs_radii_, key, build).value;
  }

  /// A^p for a positive operand through its own eigendecomposition; tiny
  /// negative eigenvalues admitted by the positivity check count as 0.
  ComplexMatrix positive_power(const std::string& role, double p) {
    auto it = positive_eigen_.find(role);
    if (it == positive_eigen_.end()) it = positive_eigen_.emplace(role, herm_eigen(op(role))).first;
    const HermitianEigen& e = it->second;
    const auto n = e.eigenvalues.size();
    const double top = std::max(std::abs(e.eigenvalues(0)), std::abs(e.eigenvalues(n - 1)));
    const double tau = std::max(16.0 * static_cast<double>(n) * kEpsilon * top, tol_.positivity * (1.0 + top));
    Eigen::VectorXd values(n);
    for (Index i = 0; i < n; ++i) {
      const double lambda = e.eigenvalues(i);
      values(i) = lambda <= tau ? 0.0 : std::pow(lambda, p);
    }
    return ComplexMatrix(detail::spectral_compose(e.eigenvectors.dense(), values));
  }

  // ---- validation and bookkeeping ----

  bool is_positive(const std::string& role) {
    return memo(positive_, role, [&](const ComplexMatrix& m) {
      const double fro = m.dense().norm();
      if ((m.dense() - m.dense().adjoint()).norm() > kHermitianTolerance * (1.0 + fro)) return false;
      const Eigen::SelfAdjointEigenSolver<Dense> es(detail::symmetrized(m.dense()), Eigen::EigenvaluesOnly);
      const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
      return es.eigenvalues()(0) >= -tol_.positivity * (1.0 + norm);
    });
  }

  bool is_normal(const std::string& role) {
    return memo(normal_, role, [&](const ComplexMatrix& m) {
      const Dense& a = m.dense();
      const double norm = operator_norm(m);
      const Dense comm = a * a.adjoint() - a.adjoint() * a;
      return detail::largest_singular_value(comm) <= tol_.normality * norm * norm;
    });
  }

  /// Checks roles, shapes, constraints and parameter domains for an entry.
  void require(const CatalogEntry& e, const Params& p) {
    Index n = -1;
    for (const std::string& role : e.roles) {
      const ComplexMatrix& m = op(role);
      const bool vector = role == "x" || role == "y";
      if (!vector && !m.square()) throw InvalidInput(e.id + ": operand " + role + " must be square");
      if (vector && m.cols() != 1) throw InvalidInput(e.id + ": operand " + role + " must be a column vector");
      if (n < 0) n = m.rows();
      if (m.rows() != n) throw InvalidInput(e.id + ": operands must share dimension " + std::to_string(n));
    }
    for (const std::string& role : e.roles) {
      if (role == "x" || role == "y") continue;
      if (e.constraint == Constraint::positive && !is_positive(role))
        throw ConstraintViolation(e.id + ": operand " + role + " must be positive semidefinite");
      if (e.constraint == Constraint::normal && !is_normal(role))
        throw ConstraintViolation(e.id + ": operand " + role + " must be normal");
    }
    auto need = [&](bool needed, bool present, const char* what) {
      if (needed && !present) throw InvalidInput(e.id + ": parameter '" + what + "' is required");
    };
    need(e.needs.t, p.t.has_value(), "t");
    need(e.needs.r, p.r.has_value(), "r");
    need(e.needs.pair, p.pair.has_value(), "pair");
    need(e.needs.gauge, p.gauge.has_value(), "gauge");
    need(e.needs.side, p.side.has_value(), "side");
    if (e.needs.t && !(*p.t >= 0.0 && *p.t <= 1.0)) throw InvalidInput(e.id + ": t must lie in [0, 1]");
    if (e.needs.r && !(*p.r >= 1.0)) throw InvalidInput(e.id + ": r must be >= 1");
    if (e.needs.side && *p.side != "lower" && *p.side != "upper")
      throw InvalidInput(e.id + ": side must be 'lower' or 'upper'");
    if (e.monotone_pair && !p.pair->monotone)
      throw ConstraintViolation(e.id + ": pair '" + p.pair->label + "' must be non-decreasing");
  }

  std::string digest(const CatalogEntry& e, const Params& p) {
    std::string material;
    for (const std::string& role : e.roles) {
      auto it = digests_.find(role);
      if (it == digests_.end()) it = digests_.emplace(role, matrix_digest(op(role))).first;
      material += role + '=' + it->second + ';';
    }
    return sha256_hex(material + p.canonical());
  }

  /// Throws InvalidInput / ConstraintViolation for schema problems; overflow
  /// during evaluation yields a skipped report.
  InequalityReport check(const CatalogEntry& e, const Params& params, Variant variant) {
    require(e, params);
    InequalityReport report;
    report.id = e.id;
    report.variant = variant;
    report.params = params;
    report.inputs_digest = digest(e, params);
    try {
      Sides s = e.evaluate(*this, params, variant);
      if (!std::isfinite(s.lhs) || !std::isfinite(s.rhs) || (s.scale && !std::isfinite(*s.scale))) {
        mark_skipped(report, "overflow: non-finite side");
        return report;
      }
      report.lhs = s.lhs;
      report.rhs = s.rhs;
      report.witness = std::move(s.witness);
      settle(report, tol_.relative_for(e.id), e.identity, s.scale);
    } catch (const NonFiniteValue& ex) {
      mark_skipped(report, std::string("overflow: ") + ex.what());
    }
    if (report.outcome == Outcome::failed)
      for (const std::string& role : e.roles) report.inputs.emplace(role, op(role));
    return report;
  }

 private:
  const RadiusEstimate& radius_in(std::map<std::string, RadiusEstimate>& cache, const std::string& key,
                                  const std::function<ComplexMatrix()>& build) {
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, numerical_radius_sweep(build(), tol_.sweep)).first;
    return it->second;
  }

  template <class Fn>
  bool memo(std::map<std::string, bool>& cache, const std::string& role, Fn&& fn) {
    auto it = cache.find(role);
    if (it == cache.end()) it = cache.emplace(role, fn(op(role))).first;
    return it->second;
  }

  Operands ops_;
  Tolerances tol_;
  std::map<std::string, RadiusEstimate> lhs_radii_, rhs_radii_;
  std::map<std::string, PolarFactors> lhs_polars_, rhs_polars_;
  std::map<std::string, HermitianEigen> positive_eigen_;
  std::map<std::string, bool> positive_, normal_;
  std::map<std::string, std::string> digests_;
};

namespace detail {

inline double norm(const ComplexMatrix& m) { return operator_norm(m); }

/// x -> x^p with 0^p = 0 for every p (so 0^0 = 0).
inline ScalarMap power_map(double p) {
  return [p](double x) { return x > 0.0 ? std::pow(x, p) : 0.0; };
}

inline ScalarMap compose(ScalarMap outer, ScalarMap inner) {
  return [outer = std::move(outer), inner = std::move(inner)](double x) { return outer(inner(x)); };
}

inline ScalarMap square_of(ScalarMap fn) {
  return [fn = std::move(fn)](double x) {
    const double v = fn(x);
    return v * v;
  };
}

/// fn(x)^q.
inline ScalarMap raised(ScalarMap fn, double q) {
  return [fn = std::move(fn), q](double x) {
    const double v = fn(x);
    return v > 0.0 ? std::pow(v, q) : 0.0;
  };
}

inline Sides with_theta(Sides s, const RadiusEstimate& w) {
  s.witness.emplace_back("theta_star", w.theta_star);
  s.witness.emplace_back("witness_lower_bound", w.lower_bound);
  return s;
}

/// max over theta of ||Re(e^{i theta} A)|| by its own grid and refinement,
/// using operator norms instead of the top eigenvalue the sweep uses. The
/// norm has period pi in theta.
inline double max_real_part_norm(const Dense& a, const SweepOptions& options) {
  constexpr int kGrid = 512;
  const AnglePencil pencil(a);
  auto norm_at = [&](double theta) { return largest_singular_value(pencil.at(theta)); };
  const double step = std::numbers::pi / kGrid;
  std::vector<double> m(kGrid);
  for (int k = 0; k < kGrid; ++k) m[static_cast<std::size_t>(k)] = norm_at(step * k);
  const auto starts = refinement_starts(m, step, 64.0 * kMachineEpsilon * a.norm(), 16);
  Peak best{step * static_cast<double>(starts.front()), m[starts.front()]};
  for (std::size_t i : starts) {
    const double centre = step * static_cast<double>(i);
    best = golden_max(norm_at, centre - step, centre + step, options.refine_tol, best);
  }
  return best.value;
}

inline ComplexMatrix offdiag_of(Evaluator& ev, const std::string& a, const std::string& b) {
  return offdiag_embed(ev.op(a), ev.op(b));
}

/// Shared body of the two off-diagonal bounds: the mixed products
/// ||f(|B|) g(|A*|)|| and ||f(|A|) g(|B*|)||.
inline std::pair<double, double> mixed_products(Evaluator& ev, const FunctionPair& pair) {
  const double first = norm(multiply(ev.of_abs("B", pair.f), ev.of_abs("A*", pair.g)));
  const double second = norm(multiply(ev.of_abs("A", pair.f), ev.of_abs("B*", pair.g)));
  return {first, second};
}

/// ||f^{2r}(|X|) + g^{2r}(|X|)|| via one spectral map.
inline double gauge_sum_norm(Evaluator& ev, const std::string& expr, const ScalarMap& u, const ScalarMap& v) {
  return norm(ev.polar(expr).apply([&](double x) { return u(x) + v(x); }));
}

/// The four pairs of the 2x2 block bound, one per block.
struct BlockPairs {
  FunctionPair p1, p2, p3, p4;
};

inline Sides block_bound(Evaluator& ev, const BlockPairs& bp, Variant variant, bool printed_powers) {
  const RadiusEstimate& w = ev.lhs_radius("block(A,B,C,D)", [&] {
    return block2x2(ev.op("A"), ev.op("B"), ev.op("C"), ev.op("D"));
  });
  const double first_sum = norm(ev.of_abs("A", square_of(bp.p1.f)) + ev.of_abs("B*", square_of(bp.p2.g)) +
                                ev.of_abs("C", square_of(bp.p3.f)));
  const double d_term = norm(ev.of_abs("D*", bp.p4.g));
  const double a_term = norm(ev.of_abs("A*", bp.p1.g));
  const ScalarMap d_map = printed_powers && variant == Variant::as_stated ? bp.p4.f : square_of(bp.p4.f);
  const double second_sum =
      norm(ev.of_abs("B", square_of(bp.p2.f)) + ev.of_abs("C*", square_of(bp.p3.g)) + ev.of_abs("D", d_map));

  const double m1 = std::max(std::sqrt(first_sum), d_term);
  Sides s;
  s.lhs = w.value;
  if (variant == Variant::corrected) {
    s.rhs = m1 * std::max(a_term, std::sqrt(second_sum));
  } else {
    const double second = printed_powers ? second_sum : std::sqrt(second_sum);
    s.rhs = m1 + std::max(a_term, second);
  }
  return with_theta(std::move(s), w);
}

inline const RadiusEstimate& w_of(Evaluator& ev, const std::string& role) {
  return ev.lhs_radius(role, [&] { return ev.op(role); });
}

inline std::vector<CatalogEntry> build_catalog() {
  using V = Variant;
  std::vector<CatalogEntry> t;

  t.push_back({"half_norm_power", {"A"}, {}, Constraint::none, false, false, true, false,
               "w(A) <= (||A|| + ||A^2||^(1/2)) / 2",
               [](Evaluator& ev, const Params&, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 const ComplexMatrix& a = ev.op("A");
                 Sides s{w.value, 0.5 * (norm(a) + std::sqrt(norm(multiply(a, a))))};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"yamazaki_t", {"A"}, {.t = true}, Constraint::none, false, false, true, false,
               "w(A) <= (||A|| + w(A_t)) / 2",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 const FunctionPair pair = make_power_pair(*p.t);
                 Sides s{w.value, 0.5 * (norm(ev.op("A")) + ev.transform_radius("A", pair))};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"davidson_power", {"A", "B"}, {}, Constraint::positive, false, false, true, false,
               "||A + B|| <= max(||A||, ||B||) + ||AB||^(1/2) for positive A, B",
               [](Evaluator& ev, const Params&, V) {
                 const ComplexMatrix& a = ev.op("A");
                 const ComplexMatrix& b = ev.op("B");
                 return Sides{norm(a + b), std::max(norm(a), norm(b)) + std::sqrt(norm(multiply(a, b)))};
               }});

  t.push_back({"shebrawi_sum_t", {"A", "B"}, {.t = true}, Constraint::none, false, false, true, false,
               "||A + B*|| <= max(||A||, ||B||) + (|| |A|^t |B*|^(1-t) || + || |A*|^(1-t) |B|^t ||) / 2",
               [](Evaluator& ev, const Params& p, V) {
                 const ComplexMatrix& a = ev.op("A");
                 const ComplexMatrix& b = ev.op("B");
                 const double lhs = norm(a + adjoint(b));
                 const ScalarMap ft = power_map(*p.t), gt = power_map(1.0 - *p.t);
                 const double m1 = norm(multiply(ev.of_abs("A", ft), ev.of_abs("B*", gt)));
                 const double m2 = norm(multiply(ev.of_abs("A*", gt), ev.of_abs("B", ft)));
                 return Sides{lhs, std::max(norm(a), norm(b)) + 0.5 * (m1 + m2)};
               }});

  t.push_back({"spectral_sum", {"X", "Y", "S", "T"}, {}, Constraint::none, false, false, true, false,
               "r(XY + ST) <= (w(YX) + w(TS)) / 2 + sqrt((w(YX) - w(TS))^2 + 4 ||YS|| ||TX||) / 2",
               [](Evaluator& ev, const Params&, V) {
                 const ComplexMatrix &x = ev.op("X"), &y = ev.op("Y"), &s = ev.op("S"), &tt = ev.op("T");
                 const double lhs = spectral_radius(multiply(x, y) + multiply(s, tt));
                 const double a = ev.rhs_radius("YX", [&] { return multiply(y, x); });
                 const double b = ev.rhs_radius("TS", [&] { return multiply(tt, s); });
                 const double cross = norm(multiply(y, s)) * norm(multiply(tt, x));
                 return Sides{lhs, 0.5 * (a + b) + 0.5 * std::sqrt((a - b) * (a - b) + 4.0 * cross)};
               }});

  t.push_back({"sup_angle_identity", {"A"}, {}, Constraint::none, false, true, true, false,
               "w(A) = max over theta of ||Re(e^(i theta) A)||",
               [](Evaluator& ev, const Params&, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 Sides s{w.value, max_real_part_norm(ev.op("A").dense(), ev.tolerances().sweep)};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"offdiag_half_norm_identity", {"A"}, {}, Constraint::none, false, true, true, false,
               "w([[0, A], [0, 0]]) = ||A|| / 2",
               [](Evaluator& ev, const Params&, V) {
                 const ComplexMatrix& a = ev.op("A");
                 const RadiusEstimate& w = ev.lhs_radius("[[0,A],[0,0]]", [&] {
                   const auto z = ComplexMatrix::zero(a.rows(), a.rows());
                   return block2x2(z, a, z, z);
                 });
                 return with_theta(Sides{w.value, 0.5 * norm(a)}, w);
               }});

  // Residual form: lhs = |<x,y> - (1/4) sum_k ||x + i^k y||^2 i^k|, rhs = 0,
  // scaled by ||x|| ||y||.
  t.push_back({"polarization", {"x", "y"}, {}, Constraint::none, false, true, false, false,
               "<x, y> = (1/4) sum_{k=0..3} ||x + i^k y||^2 i^k",
               [](Evaluator& ev, const Params&, V) {
                 const Eigen::VectorXcd x = ev.op("x").dense().col(0);
                 const Eigen::VectorXcd y = ev.op("y").dense().col(0);
                 const Complex direct = y.dot(x);  // sum_j x_j conj(y_j)
                 Complex sum(0.0, 0.0);
                 Complex ik(1.0, 0.0);
                 for (int k = 0; k < 4; ++k) {
                   sum += (x + ik * y).squaredNorm() * ik;
                   ik *= Complex(0.0, 1.0);
                 }
                 Sides s{std::abs(direct - 0.25 * sum), 0.0, x.norm() * y.norm()};
                 s.witness = {{"inner_re", direct.real()}, {"inner_im", direct.imag()}};
                 return s;
               }});

  t.push_back({"main_gauge", {"A"}, {.pair = true, .gauge = true}, Constraint::none, false, false, false, false,
               "h(w(A)) <= ||h(g^2(|A|)) + h(f^2(|A|))|| / 4 + h(w(A_fg)) / 2",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 const ScalarMap& h = p.gauge->h;
                 const double sum = gauge_sum_norm(ev, "A", compose(h, square_of(p.pair->g)),
                                                   compose(h, square_of(p.pair->f)));
                 Sides s{h(w.value), 0.25 * sum + 0.5 * h(ev.transform_radius("A", *p.pair))};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"main_gauge_power_t", {"A"}, {.t = true, .gauge = true}, Constraint::none, false, false, false,
               false, "h(w(A)) <= ||h(|A|^(2t)) + h(|A|^(2(1-t)))|| / 4 + h(w(A_t)) / 2",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 const ScalarMap& h = p.gauge->h;
                 const double sum = gauge_sum_norm(ev, "A", compose(h, power_map(2.0 * *p.t)),
                                                   compose(h, power_map(2.0 * (1.0 - *p.t))));
                 const double wt = ev.transform_radius("A", make_power_pair(*p.t));
                 Sides s{h(w.value), 0.25 * sum + 0.5 * h(wt)};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"power_r_t", {"A"}, {.t = true, .r = true}, Constraint::none, false, false, true, false,
               "w^r(A) <= || |A|^(2tr) + |A|^(2(1-t)r) || / 4 + w^r(A_t) / 2",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 const double r = *p.r, tt = *p.t;
                 const double sum = gauge_sum_norm(ev, "A", power_map(2.0 * tt * r), power_map(2.0 * (1.0 - tt) * r));
                 const double wt = ev.transform_radius("A", make_power_pair(tt));
                 Sides s{std::pow(w.value, r), 0.25 * sum + 0.5 * std::pow(wt, r)};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"offdiag_fg_r", {"A", "B"}, {.r = true, .pair = true}, Constraint::none, false, false, false, false,
               "w^r([[0, A], [B, 0]]) <= max(||g^2r(|A|) + f^2r(|A|)||, ||g^2r(|B|) + f^2r(|B|)||) / 4 + "
               "(||f(|B|) g(|A*|)||^r + ||f(|A|) g(|B*|)||^r) / 4",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = ev.lhs_radius("[[0,A],[B,0]]", [&] { return offdiag_of(ev, "A", "B"); });
                 const double r = *p.r;
                 const ScalarMap f2r = raised(p.pair->f, 2.0 * r), g2r = raised(p.pair->g, 2.0 * r);
                 const double big = std::max(gauge_sum_norm(ev, "A", g2r, f2r), gauge_sum_norm(ev, "B", g2r, f2r));
                 const auto [m1, m2] = mixed_products(ev, *p.pair);
                 Sides s{std::pow(w.value, r), 0.25 * big + 0.25 * (std::pow(m1, r) + std::pow(m2, r))};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"offdiag_transform_bound", {"A", "B"}, {.pair = true}, Constraint::none, false, false, false, false,
               "w(T_fg) <= (||f(|B|) g(|A*|)|| + ||f(|A|) g(|B*|)||) / 2 for T = [[0, A], [B, 0]]",
               [](Evaluator& ev, const Params& p, V) {
                 const PolarFactors& tp = ev.lhs_polar("[[0,A],[B,0]]", [&] { return offdiag_of(ev, "A", "B"); });
                 const RadiusEstimate& w = ev.lhs_radius("T|" + p.pair->label,
                                                         [&] { return aluthge_general(tp, *p.pair).transformed; });
                 const auto [m1, m2] = mixed_products(ev, *p.pair);
                 return with_theta(Sides{w.value, 0.5 * (m1 + m2)}, w);
               }});

  t.push_back({"product_w_r", {"A", "B"}, {.t = true, .r = true}, Constraint::none, false, false, true, false,
               "w^(r/2)(AB) <= max(|| |A|^(2tr) + |A|^(2(1-t)r) ||, || |B|^(2tr) + |B|^(2(1-t)r) ||) / 4 + "
               "(|| |A|^t |B*|^(1-t) ||^r + || |B|^t |A*|^(1-t) ||^r) / 4",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = ev.lhs_radius("AB", [&] { return multiply(ev.op("A"), ev.op("B")); });
                 const double r = *p.r, tt = *p.t;
                 const ScalarMap u = power_map(2.0 * tt * r), v = power_map(2.0 * (1.0 - tt) * r);
                 const double big = std::max(gauge_sum_norm(ev, "A", u, v), gauge_sum_norm(ev, "B", u, v));
                 const ScalarMap ft = power_map(tt), gt = power_map(1.0 - tt);
                 const double m1 = norm(multiply(ev.of_abs("A", ft), ev.of_abs("B*", gt)));
                 const double m2 = norm(multiply(ev.of_abs("B", ft), ev.of_abs("A*", gt)));
                 Sides s{std::pow(w.value, 0.5 * r), 0.25 * big + 0.25 * (std::pow(m1, r) + std::pow(m2, r))};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"positive_product_r", {"A", "B"}, {.t = true, .r = true}, Constraint::positive, false, false, true,
               true,
               "||A^(1/2) B^(1/2)||^r <= max(||A^(2tr) + A^(2(1-t)r)||, ||B^(2tr) + B^(2(1-t)r)||) / 4 + "
               "(||A^t B^(1-t)||^r + ||B^t A^(1-t)||^r) / 4 for positive A, B",
               [](Evaluator& ev, const Params& p, V variant) {
                 const double r = *p.r, tt = *p.t;
                 const ComplexMatrix& a = ev.op("A");
                 const ComplexMatrix& b = ev.op("B");
                 // lhs through square roots taken on the original operands
                 const double lhs = std::pow(norm(multiply(matrix_function(a, power_map(0.5)),
                                                           matrix_function(b, power_map(0.5)))),
                                             r);
                 double big = 0.0;
                 if (variant == Variant::corrected) {
                   big = std::max(norm(ev.positive_power("A", 2.0 * tt * r) + ev.positive_power("A", 2.0 * (1.0 - tt) * r)),
                                  norm(ev.positive_power("B", 2.0 * tt * r) + ev.positive_power("B", 2.0 * (1.0 - tt) * r)));
                 } else {
                   big = std::max(norm(ev.positive_power("A", tt * r) + ev.positive_power("A", (1.0 - tt) * r)),
                                  norm(ev.positive_power("B", tt * r) + ev.positive_power("B", 2.0 * (1.0 - tt) * r)));
                 }
                 const double m1 = norm(multiply(ev.positive_power("A", tt), ev.positive_power("B", 1.0 - tt)));
                 const double m2 = norm(multiply(ev.positive_power("B", tt), ev.positive_power("A", 1.0 - tt)));
                 return Sides{lhs, 0.25 * big + 0.25 * (std::pow(m1, r) + std::pow(m2, r))};
               }});

  t.push_back({"product_norm_spectral", {"A", "B"}, {.r = true}, Constraint::positive, false, true, true, false,
               "||A^(1/2) B^(1/2)||^r = r^(r/2)(AB) for positive A, B",
               [](Evaluator& ev, const Params& p, V) {
                 const double r = *p.r;
                 const ComplexMatrix& a = ev.op("A");
                 const ComplexMatrix& b = ev.op("B");
                 const double lhs = std::pow(norm(multiply(matrix_function(a, power_map(0.5)),
                                                           matrix_function(b, power_map(0.5)))),
                                             r);
                 return Sides{lhs, std::pow(spectral_radius(multiply(a, b)), 0.5 * r)};
               }});

  t.push_back({"sum_refined_r", {"A", "B"}, {.t = true, .r = true}, Constraint::none, false, false, true, false,
               "||A + B||^r <= 2^(r-2) max(|| |A|^(2tr) + |A|^(2(1-t)r) ||, || |B*|^(2tr) + |B*|^(2(1-t)r) ||) + "
               "2^(r-2) (|| |A|^t |B|^(1-t) ||^r + || |B*|^t |A*|^(1-t) ||^r)",
               [](Evaluator& ev, const Params& p, V) {
                 const double r = *p.r, tt = *p.t;
                 const double lhs = std::pow(norm(ev.op("A") + ev.op("B")), r);
                 const ScalarMap u = power_map(2.0 * tt * r), v = power_map(2.0 * (1.0 - tt) * r);
                 const double big = std::max(gauge_sum_norm(ev, "A", u, v), gauge_sum_norm(ev, "B*", u, v));
                 const ScalarMap ft = power_map(tt), gt = power_map(1.0 - tt);
                 const double m1 = norm(multiply(ev.of_abs("A", ft), ev.of_abs("B", gt)));
                 const double m2 = norm(multiply(ev.of_abs("B*", ft), ev.of_abs("A*", gt)));
                 const double c = std::pow(2.0, r - 2.0);
                 return Sides{lhs, c * big + c * (std::pow(m1, r) + std::pow(m2, r))};
               }});

  t.push_back({"sum_refined_normal_r", {"A", "B"}, {.r = true}, Constraint::normal, false, false, true, false,
               "||A + B||^r <= 2^(r-1) max(||A||^r, ||B||^r) + 2^(r-1) ||AB||^(r/2) for normal A, B",
               [](Evaluator& ev, const Params& p, V) {
                 const double r = *p.r;
                 const ComplexMatrix& a = ev.op("A");
                 const ComplexMatrix& b = ev.op("B");
                 const double c = std::pow(2.0, r - 1.0);
                 const double rhs = c * std::max(std::pow(norm(a), r), std::pow(norm(b), r)) +
                                    c * std::pow(norm(multiply(a, b)), 0.5 * r);
                 return Sides{std::pow(norm(a + b), r), rhs};
               }});

  t.push_back({"main1_gauge", {"A"}, {.pair = true, .gauge = true}, Constraint::none, true, false, false, false,
               "h(w(A)) <= (h(w(A_fg)) + ||h(|A|)||) / 2 for non-decreasing f, g",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 const ScalarMap& h = p.gauge->h;
                 const double rhs = 0.5 * (h(ev.transform_radius("A", *p.pair)) + norm(ev.of_abs("A", h)));
                 return with_theta(Sides{h(w.value), rhs}, w);
               }});

  // Operator inequality h(|A|) <= (h(g^2(|A|)) + h(f^2(|A|))) / 2, reported as
  // lhs = lambda_max(left - right) against rhs = 0. The left side goes
  // through A*A directly, the right through the polar factors.
  t.push_back({"main1_cic_route", {"A"}, {.pair = true, .gauge = true}, Constraint::none, false, false, false,
               false, "h(|A|) <= (h(g^2(|A|)) + h(f^2(|A|))) / 2 in the positive semidefinite order",
               [](Evaluator& ev, const Params& p, V) {
                 const ComplexMatrix& a = ev.op("A");
                 const ScalarMap& h = p.gauge->h;
                 const ComplexMatrix gram(symmetrized(a.dense().adjoint() * a.dense()));
                 const ComplexMatrix left = matrix_function(gram, [&h](double x) { return h(std::sqrt(x)); });
                 const ComplexMatrix right(
                     0.5 * (ev.of_abs("A", compose(h, square_of(p.pair->g))).dense() +
                            ev.of_abs("A", compose(h, square_of(p.pair->f))).dense()));
                 const double top = lambda_max(symmetrized((left - right).dense()));
                 return Sides{top, 0.0, norm(right)};
               }});

  t.push_back({"offdiag_main1_r", {"A", "B"}, {.r = true, .pair = true}, Constraint::none, true, false, false,
               false,
               "2 w^r([[0, A], [B, 0]]) <= max(||A||^r, ||B||^r) + (||f(|B|) g(|A*|)||^r + ||f(|A|) g(|B*|)||^r) / 2",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = ev.lhs_radius("[[0,A],[B,0]]", [&] { return offdiag_of(ev, "A", "B"); });
                 const double r = *p.r;
                 const auto [m1, m2] = mixed_products(ev, *p.pair);
                 const double big = std::max(std::pow(norm(ev.op("A")), r), std::pow(norm(ev.op("B")), r));
                 Sides s{2.0 * std::pow(w.value, r), big + 0.5 * (std::pow(m1, r) + std::pow(m2, r))};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"sum_main1", {"A", "B"}, {.pair = true}, Constraint::none, true, false, false, false,
               "||A + B|| <= max(||A||, ||B||) + (||f(|B|) g(|A|)|| + ||f(|A*|) g(|B*|)||) / 2 for non-decreasing f, g",
               [](Evaluator& ev, const Params& p, V) {
                 const ComplexMatrix& a = ev.op("A");
                 const ComplexMatrix& b = ev.op("B");
                 const double m1 = norm(multiply(ev.of_abs("B", p.pair->f), ev.of_abs("A", p.pair->g)));
                 const double m2 = norm(multiply(ev.of_abs("A*", p.pair->f), ev.of_abs("B*", p.pair->g)));
                 return Sides{norm(a + b), std::max(norm(a), norm(b)) + 0.5 * (m1 + m2)};
               }});

  t.push_back({"mixed_schwarz", {"A", "x", "y"}, {.pair = true}, Constraint::none, false, false, false, false,
               "|<Ax, y>|^2 <= <f^2(|A|) x, x> <g^2(|A*|) y, y>",
               [](Evaluator& ev, const Params& p, V) {
                 const Dense& a = ev.op("A").dense();
                 const Eigen::VectorXcd x = ev.op("x").dense().col(0);
                 const Eigen::VectorXcd y = ev.op("y").dense().col(0);
                 const double lhs = std::norm(y.dot(a * x));
                 const Dense f2 = ev.of_abs("A", square_of(p.pair->f)).dense();
                 const Dense g2 = ev.of_abs("A*", square_of(p.pair->g)).dense();
                 return Sides{lhs, x.dot(f2 * x).real() * y.dot(g2 * y).real()};
               }});

  t.push_back({"block2x2_fourpairs", {"A", "B", "C", "D"}, {.pair = true}, Constraint::none, false, false, false,
               true,
               "w([[A, B], [C, D]]) <= max(||f1^2(|A|) + g2^2(|B*|) + f3^2(|C|)||^(1/2), ||g4(|D*|)||) * "
               "max(||g1(|A*|)||, ||f2^2(|B|) + g3^2(|C*|) + f4^2(|D|)||^(1/2))",
               [](Evaluator& ev, const Params& p, V variant) {
                 return block_bound(ev, {*p.pair, *p.pair, *p.pair, *p.pair}, variant, false);
               }});

  t.push_back({"block2x2_powers", {"A", "B", "C", "D"}, {.t = true}, Constraint::none, false, false, true, true,
               "w([[A, B], [C, D]]) <= max(|| |A|^(2a) + |B*|^(2c) + |C|^(2m) ||^(1/2), || |D*|^w ||) * "
               "max(|| |A*|^b ||, || |B|^(2z) + |C*|^(2n) + |D|^(2k) ||^(1/2)) with a = z = m = k = t",
               [](Evaluator& ev, const Params& p, V variant) {
                 const FunctionPair pair = make_power_pair(*p.t);
                 // (alpha, beta), (zeta, gamma), (mu, nu), (kappa, omega), all (t, 1 - t)
                 return block_bound(ev, {pair, pair, pair, pair}, variant, true);
               }});

  t.push_back({"w_norm_equivalence", {"A"}, {.side = true}, Constraint::none, false, false, true, false,
               "||A|| / 2 <= w(A) <= ||A||",
               [](Evaluator& ev, const Params& p, V) {
                 const RadiusEstimate& w = w_of(ev, "A");
                 const double n = norm(ev.op("A"));
                 Sides s = *p.side == "lower" ? Sides{0.5 * n, w.value} : Sides{w.value, n};
                 return with_theta(std::move(s), w);
               }});

  t.push_back({"spectral_below_w", {"A"}, {}, Constraint::none, false, false, true, false, "r(A) <= w(A)",
               [](Evaluator& ev, const Params&, V) {
                 const double w = ev.rhs_radius("A", [&] { return ev.op("A"); });
                 return Sides{spectral_radius(ev.op("A")), w};
               }});

  // Residual form on range(|A|): lhs = ||(g(|A|) - U* g(|A*|) U) P_ran||.
  t.push_back({"conjugation_identity", {"A"}, {.pair = true}, Constraint::none, false, true, false, false,
               "g(|A|) = U* g(|A*|) U on the range of |A|",
               [](Evaluator& ev, const Params& p, V) {
                 const PolarFactors& pa = ev.polar("A");
                 const Dense ga = pa.apply(p.pair->g).dense();
                 const Dense gas = ev.of_abs("A*", p.pair->g).dense();
                 const Dense& u = pa.isometry.dense();
                 const Dense proj = pa.range_projection().dense();
                 const Dense residual = (ga - u.adjoint() * gas * u) * proj;
                 return Sides{largest_singular_value(residual), 0.0, largest_singular_value(ga * proj)};
               }});

  std::sort(t.begin(), t.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.id < b.id; });
  return t;
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> table = detail::build_catalog();
  return table;
}

inline const CatalogEntry& catalog_entry(std::string_view id) {
  for (const CatalogEntry& e : catalog())
    if (e.id == id) return e;
  throw InvalidInput("unknown inequality id '" + std::string(id) + "'");
}

/// One-shot check on explicit operands. Quantities are computed fresh, so the
/// result is identical to the same (id, params) inside check_all.
inline InequalityReport check(std::string_view id, const Operands& operands, const Params& params,
                              const Tolerances& tolerances = {}, Variant variant = Variant::corrected) {
  Evaluator ev(operands, tolerances);
  return ev.check(catalog_entry(id), params, variant);
}

struct ParamGrid {
  std::vector<double> t;
  std::vector<double> r;
  std::vector<FunctionPair> pairs;
  std::vector<GaugeFunction> gauges;
};

namespace detail {

/// Every parameter point an entry quantifies over, or the name of the first
/// needed dimension that the grid leaves empty.
inline std::pair<std::vector<Params>, std::string> expand(const CatalogEntry& e, const ParamGrid& grid) {
  std::vector<Params> points{Params{}};
  auto cross = [&points](auto&& values, auto&& assign) {
    std::vector<Params> next;
    for (const Params& base : points)
      for (const auto& v : values) {
        Params q = base;
        assign(q, v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  };
  std::vector<FunctionPair> pairs;
  for (const FunctionPair& p : grid.pairs)
    if (!e.monotone_pair || p.monotone) pairs.push_back(p);
  if (e.needs.t && grid.t.empty()) return {{}, "t"};
  if (e.needs.r && grid.r.empty()) return {{}, "r"};
  if (e.needs.pair && pairs.empty()) return {{}, e.monotone_pair ? "monotone pair" : "pair"};
  if (e.needs.gauge && grid.gauges.empty()) return {{}, "gauge"};
  if (e.needs.t) cross(grid.t, [](Params& q, double v) { q.t = v; });
  if (e.needs.r) cross(grid.r, [](Params& q, double v) { q.r = v; });
  if (e.needs.pair) cross(pairs, [](Params& q, const FunctionPair& v) { q.pair = v; });
  if (e.needs.gauge) cross(grid.gauges, [](Params& q, const GaugeFunction& v) { q.gauge = v; });
  if (e.needs.side)
    cross(std::vector<std::string>{"lower", "upper"}, [](Params& q, const std::string& v) { q.side = v; });
  return {std::move(points), {}};
}

}  // namespace detail

/// One report per (id, parameter point), sorted by id then parameter key.
/// A non-empty `ids` restricts the run to those entries. Hypotheses the bundle
/// cannot meet and empty parameter dimensions produce
/// skip markers; unexpected errors produce failed reports carrying the
/// message.
inline std::vector<InequalityReport> check_all(const Operands& bundle, const ParamGrid& grid,
                                               const Tolerances& tolerances = {},
                                               Variant variant = Variant::corrected,
                                               const std::vector<std::string>& ids = {}) {
  Evaluator ev(bundle, tolerances);
  std::vector<InequalityReport> out;
  for (const CatalogEntry& e : catalog()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), e.id) == ids.end()) continue;
    auto [points, missing] = detail::expand(e, grid);
    if (!missing.empty()) {
      InequalityReport marker;
      marker.id = e.id;
      marker.variant = variant;
      mark_skipped(marker, "no parameter values for " + missing);
      out.push_back(std::move(marker));
      continue;
    }
    std::sort(points.begin(), points.end(),
              [](const Params& a, const Params& b) { return a.canonical() < b.canonical(); });
    for (const Params& p : points) {
      try {
        out.push_back(ev.check(e, p, variant));
      } catch (const ConstraintViolation& ex) {
        InequalityReport marker;
        marker.id = e.id;
        marker.variant = variant;
        marker.params = p;
        mark_skipped(marker, ex.what());
        out.push_back(std::move(marker));
      } catch (const std::exception& ex) {
        InequalityReport failure;
        failure.id = e.id;
        failure.variant = variant;
        failure.params = p;
        failure.outcome = Outcome::failed;
        failure.note = std::string("error: ") + ex.what();
        out.push_back(std::move(failure));
      }
    }
  }
  return out;
}

}  // namespace aluthge
