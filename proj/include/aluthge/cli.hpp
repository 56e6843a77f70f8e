#pragma once

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aluthge/harness.hpp"

namespace aluthge::cli {

enum ExitCode : int { kOk = 0, kFailures = 1, kBadFlags = 2, kBadInput = 3 };

namespace detail {

inline void emit(const Json& j, const std::optional<std::string>& out_path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (out_path)
    write_text_file(*out_path, text);
  else
    out << text;
}

struct RadiusArgs {
  std::string input, method = "sweep";
  int grid = 720, samples = 100000;
  double refine_tol = 1e-12;
  std::uint64_t seed = 1;
  std::optional<std::string> out;
};

struct TransformArgs {
  std::string input, pair;
  std::optional<double> rank_tol;
  std::optional<std::string> out;
};

struct CheckArgs {
  std::string id, variant = "corrected";
  std::optional<std::string> a, b, c, d, x, y, s, t_mat, pair, gauge, side, out;
  std::optional<double> t, r;
  std::optional<int> n;
  int grid = 720;
};

struct VerifyArgs {
  std::optional<std::string> config, out, csv, variant;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  unsigned threads = default_threads();
};

struct ReportArgs {
  std::string input;
  int top = 5;
  std::optional<std::string> out;
};

inline int do_radius(const RadiusArgs& a, std::ostream& out) {
  const ComplexMatrix m = read_matrix_file(a.input);
  RadiusEstimate est;
  if (a.method == "sweep")
    est = numerical_radius_sweep(m, {a.grid, a.refine_tol});
  else if (a.method == "ellipse")
    est = numerical_radius_ellipse2x2(m);
  else
    est = numerical_radius_sampling(m, a.samples, a.seed);
  emit(to_json(est), a.out, out);
  return kOk;
}

inline int do_transform(const TransformArgs& a, std::ostream& out) {
  const ComplexMatrix m = read_matrix_file(a.input);
  const FunctionPair pair = parse_pair(a.pair);
  const TransformResult r = aluthge_general(polar_decompose(m, a.rank_tol), pair);
  emit(to_json(r.transformed), a.out, out);
  return kOk;
}

inline int do_check(const CheckArgs& a, std::ostream& out) {
  Operands ops;
  auto load = [&ops](const std::optional<std::string>& path, const char* role) {
    if (path) ops.insert_or_assign(role, read_matrix_file(*path));
  };
  load(a.a, "A");
  load(a.b, "B");
  load(a.c, "C");
  load(a.d, "D");
  load(a.x, "x");
  load(a.y, "y");
  // X, Y, S, T of the spectral-sum lemma: --a, --b, then --s/--t-mat or --c/--d.
  if (ops.count("A")) ops.insert_or_assign("X", ops.at("A"));
  if (ops.count("B")) ops.insert_or_assign("Y", ops.at("B"));
  if (ops.count("C")) ops.insert_or_assign("S", ops.at("C"));
  if (ops.count("D")) ops.insert_or_assign("T", ops.at("D"));
  load(a.s, "S");
  load(a.t_mat, "T");

  Tolerances tol;
  tol.sweep.grid = a.grid;
  InequalityReport report;
  if (a.id == "power_inequality") {
    if (!ops.count("A")) throw InvalidInput("power_inequality needs --a");
    report = check_power_inequality(ops.at("A"), a.n.value_or(2), tol.sweep, tol.relative);
    report.inputs_digest = sha256_hex(matrix_digest(ops.at("A")) + report.params.canonical());
  } else {
    Params p;
    p.t = a.t;
    p.r = a.r;
    if (a.pair) p.pair = parse_pair(*a.pair);
    if (a.gauge) p.gauge = parse_gauge(*a.gauge);
    p.side = a.side;
    report = check(a.id, ops, p, tol, parse_variant(a.variant));
  }
  emit(to_json(report), a.out, out);
  return report.outcome == Outcome::failed ? kFailures : kOk;
}

inline int do_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = a.config ? config_from_json(read_json_file(*a.config)) : ExperimentConfig{};
  if (a.seed) config.base_seed = *a.seed;
  if (a.trials) config.trials_per_cell = *a.trials;
  if (a.variant) config.variant = parse_variant(*a.variant);
  validate(config);
  const ExperimentSummary summary = run(config, a.threads);
  err << "verify: " << summary.failure_count << " failures (" << summary.blocking_failures << " blocking) in "
      << format_double(summary.wall_seconds) << " s\n";
  emit(to_json(summary), a.out, out);
  if (a.csv) write_text_file(*a.csv, summary_csv(summary));
  return summary.ok() ? kOk : kFailures;
}

inline int do_report(const ReportArgs& a, std::ostream& out) {
  const Json s = read_json_file(a.input);
  if (!s.contains("per_id")) throw InvalidInput("'" + a.input + "' is not a summary file");
  std::vector<std::pair<double, std::string>> order;
  for (const auto& [id, agg] : s["per_id"].items())
    if (agg["min_slack"].is_number()) order.emplace_back(agg["min_slack"].get<double>(), id);
  std::sort(order.begin(), order.end());
  Json tight = Json::array();
  for (std::size_t k = 0; k < order.size() && k < static_cast<std::size_t>(a.top); ++k) {
    const Json& agg = s["per_id"][order[k].second];
    Json row{{"id", order[k].second}, {"min_slack", agg["min_slack"]}, {"median_slack", agg["median_slack"]},
             {"argmin_digest", agg["argmin_digest"]}};
    if (agg.contains("argmin")) row["argmin"] = agg["argmin"];
    tight.push_back(std::move(row));
  }
  Json failing = Json::array();
  for (const auto& [id, agg] : s["per_id"].items())
    if (agg.value("fail", 0) > 0) failing.push_back(Json{{"id", id}, {"fail", agg["fail"]}});
  emit(Json{{"totals", s.value("totals", Json::object())},
            {"blocking_failures", s.value("blocking_failures", 0)},
            {"tightest", std::move(tight)},
            {"failing_ids", std::move(failing)}},
       a.out, out);
  return kOk;
}

}  // namespace detail

/// Parses argv and dispatches; JSON goes to `out` (or --out), diagnostics to
/// `err`.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical radius, generalized Aluthge transforms and matrix inequality checks", "aluthge"};
  app.require_subcommand(1);

  detail::RadiusArgs ra;
  auto* radius = app.add_subcommand("radius", "numerical radius of a matrix");
  radius->add_option("--input", ra.input, "matrix JSON file")->required();
  radius->add_option("--method", ra.method)->check(CLI::IsMember({"sweep", "ellipse", "sampling"}));
  radius->add_option("--grid", ra.grid)->check(CLI::Range(64, 100000000));
  radius->add_option("--refine-tol", ra.refine_tol)->check(CLI::PositiveNumber);
  radius->add_option("--samples", ra.samples)->check(CLI::PositiveNumber);
  radius->add_option("--seed", ra.seed);
  radius->add_option("--out", ra.out);

  detail::TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "generalized Aluthge transform f(|A|) U g(|A|)");
  transform->add_option("--input", ta.input)->required();
  transform->add_option("--pair", ta.pair, "power:T, rational or exp")->required();
  transform->add_option("--rank-tol", ta.rank_tol)->check(CLI::NonNegativeNumber);
  transform->add_option("--out", ta.out);

  detail::CheckArgs ca;
  auto* chk = app.add_subcommand("check", "evaluate one catalog inequality");
  chk->add_option("--id", ca.id)->required();
  chk->add_option("--variant", ca.variant)->check(CLI::IsMember({"corrected", "as_stated"}));
  chk->add_option("--a", ca.a);
  chk->add_option("--b", ca.b);
  chk->add_option("--c", ca.c);
  chk->add_option("--d", ca.d);
  chk->add_option("--x", ca.x);
  chk->add_option("--y", ca.y);
  chk->add_option("--s", ca.s);
  chk->add_option("--t-mat", ca.t_mat);
  chk->add_option("--t", ca.t);
  chk->add_option("--r", ca.r);
  chk->add_option("--n", ca.n, "exponent for power_inequality");
  chk->add_option("--pair", ca.pair);
  chk->add_option("--gauge", ca.gauge);
  chk->add_option("--side", ca.side)->check(CLI::IsMember({"lower", "upper"}));
  chk->add_option("--grid", ca.grid)->check(CLI::Range(64, 100000000));
  chk->add_option("--out", ca.out);

  detail::VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a randomized experiment");
  verify->add_option("--config", va.config, "experiment config JSON");
  verify->add_option("--seed", va.seed);
  verify->add_option("--trials", va.trials)->check(CLI::PositiveNumber);
  verify->add_option("--variant", va.variant)->check(CLI::IsMember({"corrected", "as_stated"}));
  verify->add_option("--threads", va.threads)->check(CLI::Range(1, 1024));
  verify->add_option("--out", va.out);
  verify->add_option("--csv", va.csv);

  detail::ReportArgs rp;
  auto* report = app.add_subcommand("report", "summarize a verify output");
  report->add_option("--input", rp.input)->required();
  report->add_option("--top-slack", rp.top)->check(CLI::NonNegativeNumber);
  report->add_option("--out", rp.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadFlags;
  }

  try {
    if (*radius) return detail::do_radius(ra, out);
    if (*transform) return detail::do_transform(ta, out);
    if (*chk) return detail::do_check(ca, out);
    if (*verify) return detail::do_verify(va, out, err);
    return detail::do_report(rp, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
}

}  // namespace aluthge::cli
