#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "aluthge/catalog.hpp"
#include "aluthge/ensembles.hpp"
#include "aluthge/json_io.hpp"

namespace aluthge {

struct ExperimentConfig {
  std::vector<std::string> ensembles{"ginibre", "hermitian_psd", "normal", "nilpotent_shift", "rank_deficient"};
  std::vector<int> dims{2, 3, 5, 8};
  int trials_per_cell = 500;
  std::vector<double> t_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> r_grid{1.0, 2.0, 3.0};
  std::vector<std::string> pairs{"power:t", "rational", "exp"};  // power:t expands over t_grid
  std::vector<std::string> gauges{"power:1", "power:2", "power:3", "expm1"};
  std::uint64_t base_seed = 42;
  Variant variant = Variant::corrected;
  Tolerances tolerances;
  std::vector<std::string> ids;  // empty = whole catalog
  std::size_t failure_limit = 1000;  // failures stored inline; counts stay exact
};

struct TrialLocator {
  std::string ensemble;
  int dim = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::string params;
};

struct IdAggregate {
  std::size_t count = 0, pass = 0, fail = 0, skip = 0;
  double min_slack = std::numeric_limits<double>::quiet_NaN();
  double q25_slack = min_slack, median_slack = min_slack, q75_slack = min_slack, max_slack = min_slack;
  std::string argmin_digest;
  TrialLocator argmin;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::map<std::string, IdAggregate> per_id;
  std::vector<InequalityReport> failures;  // capped at config.failure_limit
  std::size_t failure_count = 0;
  std::size_t blocking_failures = 0;
  double wall_seconds = 0.0;  // logged, not serialized

  bool ok() const noexcept { return blocking_failures == 0; }
};

// ---------- config ----------

inline ParamGrid param_grid(const ExperimentConfig& c) {
  ParamGrid g;
  g.t = c.t_grid;
  g.r = c.r_grid;
  std::set<std::string> seen;
  auto add_pair = [&](FunctionPair p) {
    if (seen.insert(p.label).second) g.pairs.push_back(std::move(p));
  };
  for (const std::string& spec : c.pairs) {
    if (spec == "power:t") {
      for (double t : c.t_grid) add_pair(make_power_pair(t));
    } else {
      add_pair(parse_pair(spec));
    }
  }
  for (const std::string& spec : c.gauges) g.gauges.push_back(parse_gauge(spec));
  return g;
}

inline void validate(const ExperimentConfig& c) {
  if (c.ensembles.empty() || c.dims.empty()) throw InvalidInput("config: ensembles and dims must be non-empty");
  if (c.t_grid.empty() || c.r_grid.empty() || c.pairs.empty() || c.gauges.empty())
    throw InvalidInput("config: t_grid, r_grid, pairs and gauges must be non-empty");
  if (c.trials_per_cell < 1) throw InvalidInput("config: trials_per_cell must be >= 1");
  for (const std::string& e : c.ensembles) parse_ensemble(e);
  for (int d : c.dims) detail::check_dim(d);
  for (double t : c.t_grid)
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("config: t values must lie in [0, 1]");
  for (double r : c.r_grid)
    if (!(r >= 1.0)) throw InvalidInput("config: r values must be >= 1");
  for (const std::string& id : c.ids) catalog_entry(id);
  if (c.tolerances.sweep.grid < 64) throw InvalidInput("config: sweep grid must be >= 64");
  param_grid(c);  // parses every pair and gauge spec
}

inline Json to_json(const Tolerances& t) {
  Json per = Json::object();
  for (const auto& [id, v] : t.per_id) per[id] = v;
  Json j{{"relative", t.relative},
         {"positivity", t.positivity},
         {"normality", t.normality},
         {"per_id", std::move(per)},
         {"grid", t.sweep.grid},
         {"refine_tol", t.sweep.refine_tol}};
  if (t.rank_tolerance) j["rank_tolerance"] = *t.rank_tolerance;
  return j;
}

inline Json to_json(const ExperimentConfig& c) {
  return Json{{"ensembles", c.ensembles},     {"dims", c.dims},         {"trials_per_cell", c.trials_per_cell},
              {"t_grid", c.t_grid},           {"r_grid", c.r_grid},     {"pairs", c.pairs},
              {"gauges", c.gauges},           {"base_seed", c.base_seed}, {"variant", to_string(c.variant)},
              {"ids", c.ids},                 {"failure_limit", c.failure_limit},
              {"tolerances", to_json(c.tolerances)}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline ExperimentConfig config_from_json(const Json& j) {
  static const std::set<std::string> known{"ensembles", "dims",     "trials_per_cell", "t_grid",
                                           "r_grid",    "pairs",    "gauges",          "base_seed",
                                           "variant",   "ids",      "failure_limit",   "tolerances"};
  static const std::set<std::string> known_tol{"relative", "positivity", "normality", "per_id",
                                               "grid",     "refine_tol", "rank_tolerance"};
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (const auto& [k, v] : j.items())
      if (!known.count(k)) throw InvalidInput("config: unknown key '" + k + "'");
    if (j.contains("ensembles")) c.ensembles = j["ensembles"].get<std::vector<std::string>>();
    if (j.contains("dims")) c.dims = j["dims"].get<std::vector<int>>();
    if (j.contains("trials_per_cell")) c.trials_per_cell = j["trials_per_cell"].get<int>();
    if (j.contains("t_grid")) c.t_grid = j["t_grid"].get<std::vector<double>>();
    if (j.contains("r_grid")) c.r_grid = j["r_grid"].get<std::vector<double>>();
    if (j.contains("pairs")) c.pairs = j["pairs"].get<std::vector<std::string>>();
    if (j.contains("gauges")) c.gauges = j["gauges"].get<std::vector<std::string>>();
    if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("variant")) c.variant = parse_variant(j["variant"].get<std::string>());
    if (j.contains("ids")) c.ids = j["ids"].get<std::vector<std::string>>();
    if (j.contains("failure_limit")) c.failure_limit = j["failure_limit"].get<std::size_t>();
    if (j.contains("tolerances")) {
      const Json& t = j["tolerances"];
      for (const auto& [k, v] : t.items())
        if (!known_tol.count(k)) throw InvalidInput("config: unknown tolerance '" + k + "'");
      if (t.contains("relative")) c.tolerances.relative = t["relative"].get<double>();
      if (t.contains("positivity")) c.tolerances.positivity = t["positivity"].get<double>();
      if (t.contains("normality")) c.tolerances.normality = t["normality"].get<double>();
      if (t.contains("per_id")) c.tolerances.per_id = t["per_id"].get<std::map<std::string, double>>();
      if (t.contains("grid")) c.tolerances.sweep.grid = t["grid"].get<int>();
      if (t.contains("refine_tol")) c.tolerances.sweep.refine_tol = t["refine_tol"].get<double>();
      if (t.contains("rank_tolerance")) c.tolerances.rank_tolerance = t["rank_tolerance"].get<double>();
    }
  } catch (const Json::exception& ex) {
    throw InvalidInput(std::string("config: ") + ex.what());
  }
  validate(c);
  return c;
}

// ---------- execution ----------

/// Stable per-trial seed: base + hash(cell, trial), wrapping mod 2^64.
inline std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, int trial) {
  return base + mix_seed(static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(trial));
}

namespace detail {

struct Trial {
  std::size_t cell;
  int trial;
  MatrixEnsemble ensemble;
};

inline std::vector<Trial> enumerate_trials(const ExperimentConfig& c) {
  std::vector<Trial> out;
  std::size_t cell = 0;
  for (const std::string& name : c.ensembles)
    for (int dim : c.dims) {
      for (int k = 0; k < c.trials_per_cell; ++k) {
        MatrixEnsemble e = parse_ensemble(name);
        e.dim = dim;
        e.seed = trial_seed(c.base_seed, cell, k);
        out.push_back({cell, k, e});
      }
      ++cell;
    }
  return out;
}

inline std::vector<InequalityReport> run_trial(const ExperimentConfig& c, const ParamGrid& grid, const Trial& t) {
  return check_all(generate_bundle(t.ensemble), grid, c.tolerances, c.variant, c.ids);
}

/// Runs fn(i) for i in [0, n) on `threads` workers pulling from a shared
/// counter. Results must be written to per-index slots.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
  };
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

/// Linear interpolation between order statistics; v sorted.
inline double quantile(const std::vector<double>& v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline bool blocking(const InequalityReport& r) {
  if (r.variant == Variant::corrected) return true;
  // as_stated differs from the corrected statement only where a distinct
  // variant exists; those failures are forensic.
  for (const CatalogEntry& e : catalog())
    if (e.id == r.id) return !e.has_corrected;
  return true;
}

/// Compact per-trial record so a full run does not keep every report.
struct TrialRecord {
  std::vector<std::pair<std::string, InequalityReport>> kept;  // failures and per-id minima
  std::vector<std::tuple<std::uint16_t, Outcome, double>> outcomes;  // catalog index
};

}  // namespace detail

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Executes check_all on every trial. The result depends only on the config:
/// trials are seeded independently and folded in canonical order.
inline ExperimentSummary run(const ExperimentConfig& config, unsigned threads = default_threads()) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  const ParamGrid grid = param_grid(config);
  const auto trials = detail::enumerate_trials(config);

  std::map<std::string, std::uint16_t> index;
  for (const CatalogEntry& e : catalog()) index.emplace(e.id, static_cast<std::uint16_t>(index.size()));

  std::vector<detail::TrialRecord> records(trials.size());
  detail::parallel_for(trials.size(), threads, [&](std::size_t i) {
    std::vector<InequalityReport> reports = detail::run_trial(config, grid, trials[i]);
    detail::TrialRecord& rec = records[i];
    std::map<std::string, std::size_t> argmin;
    for (std::size_t k = 0; k < reports.size(); ++k) {
      const InequalityReport& r = reports[k];
      rec.outcomes.emplace_back(index.at(r.id), r.outcome, r.slack);
      if (r.outcome != Outcome::skipped && std::isfinite(r.slack)) {
        auto it = argmin.find(r.id);
        if (it == argmin.end() || r.slack < reports[it->second].slack) argmin[r.id] = k;
      }
    }
    for (std::size_t k = 0; k < reports.size(); ++k)
      if (reports[k].outcome == Outcome::failed) rec.kept.emplace_back("failure", reports[k]);
    for (const auto& [id, k] : argmin) {
      InequalityReport r = reports[k];
      r.inputs.clear();
      rec.kept.emplace_back("argmin", std::move(r));
    }
  });

  ExperimentSummary summary;
  summary.config = config;
  for (const CatalogEntry& e : catalog())
    if (config.ids.empty() || std::find(config.ids.begin(), config.ids.end(), e.id) != config.ids.end())
      summary.per_id[e.id];
  std::map<std::string, std::vector<double>> slacks;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const detail::Trial& t = trials[i];
    for (const auto& [k, outcome, slack] : records[i].outcomes) {
      const std::string& id = catalog()[k].id;
      IdAggregate& agg = summary.per_id[id];
      ++agg.count;
      if (outcome == Outcome::passed) ++agg.pass;
      if (outcome == Outcome::failed) ++agg.fail;
      if (outcome == Outcome::skipped) ++agg.skip;
      if (outcome != Outcome::skipped && std::isfinite(slack)) slacks[id].push_back(slack);
    }
    for (auto& [kind, report] : records[i].kept) {
      if (kind == "failure") {
        ++summary.failure_count;
        if (detail::blocking(report)) ++summary.blocking_failures;
        if (summary.failures.size() < config.failure_limit) summary.failures.push_back(std::move(report));
        continue;
      }
      IdAggregate& agg = summary.per_id[report.id];
      if (agg.argmin_digest.empty() || report.slack < agg.min_slack) {
        agg.min_slack = report.slack;
        agg.argmin_digest = report.inputs_digest;
        agg.argmin = {t.ensemble.name(), t.ensemble.dim, t.trial, t.ensemble.seed, report.params.canonical()};
      }
    }
    records[i] = {};
  }
  for (auto& [id, v] : slacks) {
    std::sort(v.begin(), v.end());
    IdAggregate& agg = summary.per_id[id];
    agg.q25_slack = detail::quantile(v, 0.25);
    agg.median_slack = detail::quantile(v, 0.5);
    agg.q75_slack = detail::quantile(v, 0.75);
    agg.max_slack = v.back();
  }
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return summary;
}

/// The minimum-slack report of `id` over the configured run, regenerated with
/// its full inputs for replay.
inline InequalityReport min_slack_search(std::string_view id, ExperimentConfig config,
                                         unsigned threads = default_threads()) {
  const CatalogEntry& entry = catalog_entry(id);
  config.ids = {entry.id};
  const ExperimentSummary s = run(config, threads);
  const IdAggregate& agg = s.per_id.at(entry.id);
  if (agg.argmin_digest.empty()) throw InvalidInput(entry.id + ": no evaluated reports in this configuration");

  const ParamGrid grid = param_grid(config);
  MatrixEnsemble e = parse_ensemble(agg.argmin.ensemble);
  e.dim = agg.argmin.dim;
  e.seed = agg.argmin.seed;
  for (InequalityReport& r : check_all(generate_bundle(e), grid, config.tolerances, config.variant, config.ids)) {
    if (r.id != entry.id || r.params.canonical() != agg.argmin.params) continue;
    r.inputs.clear();
    const Operands bundle = generate_bundle(e);
    for (const std::string& role : entry.roles) r.inputs.emplace(role, bundle.at(role));
    r.witness.emplace_back("trial", agg.argmin.trial);
    return r;
  }
  throw std::logic_error("min_slack_search: argmin trial did not reproduce");
}

// ---------- output ----------

inline Json to_json(const ExperimentSummary& s) {
  Json per = Json::object();
  std::size_t count = 0, pass = 0, fail = 0, skip = 0;
  for (const auto& [id, a] : s.per_id) {
    count += a.count;
    pass += a.pass;
    fail += a.fail;
    skip += a.skip;
    Json j{{"count", a.count},          {"pass", a.pass},           {"fail", a.fail},
           {"skip", a.skip},            {"min_slack", a.min_slack}, {"q25_slack", a.q25_slack},
           {"median_slack", a.median_slack}, {"q75_slack", a.q75_slack}, {"max_slack", a.max_slack},
           {"argmin_digest", a.argmin_digest}};
    if (!a.argmin_digest.empty())
      j["argmin"] = Json{{"ensemble", a.argmin.ensemble},
                         {"dim", a.argmin.dim},
                         {"trial", a.argmin.trial},
                         {"seed", a.argmin.seed},
                         {"params", a.argmin.params}};
    per[id] = std::move(j);
  }
  Json failures = Json::array();
  for (const InequalityReport& r : s.failures) failures.push_back(to_json(r));
  return Json{{"config", to_json(s.config)},
              {"totals", {{"count", count}, {"pass", pass}, {"fail", fail}, {"skip", skip}}},
              {"failure_count", s.failure_count},
              {"blocking_failures", s.blocking_failures},
              {"per_id", std::move(per)},
              {"failures", std::move(failures)}};
}

inline std::string summary_csv(const ExperimentSummary& s) {
  std::ostringstream out;
  out << "id,count,pass,fail,skip,min_slack,q25_slack,median_slack,q75_slack,max_slack\n";
  for (const auto& [id, a] : s.per_id) {
    out << id << ',' << a.count << ',' << a.pass << ',' << a.fail << ',' << a.skip;
    for (double v : {a.min_slack, a.q25_slack, a.median_slack, a.q75_slack, a.max_slack})
      out << ',' << (std::isfinite(v) ? format_double(v) : std::string());
    out << '\n';
  }
  return out.str();
}

}  // namespace aluthge
