#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "aluthge/harness.hpp"
#include "support.hpp"

using namespace aluthge;
using testing_support::opnorm;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.ensembles = {"ginibre", "nilpotent_shift"};
  c.dims = {2, 3};
  c.trials_per_cell = 2;
  c.t_grid = {0.0, 0.5, 1.0};
  c.r_grid = {1.0, 2.0};
  c.pairs = {"power:t", "rational"};
  c.gauges = {"power:1", "expm1"};
  return c;
}

MatrixEnsemble ens(std::string_view name, int dim, std::uint64_t seed) {
  MatrixEnsemble e = parse_ensemble(name);
  e.dim = dim;
  e.seed = seed;
  return e;
}

}  // namespace

TEST(Ensembles, Determinism) {
  for (const char* name : {"ginibre", "haar_unitary", "hermitian_psd", "normal", "nilpotent_shift",
                           "rank_deficient", "scaled", "scaled:normal"}) {
    EXPECT_EQ(generate(ens(name, 3, 7)), generate(ens(name, 3, 7))) << name;
    const Operands a = generate_bundle(ens(name, 4, 11)), b = generate_bundle(ens(name, 4, 11));
    EXPECT_EQ(a.size(), 10u);  // A..D, x, y and the aliases X, Y, S, T
    for (const auto& [role, m] : a) EXPECT_EQ(m, b.at(role)) << name << role;
  }
  EXPECT_FALSE(generate(ens("ginibre", 3, 1)) == generate(ens("ginibre", 3, 2)));
}

TEST(Ensembles, DefiningProperties) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 15);
    const Dense u = generate(ens("haar_unitary", n, seed)).dense();
    EXPECT_LE(opnorm(u.adjoint() * u - Dense::Identity(n, n)), 1e-10);

    const Dense p = generate(ens("hermitian_psd", n, seed)).dense();
    EXPECT_LE((p - p.adjoint()).norm(), 1e-10 * (1 + p.norm()));
    Eigen::SelfAdjointEigenSolver<Dense> es(p, Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues()(0), -1e-10 * (1 + opnorm(p)));

    const Dense m = generate(ens("normal", n, seed)).dense();
    EXPECT_LE(opnorm(m * m.adjoint() - m.adjoint() * m), 1e-10 * (1 + opnorm(m) * opnorm(m)));

    const Dense s = generate(ens("nilpotent_shift", n, seed)).dense();
    Dense expected = Dense::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) expected(i, i + 1) = 1.0;
    EXPECT_EQ(s, expected);

    const Dense r = generate(ens("rank_deficient", n, seed)).dense();
    Eigen::JacobiSVD<Dense> svd(r);
    EXPECT_LE(svd.singularValues()(n - 1), 1e-10 * svd.singularValues()(0));

    const double c = opnorm(generate(ens("scaled", n, seed)).dense()) / opnorm(generate(ens("ginibre", n, seed)).dense());
    EXPECT_GE(c, 1e-3 * (1 - 1e-12));
    EXPECT_LE(c, 1e3 * (1 + 1e-12));
  }
}

TEST(Ensembles, NilpotentShiftRadius) {
  EXPECT_NEAR(numerical_radius(generate(ens("nilpotent_shift", 4, 3))), std::cos(std::numbers::pi / 5), 1e-12);
}

TEST(Ensembles, Errors) {
  EXPECT_THROW(generate(ens("ginibre", 1, 1)), InvalidInput);
  EXPECT_THROW(generate(ens("ginibre", 17, 1)), InvalidInput);
  EXPECT_THROW(parse_ensemble("wishart"), InvalidInput);
  EXPECT_THROW(parse_ensemble("scaled:scaled"), InvalidInput);
  EXPECT_EQ(parse_ensemble("scaled:normal").name(), "scaled:normal");
}

TEST(Ensembles, ScaledSharesBaseUpToOneScalar) {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const Operands base = generate_bundle(ens("hermitian_psd", 3, seed));
    const Operands scaled = generate_bundle(ens("scaled:hermitian_psd", 3, seed));
    const Complex c = scaled.at("A")(0, 0) / base.at("A")(0, 0);
    for (const char* role : {"A", "B", "C", "D"})
      EXPECT_LE((scaled.at(role).dense() - c * base.at(role).dense()).norm(), 1e-12 * scaled.at(role).dense().norm());
    EXPECT_EQ(scaled.at("x"), base.at("x"));
  }
}

TEST(Config, DefaultsAndJsonRoundTrip) {
  const ExperimentConfig d;
  EXPECT_EQ(d.ensembles.size(), 5u);
  EXPECT_EQ(d.dims, (std::vector<int>{2, 3, 5, 8}));
  EXPECT_EQ(d.trials_per_cell, 500);
  EXPECT_EQ(d.tolerances.relative, 1e-8);
  const ExperimentConfig back = config_from_json(to_json(d));
  EXPECT_EQ(to_json(back).dump(), to_json(d).dump());
}

TEST(Config, Rejections) {
  EXPECT_THROW(config_from_json(Json{{"trials", 3}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"tolerances", {{"rel", 1e-8}}}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"dims", Json::array()}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"dims", {1}}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"t_grid", {1.5}}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"r_grid", {0.5}}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"pairs", {"sigmoid"}}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"ids", {"nope"}}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json{{"trials_per_cell", "many"}}), InvalidInput);
  EXPECT_THROW(config_from_json(Json::array()), InvalidInput);
}

TEST(Config, ParamGridExpandsPowerT) {
  ExperimentConfig c = small_config();
  c.pairs = {"power:t", "power:0.5", "exp"};
  const ParamGrid g = param_grid(c);
  ASSERT_EQ(g.pairs.size(), 4u);  // power:0, power:0.5, power:1, exp
  EXPECT_EQ(g.pairs[0].label, "power:0");
  EXPECT_EQ(g.pairs[3].label, "exp");
  EXPECT_EQ(g.gauges.size(), 2u);
}

TEST(Seeds, StableHash) {
  EXPECT_EQ(trial_seed(42, 3, 7), trial_seed(42, 3, 7));
  EXPECT_NE(trial_seed(42, 3, 7), trial_seed(42, 7, 3));
  EXPECT_EQ(trial_seed(43, 3, 7) - trial_seed(42, 3, 7), 1u);
}

TEST(Run, AccountingAndZeroFailures) {
  const ExperimentSummary s = run(small_config(), 2);
  EXPECT_EQ(s.failure_count, 0u);
  EXPECT_TRUE(s.failures.empty());
  EXPECT_TRUE(s.ok());
  EXPECT_EQ(s.per_id.size(), catalog().size());

  // expected report count per trial, computed from the catalog schema
  const ParamGrid g = param_grid(small_config());
  std::size_t per_trial = 0;
  for (const CatalogEntry& e : catalog()) {
    std::size_t n = 1;
    if (e.needs.t) n *= g.t.size();
    if (e.needs.r) n *= g.r.size();
    if (e.needs.pair) {
      std::size_t pairs = 0;
      for (const auto& p : g.pairs) pairs += !e.monotone_pair || p.monotone;
      n *= pairs;
    }
    if (e.needs.gauge) n *= g.gauges.size();
    if (e.needs.side) n *= 2;
    per_trial += n;
    const IdAggregate& a = s.per_id.at(e.id);
    EXPECT_EQ(a.count, n * 8) << e.id;  // 2 ensembles x 2 dims x 2 trials
    EXPECT_EQ(a.count, a.pass + a.fail + a.skip) << e.id;
  }
  const Json j = to_json(s);
  EXPECT_EQ(j["totals"]["count"].get<std::size_t>(), per_trial * 8);
  EXPECT_FALSE(j.contains("wall_seconds"));
}

TEST(Run, DeterministicAcrossThreadsAndRepeats) {
  const ExperimentConfig c = small_config();
  const std::string one = to_json(run(c, 1)).dump(2);
  EXPECT_EQ(one, to_json(run(c, 1)).dump(2));
  EXPECT_EQ(one, to_json(run(c, 3)).dump(2));
  EXPECT_EQ(summary_csv(run(c, 1)), summary_csv(run(c, 4)));
}

TEST(Run, IdFilterAndSeedSensitivity) {
  ExperimentConfig c = small_config();
  c.ids = {"half_norm_power", "spectral_below_w"};
  const ExperimentSummary s = run(c, 1);
  EXPECT_EQ(s.per_id.size(), 2u);
  c.base_seed = 7;
  EXPECT_NE(to_json(run(c, 1))["per_id"]["half_norm_power"]["median_slack"],
            to_json(s)["per_id"]["half_norm_power"]["median_slack"]);
}

TEST(Run, AsStatedForensicRunCompletes) {
  ExperimentConfig c = small_config();
  c.ensembles = {"hermitian_psd", "scaled:hermitian_psd"};
  c.variant = Variant::as_stated;
  c.ids = {"positive_product_r", "block2x2_powers"};
  c.trials_per_cell = 4;
  const ExperimentSummary s = run(c, 1);
  EXPECT_EQ(s.blocking_failures, 0u);  // these ids carry a corrected form
  EXPECT_TRUE(s.ok());
  for (const InequalityReport& r : s.failures) {
    EXPECT_EQ(r.variant, Variant::as_stated);
    EXPECT_FALSE(r.inputs.empty());
  }
}

TEST(Run, FailureLimitCapsStoredReportsOnly) {
  ExperimentConfig c = small_config();
  c.ensembles = {"scaled:hermitian_psd"};
  c.dims = {2};
  c.trials_per_cell = 20;
  c.variant = Variant::as_stated;
  c.ids = {"block2x2_powers"};
  c.failure_limit = 1;
  const ExperimentSummary s = run(c, 1);
  ASSERT_GT(s.failure_count, 1u);
  EXPECT_EQ(s.failures.size(), 1u);
}

TEST(Replay, FailureInputsReproduceSidesBitExactly) {
  ExperimentConfig c = small_config();
  c.ensembles = {"scaled:hermitian_psd", "scaled:ginibre"};
  c.trials_per_cell = 10;
  c.variant = Variant::as_stated;
  c.ids = {"block2x2_powers"};
  const ExperimentSummary s = run(c, 1);
  ASSERT_FALSE(s.failures.empty());
  for (const InequalityReport& f : s.failures) {
    // through JSON, as a replay bundle would travel
    const Json j = to_json(f);
    const Operands ops = operands_from_json(j["inputs"]);
    const Params p = params_from_json(j["params"]);
    const InequalityReport again = check(f.id, ops, p, c.tolerances, Variant::as_stated);
    EXPECT_EQ(again.lhs, f.lhs);
    EXPECT_EQ(again.rhs, f.rhs);
    EXPECT_EQ(again.inputs_digest, f.inputs_digest);
  }
}

TEST(ScaleRobustness, HomogeneousOutcomesMatchBase) {
  for (const char* base : {"ginibre", "hermitian_psd", "normal"}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const Operands a = generate_bundle(ens(base, 3, seed));
      const Operands b = generate_bundle(ens(std::string("scaled:") + base, 3, seed));
      ParamGrid g;
      g.t = {0.0, 0.5, 1.0};
      g.r = {1.0, 2.0};
      for (double t : g.t) g.pairs.push_back(make_power_pair(t));
      const auto ra = check_all(a, g), rb = check_all(b, g);
      ASSERT_EQ(ra.size(), rb.size());
      for (std::size_t k = 0; k < ra.size(); ++k) {
        if (!catalog_entry(ra[k].id).homogeneous) continue;
        // a complex scalar can break positivity, which turns a report into a skip
        EXPECT_EQ(ra[k].outcome == Outcome::failed, rb[k].outcome == Outcome::failed)
            << base << " " << ra[k].id << " " << ra[k].params.canonical();
        if (!ra[k].skipped() && !rb[k].skipped()) { EXPECT_EQ(ra[k].outcome, rb[k].outcome); }
      }
    }
  }
}

TEST(MinSlack, HalfNormPowerReachesEqualityOnShift) {
  ExperimentConfig c = small_config();
  c.ensembles = {"ginibre", "nilpotent_shift"};
  c.dims = {2};
  c.trials_per_cell = 3;
  const InequalityReport r = min_slack_search("half_norm_power", c, 1);
  EXPECT_LE(r.slack, 1e-10);
  EXPECT_EQ(r.inputs.size(), 1u);
  const InequalityReport again = check("half_norm_power", r.inputs, r.params);
  EXPECT_EQ(again.slack, r.slack);
  EXPECT_EQ(again.inputs_digest, r.inputs_digest);
}

TEST(MinSlack, UnitaryAndHermitianEqualityCases) {
  ExperimentConfig c = small_config();
  c.ensembles = {"haar_unitary"};
  c.dims = {3};
  c.trials_per_cell = 3;
  const InequalityReport up = min_slack_search("w_norm_equivalence", c, 1);
  EXPECT_LE(std::abs(up.slack), 1e-10);
  EXPECT_EQ(up.params.side, std::optional<std::string>("upper"));

  c.ensembles = {"hermitian_psd"};
  const InequalityReport sb = min_slack_search("spectral_below_w", c, 1);
  EXPECT_LE(std::abs(sb.slack), 1e-10);
  EXPECT_THROW(min_slack_search("nope", c, 1), InvalidInput);
}

TEST(Quantile, Type7) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  EXPECT_EQ(detail::quantile(v, 0.5), 2.5);
  EXPECT_EQ(detail::quantile(v, 0.25), 1.75);
  EXPECT_EQ(detail::quantile(v, 1.0), 4.0);
}
