#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "plstat/errors.hpp"
#include "plstat/montecarlo.hpp"

using namespace plstat;
using Catch::Approx;

namespace {

ExperimentConfig wigner_config(int n, const std::string& f, Comparison c, KRule rule, int reps) {
  ExperimentConfig cfg;
  cfg.ensemble = EnsembleKind::Wigner;
  cfg.wigner.n = n;
  cfg.f = f;
  cfg.comparison = c;
  cfg.k_rule = rule;
  cfg.replications = reps;
  cfg.master_seed = 20240611;
  return cfg;
}

}  // namespace

TEST_CASE("k rules", "[montecarlo]") {
  CHECK(KRule::fixed(3).resolve(100) == 3);
  CHECK(KRule::growing_sqrt().resolve(400) == 80);
  CHECK(KRule::growing_sqrt().resolve(401) == 81);
  CHECK(KRule::proportional(0.25).resolve(400) == 100);
  CHECK(KRule::complement_fixed(2).resolve(300) == 298);
}

TEST_CASE("validation lists every violation", "[montecarlo]") {
  ExperimentConfig cfg;
  cfg.wigner.n = 0;
  cfg.replications = 1;
  cfg.f = "nope";
  cfg.comparison = Comparison::FixedK;
  cfg.k_rule = KRule::proportional(0.5);
  const auto v = cfg.validate();
  CHECK(v.size() >= 4);
  try {
    cfg.require_valid();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations() == v);
  }
  auto ok = wigner_config(10, "x", Comparison::FixedK, KRule::fixed(10), 5);
  CHECK_THROWS_AS(run_partial_fixed_k(ok, 1), ConfigError);
  ok.k_rule = KRule::fixed(9);
  CHECK(ok.validate().empty());
  ok.wigner.offdiag = EntryDistribution::gaussian(2.0);
  CHECK_FALSE(ok.validate().empty());
}

TEST_CASE("full linear statistic: centring, variance and determinism", "[montecarlo]") {
  auto cfg = wigner_config(100, "x", Comparison::FullLinear, KRule::fixed(0), 1000);
  const auto a = run_full_linear(cfg, 1);
  CHECK(std::abs(a.mean) <= 1e-12);
  CHECK(a.variance == Approx(1.0).epsilon(0.15));
  const auto b = run_full_linear(cfg, 3);
  CHECK(a.samples == b.samples);

  cfg.f = "x2";
  cfg.replications = 1000;
  CHECK(run_full_linear(cfg, 2).variance == Approx(4.0).epsilon(0.15));

  cfg.f = "constant";
  const auto c = run_full_linear(cfg, 2);
  for (double v : c.samples) CHECK(v == 0.0);
}

TEST_CASE("limit sampler variance is v^2 + k d^2", "[montecarlo]") {
  const LimitLaw sc = LimitLaw::semicircle();
  const auto& f = find_test_function("x2");
  const double v2 = 4.0, d2 = var_f(sc, f), mean_f = expect_f(sc, f);
  for (int k : {0, 1, 3}) {
    Engine engine = make_engine(42 + k);
    std::vector<double> draws(40000);
    for (auto& d : draws) d = sample_fixed_k_limit(sc, f, v2, mean_f, k, engine);
    const auto emp = EmpiricalDistribution::from_samples(draws);
    INFO("k=" << k);
    CHECK(std::abs(emp.variance - (v2 + k * d2)) <= 4 * emp.variance_standard_error());
  }
}

TEST_CASE("fixed-k comparison", "[montecarlo]") {
  auto cfg = wigner_config(60, "x2", Comparison::FixedK, KRule::fixed(0), 600);
  cfg.limit_replications = 600;
  const auto [zero_matrix, zero_limit] = run_partial_fixed_k(cfg, 2);
  const double v2 = limit_variance(cfg).total;
  CHECK(std::abs(zero_limit.variance - v2) <= 4 * zero_limit.variance_standard_error());
  CHECK(ks_two_sample(zero_matrix, zero_limit) <= 0.1);

  cfg.k_rule = KRule::fixed(2);
  const auto one = run_partial_fixed_k(cfg, 1);
  const auto three = run_partial_fixed_k(cfg, 3);
  CHECK(one.first.samples == three.first.samples);
  CHECK(one.second.samples == three.second.samples);
  CHECK(std::abs(one.first.mean) <= 1e-12);

  cfg.partial_mode = PartialMode::SamplingComplement;
  const auto sampled = run_partial_fixed_k(cfg, 2);
  CHECK(ks_two_sample(sampled.first, one.first) <= 0.1);
}

TEST_CASE("growing-k comparison", "[montecarlo]") {
  auto cfg = wigner_config(100, "x2", Comparison::GrowingK, KRule::fixed(25), 800);
  const auto a = run_partial_growing_k(cfg, 2);
  CHECK(a.reference_variance == Approx(1.0).margin(1e-10));
  CHECK(a.scaled.variance == Approx(1.0).epsilon(0.15));
  cfg.k_rule = KRule::fixed(75);
  const auto b = run_partial_growing_k(cfg, 2);
  CHECK(b.reference_variance == a.reference_variance);
  CHECK(alpha(100, 25) == alpha(100, 75));
  CHECK(b.scaled.variance == Approx(1.0).epsilon(0.15));

  cfg.ensemble = EnsembleKind::SampleCov;
  cfg.sample_cov.n = 100;
  cfg.f = "x";
  const auto c = run_partial_growing_k(cfg, 2);
  CHECK(c.reference_variance == Approx(1.0).margin(1e-10));
  CHECK(c.scaled.variance == Approx(1.0).epsilon(0.15));
}

TEST_CASE("fixed-tail comparison", "[montecarlo]") {
  auto cfg = wigner_config(80, "x2", Comparison::FixedTail, KRule::complement_fixed(2), 2000);
  const auto r = run_remark_fixed_tail(cfg, 2);
  CHECK(r.report.details.at("mean_theory") == Approx(2.0).margin(1e-10));
  const double se = std::sqrt(r.samples.variance / r.samples.size());
  CHECK(std::abs(r.samples.mean - 2.0) <= 4 * se + 0.05);
  CHECK(r.report.ks_distance <= 0.06);

  cfg.k_rule = KRule::complement_fixed(0);
  const auto z = run_remark_fixed_tail(cfg, 1);
  for (double v : z.samples.samples) CHECK(v == 0.0);
  for (double v : z.reference->samples) CHECK(v == 0.0);
  CHECK(z.report.pass);
}

TEST_CASE("experiment reports are independent of the worker count", "[montecarlo]") {
  std::vector<ExperimentConfig> configs;
  configs.push_back(wigner_config(40, "sin", Comparison::FullLinear, KRule::fixed(0), 50));
  configs.push_back(wigner_config(40, "x2", Comparison::FixedK, KRule::fixed(2), 50));
  configs.push_back(wigner_config(40, "x2", Comparison::GrowingK, KRule::proportional(0.25), 50));
  configs.push_back(wigner_config(40, "x", Comparison::FixedTail, KRule::complement_fixed(1), 50));
  configs.push_back(wigner_config(40, "x", Comparison::Rigidity, KRule::fixed(0), 20));
  auto sc = wigner_config(40, "x", Comparison::Rigidity, KRule::fixed(0), 20);
  sc.ensemble = EnsembleKind::SampleCov;
  sc.sample_cov.n = 40;
  configs.push_back(sc);
  auto samp = wigner_config(0, "x", Comparison::SamplingClt, KRule::fixed(10), 200);
  samp.population = 100;
  configs.push_back(samp);
  for (const auto& cfg : configs) {
    const auto a = run_experiment(cfg, 1);
    const auto b = run_experiment(cfg, 4);
    INFO(to_string(cfg.comparison));
    CHECK(a.samples.samples == b.samples.samples);
    CHECK(a.report.details == b.report.details);
    CHECK(a.report.ks_distance == b.report.ks_distance);
    CHECK(a.report.pass == b.report.pass);
    CHECK(a.report.moment_table.size() == 4);
  }
}

TEST_CASE("rigidity runs", "[montecarlo]") {
  auto cfg = wigner_config(100, "x", Comparison::Rigidity, KRule::fixed(0), 30);
  cfg.ensemble = EnsembleKind::SampleCov;
  cfg.sample_cov.n = 100;
  const auto r = run_experiment(cfg, 2);
  CHECK(r.report.details.at("hard_edge_violations") == 0.0);
  CHECK(r.report.details.at("corrected_soft_edge_violations") == 0.0);
  CHECK(r.report.details.at("top_beyond_envelope_fraction") == 0.0);
  for (double v : r.samples.samples) CHECK(v > 0.0);
  const auto scan = rigidity_growth(cfg, {50, 100}, 2);
  CHECK(scan.medians.size() == 2);
  CHECK(std::isfinite(scan.exponent));
}

TEST_CASE("parallel_for propagates exceptions", "[montecarlo]") {
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), 3, [&](std::size_t i) { hit[i] += 1; });
  CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
}

TEST_CASE("fixed-k distance does not grow with n beyond Monte Carlo noise", "[montecarlo][slow]") {
  // Finite-n bias at these sizes sits below the sampling noise of the KS
  // distance, so steps are compared against half its sqrt(2/R) scale.
  constexpr int reps = 1000;
  const double slack = 0.5 * std::sqrt(2.0 / reps);
  std::vector<double> medians;
  for (int n : {100, 200, 400}) {
    std::vector<double> ks;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto cfg = wigner_config(n, "x2", Comparison::FixedK, KRule::fixed(2), reps);
      cfg.master_seed = seed;
      const auto [matrix, limit] = run_partial_fixed_k(cfg, 2);
      ks.push_back(ks_two_sample(matrix, limit));
    }
    std::sort(ks.begin(), ks.end());
    medians.push_back(ks[2]);
  }
  INFO("medians " << medians[0] << " " << medians[1] << " " << medians[2]);
  CHECK(medians[1] <= medians[0] + slack);
  CHECK(medians[2] <= medians[1] + slack);
  CHECK(medians[2] <= 0.05);
}

TEST_CASE("Wigner rigidity statistic tracks log n", "[montecarlo][slow]") {
  for (int n : {100, 200}) {
    auto cfg = wigner_config(n, "x", Comparison::Rigidity, KRule::fixed(0), 40);
    auto s = run_rigidity(cfg, 2).sorted;
    const double median = s[s.size() / 2];
    INFO("n=" << n << " median " << median);
    CHECK(median / std::log(n) > 0.75);
    CHECK(median / std::log(n) < 1.25);
  }
}
