#include "plstat/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "plstat/errors.hpp"
#include "plstat/rigidity.hpp"
#include "plstat/sampling_clt.hpp"

namespace plstat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool known_function(const std::string& name) {
  try {
    find_test_function(name);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

double median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

bool ratio_ok(const Thresholds& t, double ratio) {
  return std::isfinite(ratio) && ratio >= t.variance_ratio_min && ratio <= t.variance_ratio_max;
}

void fill_variance(ComparisonReport& report, double empirical, double theory) {
  report.variance_empirical = empirical;
  report.variance_theory = theory;
  report.variance_ratio = theory > 0.0 ? empirical / theory : kNaN;
}

// Spectrum of replication r with its permutation stream alongside.
struct Replicate {
  Spectrum spectrum;
  Engine permutation;
};

Replicate replicate(const ExperimentConfig& config, std::size_t r) {
  return {replicate_spectrum(config, r), make_engine(config.master_seed, r, Lane::Permutation)};
}

double partial_value(const ExperimentConfig& config, Replicate rep, const TestFunction& f, int k) {
  if (config.partial_mode == PartialMode::UnorderedPrefix) {
    return partial_stat_unordered(rep.spectrum, f, k, rep.permutation).value;
  }
  return partial_stat_sampling(rep.spectrum, f, k, rep.permutation).value;
}

}  // namespace

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::FullLinear: return "full_linear";
    case Comparison::FixedK: return "fixed_k";
    case Comparison::GrowingK: return "growing_k";
    case Comparison::FixedTail: return "fixed_tail";
    case Comparison::Rigidity: return "rigidity";
    case Comparison::SamplingClt: return "sampling_clt";
  }
  return "unknown";
}

std::optional<Comparison> parse_comparison(std::string_view text) {
  for (auto c : {Comparison::FullLinear, Comparison::FixedK, Comparison::GrowingK, Comparison::FixedTail,
                 Comparison::Rigidity, Comparison::SamplingClt}) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

std::string to_string(KRule::Type t) {
  switch (t) {
    case KRule::Type::Fixed: return "fixed";
    case KRule::Type::GrowingSqrt: return "growing_sqrt";
    case KRule::Type::Proportional: return "proportional";
    case KRule::Type::ComplementFixed: return "complement_fixed";
  }
  return "unknown";
}

long KRule::resolve(long n) const {
  switch (type) {
    case Type::Fixed: return k;
    case Type::GrowingSqrt: return static_cast<long>(std::ceil(4.0 * std::sqrt(static_cast<double>(n))));
    case Type::Proportional: return std::lround(ratio * static_cast<double>(n));
    case Type::ComplementFixed: return n - l;
  }
  return k;
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> v;
  const bool uses_matrix = comparison != Comparison::SamplingClt;
  if (uses_matrix && n() < 1) v.push_back("ensemble.n must be a positive integer");
  if (replications < 2) v.push_back("replications must be at least 2");
  if (limit_replications < 0) v.push_back("limit_replications must be nonnegative");
  if (!known_function(f)) v.push_back("f: unknown test function '" + f + "'");
  if (quadrature_nodes < 32) v.push_back("quadrature_nodes must be at least 32");
  if (!(thresholds.ks_max >= 0.0 && thresholds.ks_max <= 1.0)) v.push_back("thresholds.ks_max must lie in [0, 1]");
  if (!(thresholds.variance_ratio_min > 0.0 && thresholds.variance_ratio_min <= thresholds.variance_ratio_max)) {
    v.push_back("thresholds: need 0 < variance_ratio_min <= variance_ratio_max");
  }
  if (!(rigidity_c >= 0.0)) v.push_back("rigidity_c must be nonnegative");

  if (uses_matrix) {
    if (ensemble == EnsembleKind::Wigner) {
      if (std::abs(wigner.offdiag.variance() - 1.0) > 1e-12) v.push_back("ensemble.offdiag must have variance 1");
      if (std::abs(wigner.offdiag.mean()) > 1e-12) v.push_back("ensemble.offdiag must have mean 0");
      if (std::abs(wigner.diag.mean()) > 1e-12) v.push_back("ensemble.diag must have mean 0");
    } else {
      if (std::abs(sample_cov.entry.variance() - 1.0) > 1e-12) v.push_back("ensemble.entry must have variance 1");
      if (std::abs(sample_cov.entry.mean()) > 1e-12) v.push_back("ensemble.entry must have mean 0");
    }
  }

  const long nn = comparison == Comparison::SamplingClt ? population : n();
  const long k = k_rule.resolve(nn);
  using T = KRule::Type;
  switch (comparison) {
    case Comparison::FullLinear:
    case Comparison::Rigidity:
      break;
    case Comparison::FixedK:
      if (k_rule.type != T::Fixed) v.push_back("k_rule: fixed_k comparison requires a fixed k");
      if (k < 0 || k >= nn) v.push_back("k_rule: fixed k must satisfy 0 <= k < n");
      break;
    case Comparison::GrowingK:
      if (k_rule.type == T::ComplementFixed) v.push_back("k_rule: growing_k comparison cannot use complement_fixed");
      if (k <= 0 || k >= nn) v.push_back("k_rule: growing_k comparison requires 0 < k < n");
      break;
    case Comparison::FixedTail:
      if (k_rule.type != T::ComplementFixed && k_rule.type != T::Fixed) {
        v.push_back("k_rule: fixed_tail comparison requires complement_fixed or fixed");
      }
      if (k < 0 || k > nn) v.push_back("k_rule: fixed_tail comparison requires 0 <= l <= n");
      break;
    case Comparison::SamplingClt:
      if (population < 2) v.push_back("population must be at least 2");
      if (k <= 0 || k >= nn) v.push_back("k_rule: sampling_clt comparison requires 0 < k < population");
      break;
  }
  return v;
}

void ExperimentConfig::require_valid() const {
  auto violations = validate();
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

LimitLaw limit_law_of(const ExperimentConfig& config) {
  return config.ensemble == EnsembleKind::Wigner ? LimitLaw::semicircle() : LimitLaw::marchenko_pastur();
}

VarianceReport limit_variance(const ExperimentConfig& config) {
  const TestFunction& f = find_test_function(config.f);
  if (config.ensemble == EnsembleKind::Wigner) {
    return wigner_variance(f, config.wigner.offdiag.fourth_moment(), config.wigner.diag.variance(),
                           config.quadrature_nodes);
  }
  return sc_variance(f, config.sample_cov.entry.fourth_moment(), config.quadrature_nodes, config.sc_integrand);
}

Spectrum replicate_spectrum(const ExperimentConfig& config, std::size_t r) {
  Engine engine = make_engine(config.master_seed, r, Lane::Matrix);
  if (config.ensemble == EnsembleKind::Wigner) {
    if (config.wigner.symmetry == SymmetryClass::ComplexHermitian) {
      return eigenvalues_herm(sample_wigner_hermitian(config.wigner, engine()));
    }
    return eigenvalues_sym(sample_wigner(config.wigner, engine));
  }
  if (config.sample_cov.symmetry == SymmetryClass::ComplexHermitian) {
    return eigenvalues_herm(sample_sample_cov_complex(config.sample_cov, engine()));
  }
  return eigenvalues_sym(sample_sample_cov(config.sample_cov, engine));
}

EmpiricalDistribution run_full_linear(const ExperimentConfig& config, int workers) {
  config.require_valid();
  const TestFunction& f = find_test_function(config.f);
  std::vector<double> values(static_cast<std::size_t>(config.replications));
  parallel_for(values.size(), workers,
               [&](std::size_t r) { values[r] = linear_stat(replicate_spectrum(config, r), f); });
  return centred(EmpiricalDistribution::from_samples(std::move(values)));
}

double sample_fixed_k_limit(const LimitLaw& law, const TestFunction& f, double variance, double mean_f, int k,
                            Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double value = std::sqrt(std::max(variance, 0.0)) * normal(engine);
  for (int i = 0; i < k; ++i) value -= f(law.quantile(uniform_open01(engine))) - mean_f;
  return value;
}

std::pair<EmpiricalDistribution, EmpiricalDistribution> run_partial_fixed_k(const ExperimentConfig& config,
                                                                           int workers) {
  if (config.comparison != Comparison::FixedK) throw std::invalid_argument("run_partial_fixed_k: comparison must be fixed_k");
  config.require_valid();
  const TestFunction& f = find_test_function(config.f);
  const int k = static_cast<int>(config.k_rule.resolve(config.n()));
  const LimitLaw law = limit_law_of(config);
  const double v2 = limit_variance(config).total;
  const double mean_f = expect_f(law, f);

  std::vector<double> matrix_side(static_cast<std::size_t>(config.replications));
  parallel_for(matrix_side.size(), workers,
               [&](std::size_t r) { matrix_side[r] = partial_value(config, replicate(config, r), f, k); });

  std::vector<double> limit_side(static_cast<std::size_t>(config.effective_limit_replications()));
  parallel_for(limit_side.size(), workers, [&](std::size_t r) {
    Engine engine = make_engine(config.master_seed, r, Lane::LimitLaw);
    limit_side[r] = sample_fixed_k_limit(law, f, v2, mean_f, k, engine);
  });

  return {centred(EmpiricalDistribution::from_samples(std::move(matrix_side))),
          EmpiricalDistribution::from_samples(std::move(limit_side))};
}

GrowingKResult run_partial_growing_k(const ExperimentConfig& config, int workers) {
  if (config.comparison != Comparison::GrowingK) {
    throw std::invalid_argument("run_partial_growing_k: comparison must be growing_k");
  }
  config.require_valid();
  const TestFunction& f = find_test_function(config.f);
  const long n = config.n();
  const long k = config.k_rule.resolve(n);
  const double a = alpha(n, k);

  std::vector<double> values(static_cast<std::size_t>(config.replications));
  parallel_for(values.size(), workers, [&](std::size_t r) {
    values[r] = partial_value(config, replicate(config, r), f, static_cast<int>(k));
  });
  auto centred_values = centred(EmpiricalDistribution::from_samples(std::move(values)));
  std::vector<double> scaled = centred_values.samples;
  for (double& x : scaled) x *= a;
  return {EmpiricalDistribution::from_samples(std::move(scaled)), var_f(limit_law_of(config), f), k};
}

ExperimentResult run_remark_fixed_tail(const ExperimentConfig& config, int workers) {
  if (config.comparison != Comparison::FixedTail) {
    throw std::invalid_argument("run_remark_fixed_tail: comparison must be fixed_tail");
  }
  config.require_valid();
  const TestFunction& f = find_test_function(config.f);
  const long n = config.n();
  const long k = config.k_rule.resolve(n);
  const long l = n - k;
  const LimitLaw law = limit_law_of(config);

  std::vector<double> matrix_side(static_cast<std::size_t>(config.replications));
  parallel_for(matrix_side.size(), workers, [&](std::size_t r) {
    matrix_side[r] = partial_value(config, replicate(config, r), f, static_cast<int>(k));
  });
  std::vector<double> limit_side(static_cast<std::size_t>(config.effective_limit_replications()));
  parallel_for(limit_side.size(), workers, [&](std::size_t r) {
    Engine engine = make_engine(config.master_seed, r, Lane::LimitLaw);
    double sum = 0.0;
    for (long i = 0; i < l; ++i) sum += f(law.quantile(uniform_open01(engine)));
    limit_side[r] = sum;
  });

  ExperimentResult result;
  result.samples = EmpiricalDistribution::from_samples(std::move(matrix_side));
  result.reference = EmpiricalDistribution::from_samples(std::move(limit_side));

  ComparisonReport& report = result.report;
  report.comparison = Comparison::FixedTail;
  const double mean_f = expect_f(law, f);
  const double d2 = var_f(law, f);
  report.ks_distance = ks_two_sample(result.samples, *result.reference);
  fill_variance(report, result.samples.variance, static_cast<double>(l) * d2);
  const double mean_theory = static_cast<double>(l) * mean_f;
  const double mean_se = std::sqrt(result.samples.variance / static_cast<double>(result.samples.size()));
  report.details["k"] = static_cast<double>(k);
  report.details["l"] = static_cast<double>(l);
  report.details["mean_empirical"] = result.samples.mean;
  report.details["mean_theory"] = mean_theory;
  report.details["mean_z"] = mean_se > 0.0 ? (result.samples.mean - mean_theory) / mean_se : 0.0;
  report.details["reference_mean"] = result.reference->mean;
  report.details["reference_variance"] = result.reference->variance;

  const auto ref_central = centred(*result.reference);
  const auto own_central = centred(result.samples);
  for (int order = 1; order <= 4; ++order) {
    report.moment_table.push_back({order, own_central.central_moment(order), ref_central.central_moment(order)});
  }
  if (l == 0) {
    report.pass = std::all_of(result.samples.samples.begin(), result.samples.samples.end(),
                              [](double x) { return x == 0.0; });
  } else {
    report.pass = report.ks_distance <= config.thresholds.ks_max;
  }
  return result;
}

namespace {

// max_weighted and the largest eigenvalue of every replication.
std::pair<std::vector<double>, std::vector<double>> rigidity_pass(const ExperimentConfig& config, int workers) {
  config.require_valid();
  const ClassicalLocations locations = classical_locations(limit_law_of(config), config.n());
  const bool wigner = config.ensemble == EnsembleKind::Wigner;
  std::vector<double> values(static_cast<std::size_t>(config.replications));
  std::vector<double> top(values.size());
  parallel_for(values.size(), workers, [&](std::size_t r) {
    const Spectrum s = replicate_spectrum(config, r);
    values[r] = (wigner ? wigner_rigidity(s, locations) : sc_rigidity(s, locations)).max_weighted;
    top[r] = s.ordered.back();
  });
  return {std::move(values), std::move(top)};
}

}  // namespace

EmpiricalDistribution run_rigidity(const ExperimentConfig& config, int workers) {
  return EmpiricalDistribution::from_samples(rigidity_pass(config, workers).first);
}

RigidityScan rigidity_growth(const ExperimentConfig& base, const std::vector<int>& sizes, int workers) {
  RigidityScan scan;
  for (int n : sizes) {
    ExperimentConfig config = base;
    config.comparison = Comparison::Rigidity;
    config.wigner.n = n;
    config.sample_cov.n = n;
    const auto dist = run_rigidity(config, workers);
    scan.sizes.push_back(static_cast<double>(n));
    scan.medians.push_back(median(dist.samples));
  }
  scan.exponent = growth_exponent(scan.sizes, scan.medians);
  return scan;
}

EmpiricalDistribution run_sampling_clt(const ExperimentConfig& config, int workers) {
  config.require_valid();
  const TestFunction& g = find_test_function(config.f);
  const int n = config.population;
  const int k = static_cast<int>(config.k_rule.resolve(n));
  const std::vector<double> pop = population_values(g, n);
  std::vector<double> values(static_cast<std::size_t>(config.replications));
  parallel_for(values.size(), workers, [&](std::size_t r) {
    Engine engine = make_engine(config.master_seed, r, Lane::Sampling);
    values[r] = sampling_clt_statistic(pop, k, engine);
  });
  return EmpiricalDistribution::from_samples(std::move(values));
}

std::vector<MomentRow> normal_moment_table(const EmpiricalDistribution& emp, double variance) {
  std::vector<MomentRow> rows;
  const double s2 = std::max(variance, 0.0);
  const double reference[] = {0.0, s2, 0.0, 3.0 * s2 * s2};
  for (int order = 1; order <= 4; ++order) {
    rows.push_back({order, emp.central_moment(order), reference[order - 1]});
  }
  return rows;
}

namespace {

ComparisonReport normal_report(Comparison comparison, const EmpiricalDistribution& emp, double variance,
                               const Thresholds& thresholds) {
  ComparisonReport report;
  report.comparison = comparison;
  if (!std::isfinite(variance)) {
    report.ks_distance = kNaN;
    report.variance_empirical = emp.variance;
    report.variance_theory = kNaN;
    report.variance_ratio = kNaN;
    report.pass = false;
    return report;
  }
  report.ks_distance = ks_one_sample(emp, [variance](double x) { return normal_cdf(x, variance); });
  fill_variance(report, emp.variance, variance);
  report.moment_table = normal_moment_table(emp, variance);
  if (variance == 0.0) {
    report.pass = std::all_of(emp.samples.begin(), emp.samples.end(), [](double x) { return std::abs(x) <= 1e-9; });
  } else {
    report.pass = report.ks_distance <= thresholds.ks_max && ratio_ok(thresholds, report.variance_ratio);
  }
  return report;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
  config.require_valid();
  ExperimentResult result;
  switch (config.comparison) {
    case Comparison::FullLinear: {
      const VarianceReport v = limit_variance(config);
      result.samples = run_full_linear(config, workers);
      result.report = normal_report(Comparison::FullLinear, result.samples, v.total, config.thresholds);
      result.report.details["v2"] = v.total;
      result.report.details["v2_main_term"] = v.main_term;
      result.report.details["v2_fourth_moment_term"] = v.fourth_moment_term;
      result.report.details["v2_diagonal_term"] = v.diagonal_term;
      break;
    }
    case Comparison::FixedK: {
      const TestFunction& f = find_test_function(config.f);
      const LimitLaw law = limit_law_of(config);
      const double v2 = limit_variance(config).total;
      const double d2 = var_f(law, f);
      const int k = static_cast<int>(config.k_rule.resolve(config.n()));
      auto [matrix_side, limit_side] = run_partial_fixed_k(config, workers);
      ComparisonReport& report = result.report;
      report.comparison = Comparison::FixedK;
      report.ks_distance = ks_two_sample(matrix_side, limit_side);
      const double theory = v2 + static_cast<double>(k) * d2;
      fill_variance(report, matrix_side.variance, theory);
      const auto limit_central = centred(limit_side);
      for (int order = 1; order <= 4; ++order) {
        report.moment_table.push_back(
            {order, matrix_side.central_moment(order), limit_central.central_moment(order)});
      }
      const double se = limit_side.variance_standard_error();
      report.details["k"] = k;
      report.details["v2"] = v2;
      report.details["d2"] = d2;
      report.details["limit_variance"] = limit_side.variance;
      report.details["limit_variance_se"] = se;
      report.details["limit_variance_z"] = se > 0.0 ? (limit_side.variance - theory) / se : 0.0;
      report.pass = report.ks_distance <= config.thresholds.ks_max && ratio_ok(config.thresholds, report.variance_ratio);
      result.samples = std::move(matrix_side);
      result.reference = std::move(limit_side);
      break;
    }
    case Comparison::GrowingK: {
      auto g = run_partial_growing_k(config, workers);
      result.report = normal_report(Comparison::GrowingK, g.scaled, g.reference_variance, config.thresholds);
      result.report.details["k"] = static_cast<double>(g.k);
      result.report.details["alpha"] = alpha(config.n(), g.k);
      result.report.details["d2"] = g.reference_variance;
      result.report.details["min_k_over_sqrt_n"] =
          static_cast<double>(std::min<long>(g.k, config.n() - g.k)) / std::sqrt(static_cast<double>(config.n()));
      result.samples = std::move(g.scaled);
      break;
    }
    case Comparison::FixedTail:
      result = run_remark_fixed_tail(config, workers);
      break;
    case Comparison::Rigidity: {
      auto [values, top] = rigidity_pass(config, workers);
      result.samples = EmpiricalDistribution::from_samples(std::move(values));
      ComparisonReport& report = result.report;
      report.comparison = Comparison::Rigidity;
      const long n = config.n();
      const double phi = n >= 3 ? polylog_envelope(n, config.rigidity_c) : 1.0;
      const double med = median(result.samples.samples);
      report.variance_empirical = result.samples.variance;
      report.variance_theory = kNaN;
      report.variance_ratio = kNaN;
      report.ks_distance = 0.0;
      const auto own = centred(result.samples);
      for (int order = 1; order <= 4; ++order) report.moment_table.push_back({order, own.central_moment(order), kNaN});
      report.details["median_max_weighted"] = med;
      report.details["mean_max_weighted"] = result.samples.mean;
      report.details["max_max_weighted"] = result.samples.sorted.back();
      report.details["envelope"] = phi;
      bool pass = med <= phi;
      if (config.ensemble == EnsembleKind::SampleCov) {
        const EdgeBoundReport edges = edge_bound_checks(n, config.rigidity_c);
        report.details["hard_edge_checked"] = static_cast<double>(edges.hard_edge_checked);
        report.details["hard_edge_violations"] = static_cast<double>(edges.hard_edge_violations);
        report.details["soft_edge_checked"] = static_cast<double>(edges.soft_edge_checked);
        report.details["soft_edge_violations"] = static_cast<double>(edges.soft_edge_violations);
        report.details["corrected_soft_edge_violations"] = static_cast<double>(edges.corrected_soft_edge_violations);
        // Largest eigenvalue beyond 4 + phi n^(-2/3), as a fraction of replications.
        const double cut = 4.0 + phi * std::pow(static_cast<double>(n), -2.0 / 3.0);
        const auto beyond = std::count_if(top.begin(), top.end(), [cut](double x) { return x >= cut; });
        report.details["top_beyond_envelope_fraction"] =
            static_cast<double>(beyond) / static_cast<double>(top.size());
        pass = pass && edges.corrected_hold();
      }
      report.pass = pass;
      break;
    }
    case Comparison::SamplingClt: {
      result.samples = run_sampling_clt(config, workers);
      const TestFunction& g = find_test_function(config.f);
      const double exact = population_variance(g, config.population);
      result.report = normal_report(Comparison::SamplingClt, result.samples, exact, config.thresholds);
      result.report.details["k"] = static_cast<double>(config.k_rule.resolve(config.population));
      result.report.details["population"] = config.population;
      result.report.details["variance_exact"] = exact;
      break;
    }
  }
  return result;
}

}  // namespace plstat
