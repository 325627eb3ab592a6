#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "plstat/distances.hpp"
#include "plstat/ensembles.hpp"
#include "plstat/limit_laws.hpp"
#include "plstat/spectra.hpp"
#include "plstat/variance_functionals.hpp"

namespace plstat {

enum class EnsembleKind { Wigner, SampleCov };

enum class Comparison { FullLinear, FixedK, GrowingK, FixedTail, Rigidity, SamplingClt };

std::string to_string(Comparison c);
std::optional<Comparison> parse_comparison(std::string_view text);

/// How the number of removed eigenvalues k is chosen for a given n.
struct KRule {
  enum class Type { Fixed, GrowingSqrt, Proportional, ComplementFixed };

  Type type = Type::Fixed;
  long k = 0;          // Fixed
  double ratio = 0.0;  // Proportional
  long l = 0;          // ComplementFixed: k = n - l

  static KRule fixed(long k) { return {Type::Fixed, k, 0.0, 0}; }
  /// k = ceil(4 sqrt(n)).
  static KRule growing_sqrt() { return {Type::GrowingSqrt, 0, 0.0, 0}; }
  /// k = round(ratio n).
  static KRule proportional(double ratio) { return {Type::Proportional, 0, ratio, 0}; }
  static KRule complement_fixed(long l) { return {Type::ComplementFixed, 0, 0.0, l}; }

  long resolve(long n) const;
};

std::string to_string(KRule::Type t);

struct Thresholds {
  double ks_max = 0.05;
  double variance_ratio_min = 0.85;
  double variance_ratio_max = 1.15;
};

struct ExperimentConfig {
  EnsembleKind ensemble = EnsembleKind::Wigner;
  WignerSpec wigner;
  SampleCovSpec sample_cov;
  std::string f = "x2";
  KRule k_rule;
  int replications = 2000;
  int limit_replications = 0;  // 0: same as replications
  std::uint64_t master_seed = 0;
  Comparison comparison = Comparison::FullLinear;
  PartialMode partial_mode = PartialMode::UnorderedPrefix;
  Thresholds thresholds;
  int quadrature_nodes = kDefaultVarianceNodes;
  FourthMomentIntegrand sc_integrand = FourthMomentIntegrand::WeightedByF;
  double rigidity_c = 1.0;
  int population = 0;  // SamplingClt population size

  int n() const { return ensemble == EnsembleKind::Wigner ? wigner.n : sample_cov.n; }
  int effective_limit_replications() const {
    return limit_replications > 0 ? limit_replications : replications;
  }

  /// Every violated constraint, empty when the configuration is usable.
  std::vector<std::string> validate() const;
  /// Throws ConfigError listing every violation.
  void require_valid() const;
};

struct MomentRow {
  int order = 0;
  double empirical = 0.0;
  double reference = 0.0;
};

struct ComparisonReport {
  Comparison comparison = Comparison::FullLinear;
  double ks_distance = 0.0;
  double variance_empirical = 0.0;
  double variance_theory = 0.0;
  double variance_ratio = 0.0;
  std::vector<MomentRow> moment_table;  // central moments, orders 1-4
  bool pass = false;
  std::map<std::string, double> details;
};

struct ExperimentResult {
  ComparisonReport report;
  EmpiricalDistribution samples;
  std::optional<EmpiricalDistribution> reference;
};

/// Runs body(i) for i in [0, count) on up to `workers` threads. Callers write
/// results by index, so output never depends on scheduling. The first
/// exception thrown by any body is rethrown after all threads join.
template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Limit law of the configured ensemble.
LimitLaw limit_law_of(const ExperimentConfig& config);

/// v^2[f] or v_SC^2[f] with the moments of the configured entry laws.
VarianceReport limit_variance(const ExperimentConfig& config);

/// Ordered spectrum of replication r, drawn from stream (master_seed, r, Matrix).
Spectrum replicate_spectrum(const ExperimentConfig& config, std::size_t r);

/// Centered L_n[f] over R replications.
EmpiricalDistribution run_full_linear(const ExperimentConfig& config, int workers = 1);

/// One draw of G + D with G ~ N(0, variance) and D = -sum_{i<=k} (f(psi_i) - E f(psi)).
double sample_fixed_k_limit(const LimitLaw& law, const TestFunction& f, double variance, double mean_f,
                            int k, Engine& engine);

/// Centered S_{n,k}[f] over R replications, and R' draws of the limit law.
std::pair<EmpiricalDistribution, EmpiricalDistribution> run_partial_fixed_k(const ExperimentConfig& config,
                                                                           int workers = 1);

struct GrowingKResult {
  EmpiricalDistribution scaled;
  double reference_variance = 0.0;  // d^2[f]
  long k = 0;
};

/// alpha_{n,k} (S_{n,k}[f] - mean) over R replications, with reference N(0, d^2[f]).
GrowingKResult run_partial_growing_k(const ExperimentConfig& config, int workers = 1);

/// Uncentered sum of f over l = n - k unordered eigenvalues against l-fold
/// sums of f(psi) drawn from the limit law.
ExperimentResult run_remark_fixed_tail(const ExperimentConfig& config, int workers = 1);

/// max_weighted rigidity statistic over R replications.
EmpiricalDistribution run_rigidity(const ExperimentConfig& config, int workers = 1);

struct RigidityScan {
  std::vector<double> sizes;
  std::vector<double> medians;
  double exponent = 0.0;
};

/// Median max_weighted at each size and the fitted log-log growth exponent.
RigidityScan rigidity_growth(const ExperimentConfig& base, const std::vector<int>& sizes, int workers = 1);

/// Sampling CLT statistic over R replications from a population of size
/// config.population with g = f evaluated at i/population.
EmpiricalDistribution run_sampling_clt(const ExperimentConfig& config, int workers = 1);

/// Central moments of orders 1-4 of the samples against those of N(0, variance).
std::vector<MomentRow> normal_moment_table(const EmpiricalDistribution& emp, double variance);

/// Dispatches on config.comparison and evaluates the configured thresholds.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 1);

}  // namespace plstat
