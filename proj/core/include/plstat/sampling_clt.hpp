#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "plstat/rng.hpp"
#include "plstat/test_function.hpp"

namespace plstat {

/// Ordered sample without replacement from {1, ..., n}: xi holds 1-based
/// indices, zeta = xi / n.
struct SamplePath {
  int n = 0;
  std::vector<int> xi;
  std::vector<double> zeta;

  int k() const noexcept { return static_cast<int>(xi.size()); }
};

SamplePath sample_without_replacement(int n, int k, std::uint64_t seed);
SamplePath sample_without_replacement(int n, int k, Engine& engine);

/// Population values g(t/n), t = 1..n.
std::vector<double> population_values(const TestFunction& g, int n);

/// Calls visit(prefix) for every ordered sample of `length` distinct 1-based
/// indices from {1..n}, in lexicographic order.
template <class Visit>
void for_each_ordered_sample(int n, int length, Visit&& visit) {
  if (length < 0 || length > n) throw std::invalid_argument("for_each_ordered_sample: bad length");
  std::vector<int> prefix;
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  prefix.reserve(static_cast<std::size_t>(length));
  auto recurse = [&](auto&& self) -> void {
    if (static_cast<int>(prefix.size()) == length) {
      visit(std::span<const int>(prefix));
      return;
    }
    for (int t = 1; t <= n; ++t) {
      if (used[static_cast<std::size_t>(t)]) continue;
      used[static_cast<std::size_t>(t)] = true;
      prefix.push_back(t);
      self(self);
      prefix.pop_back();
      used[static_cast<std::size_t>(t)] = false;
    }
  };
  recurse(recurse);
}

/// E_{j-1} g(zeta_j): mean of the population over indices not yet drawn.
template <class T>
T conditional_mean(std::span<const T> population, std::span<const int> prefix) {
  const int n = static_cast<int>(population.size());
  if (static_cast<int>(prefix.size()) >= n) throw std::invalid_argument("conditional_mean: prefix exhausts population");
  T total = T(0);
  for (const T& v : population) total += v;
  for (int t : prefix) total -= population[static_cast<std::size_t>(t - 1)];
  return total / T(n - static_cast<int>(prefix.size()));
}

/// E_j g(zeta_{j+1}) from E_{j-1} g(zeta_j) and the j-th draw:
/// (1 + 1/(n-j)) previous - drawn/(n-j), valid for j < n.
template <class T>
T conditional_mean_update(const T& previous, const T& drawn, int n, int j) {
  if (j >= n) throw std::invalid_argument("conditional_mean_update: requires j < n");
  const T inv = T(1) / T(n - j);
  return (T(1) + inv) * previous - inv * drawn;
}

/// Z_{n,j} / alpha_{n,k} from the closed form ((n-k)/(n-j)) [g(zeta_j) - E_{j-1} g(zeta_j)].
template <class T>
T increment_closed_form(std::span<const T> population, std::span<const int> xi, int j, int k) {
  const int n = static_cast<int>(population.size());
  if (j < 1 || j > k || k >= n || static_cast<int>(xi.size()) < j) {
    throw std::invalid_argument("increment_closed_form: requires 1 <= j <= k < n");
  }
  const T mean = conditional_mean(population, xi.first(static_cast<std::size_t>(j - 1)));
  return T(n - k) / T(n - j) * (population[static_cast<std::size_t>(xi[static_cast<std::size_t>(j - 1)] - 1)] - mean);
}

/// Z_{n,j} / alpha_{n,k} from the telescoping definition
/// sum_{i=1}^k (E_j g(zeta_i) - E_{j-1} g(zeta_i)).
template <class T>
T increment_telescoping(std::span<const T> population, std::span<const int> xi, int j, int k) {
  const int n = static_cast<int>(population.size());
  if (j < 1 || j > k || k >= n || static_cast<int>(xi.size()) < j) {
    throw std::invalid_argument("increment_telescoping: requires 1 <= j <= k < n");
  }
  // sum_i E_m g(zeta_i) = sum of the first m draws + (k - m) * mean of the rest.
  auto projected = [&](int m) {
    T drawn = T(0);
    for (int i = 0; i < m; ++i) drawn += population[static_cast<std::size_t>(xi[static_cast<std::size_t>(i)] - 1)];
    const T rest = conditional_mean(population, xi.first(static_cast<std::size_t>(m)));
    return drawn + T(k - m) * rest;
  };
  return projected(j) - projected(j - 1);
}

/// E[Z_{n,j} / alpha | first j-1 draws]: average of the closed form over the
/// remaining candidates for the j-th draw. Zero for a martingale difference.
template <class T>
T conditional_expected_increment(std::span<const T> population, std::span<const int> prefix, int k) {
  const int n = static_cast<int>(population.size());
  const int j = static_cast<int>(prefix.size()) + 1;
  std::vector<int> path(prefix.begin(), prefix.end());
  path.push_back(0);
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  for (int t : prefix) used[static_cast<std::size_t>(t)] = true;
  T sum = T(0);
  for (int t = 1; t <= n; ++t) {
    if (used[static_cast<std::size_t>(t)]) continue;
    path.back() = t;
    sum += increment_closed_form<T>(population, path, j, k);
  }
  return sum / T(n - j + 1);
}

/// Conditional mean for a prefix of 1-based indices.
double conditional_mean(std::span<const int> prefix, const TestFunction& g, int n);

/// alpha_{n,k} ((n-k)/(n-j)) [g(zeta_j) - E_{j-1} g(zeta_j)], with k = path.k().
double martingale_increment(const SamplePath& path, const TestFunction& g, int j);

/// Same increment via the telescoping definition.
double martingale_increment_telescoping(const SamplePath& path, const TestFunction& g, int j);

struct MartingaleDecomposition {
  std::vector<double> increments;
  std::vector<double> partial_sums;
  /// sum_j E_{j-1}[Z_{n,j}^2] along the path.
  double predictable_variance = 0.0;
};

MartingaleDecomposition martingale_decomposition(const SamplePath& path, const TestFunction& g);

/// |E[(E_{j-1} g(zeta_j))^2] - (E g(zeta_1))^2| and the fourth-power
/// analogue, by exhaustive enumeration of ordered (j-1)-prefixes with
/// compensated summation. Requires n <= 10 and 1 <= j <= k < n.
struct LemmaB2Residuals {
  double r2 = 0.0;
  double r4 = 0.0;
};

inline constexpr int kMaxExhaustiveN = 10;

LemmaB2Residuals lemma_b2_residuals(int n, int k, int j, const TestFunction& g);

/// alpha_{n,k}^2 (n-k)^2 sum_{j=1}^k (n-j)^-2.
double predictable_variance_limit(long n, long k);

/// Var g(zeta_1) for zeta_1 uniform on {1/n, ..., 1}.
double population_variance(const TestFunction& g, int n);

/// alpha_{n,k} sum_{i=1}^k (g(zeta_i) - E g(zeta_1)) for one sampled path.
double sampling_clt_statistic(int n, int k, const TestFunction& g, std::uint64_t seed);
double sampling_clt_statistic(int n, int k, const TestFunction& g, Engine& engine);
double sampling_clt_statistic(std::span<const double> population, int k, Engine& engine);

}  // namespace plstat
