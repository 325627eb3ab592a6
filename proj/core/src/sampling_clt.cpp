#include "plstat/sampling_clt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plstat/spectra.hpp"

namespace plstat {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void check_path(const SamplePath& path, int j) {
  if (j < 1 || j > path.k()) throw std::invalid_argument("martingale increment: requires 1 <= j <= k");
  if (path.k() >= path.n) throw std::invalid_argument("martingale increment: requires k < n");
}

}  // namespace

SamplePath sample_without_replacement(int n, int k, Engine& engine) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("sample_without_replacement: requires 0 <= k <= n");
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(uniform_index(engine, static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  SamplePath path;
  path.n = n;
  path.xi.assign(pool.begin(), pool.begin() + k);
  path.zeta.reserve(static_cast<std::size_t>(k));
  for (int t : path.xi) path.zeta.push_back(static_cast<double>(t) / n);
  return path;
}

SamplePath sample_without_replacement(int n, int k, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return sample_without_replacement(n, k, engine);
}

std::vector<double> population_values(const TestFunction& g, int n) {
  if (n < 1) throw std::invalid_argument("population_values: n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int t = 1; t <= n; ++t) out[static_cast<std::size_t>(t - 1)] = g(static_cast<double>(t) / n);
  return out;
}

double conditional_mean(std::span<const int> prefix, const TestFunction& g, int n) {
  const auto pop = population_values(g, n);
  return conditional_mean<double>(pop, prefix);
}

double martingale_increment(const SamplePath& path, const TestFunction& g, int j) {
  check_path(path, j);
  const auto pop = population_values(g, path.n);
  return alpha(path.n, path.k()) * increment_closed_form<double>(pop, path.xi, j, path.k());
}

double martingale_increment_telescoping(const SamplePath& path, const TestFunction& g, int j) {
  check_path(path, j);
  const auto pop = population_values(g, path.n);
  return alpha(path.n, path.k()) * increment_telescoping<double>(pop, path.xi, j, path.k());
}

MartingaleDecomposition martingale_decomposition(const SamplePath& path, const TestFunction& g) {
  const int n = path.n;
  const int k = path.k();
  if (k < 1 || k >= n) throw std::invalid_argument("martingale_decomposition: requires 0 < k < n");
  const auto pop = population_values(g, n);
  const double a = alpha(n, k);

  MartingaleDecomposition out;
  out.increments.reserve(static_cast<std::size_t>(k));
  out.partial_sums.reserve(static_cast<std::size_t>(k));

  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  double remaining_sum = std::accumulate(pop.begin(), pop.end(), 0.0);
  double remaining_sq = std::inner_product(pop.begin(), pop.end(), pop.begin(), 0.0);
  double running = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double left = n - j + 1;
    const double mean = remaining_sum / left;
    const double var = std::max(0.0, remaining_sq / left - mean * mean);
    const double factor = a * static_cast<double>(n - k) / static_cast<double>(n - j);
    out.predictable_variance += factor * factor * var;

    const double drawn = pop[static_cast<std::size_t>(path.xi[static_cast<std::size_t>(j - 1)] - 1)];
    const double z = factor * (drawn - mean);
    running += z;
    out.increments.push_back(z);
    out.partial_sums.push_back(running);
    remaining_sum -= drawn;
    remaining_sq -= drawn * drawn;
  }
  return out;
}

LemmaB2Residuals lemma_b2_residuals(int n, int k, int j, const TestFunction& g) {
  if (n > kMaxExhaustiveN) throw std::invalid_argument("lemma_b2_residuals: n exceeds the exhaustive limit");
  if (j < 1 || j > k || k >= n) throw std::invalid_argument("lemma_b2_residuals: requires 1 <= j <= k < n");
  const auto pop = population_values(g, n);
  const double mean = std::accumulate(pop.begin(), pop.end(), 0.0) / n;

  CompensatedSum second;
  CompensatedSum fourth;
  long count = 0;
  for_each_ordered_sample(n, j - 1, [&](std::span<const int> prefix) {
    const double m = conditional_mean<double>(pop, prefix);
    const double m2 = m * m;
    second.add(m2);
    fourth.add(m2 * m2);
    ++count;
  });
  const double c = static_cast<double>(count);
  const double mean2 = mean * mean;
  return {std::abs(second.value() / c - mean2), std::abs(fourth.value() / c - mean2 * mean2)};
}

double predictable_variance_limit(long n, long k) {
  const double a = alpha(n, k);
  CompensatedSum sum;
  // Smallest terms first.
  for (long j = 1; j <= k; ++j) {
    const double d = static_cast<double>(n - j);
    sum.add(1.0 / (d * d));
  }
  const double nk = static_cast<double>(n - k);
  return a * a * nk * nk * sum.value();
}

double population_variance(const TestFunction& g, int n) {
  const auto pop = population_values(g, n);
  const double mean = std::accumulate(pop.begin(), pop.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : pop) ss += (v - mean) * (v - mean);
  return ss / n;
}

double sampling_clt_statistic(std::span<const double> population, int k, Engine& engine) {
  const int n = static_cast<int>(population.size());
  const double a = alpha(n, k);
  const double mean = std::accumulate(population.begin(), population.end(), 0.0) / n;
  const SamplePath path = sample_without_replacement(n, k, engine);
  double sum = 0.0;
  for (int t : path.xi) sum += population[static_cast<std::size_t>(t - 1)] - mean;
  return a * sum;
}

double sampling_clt_statistic(int n, int k, const TestFunction& g, Engine& engine) {
  const auto pop = population_values(g, n);
  return sampling_clt_statistic(pop, k, engine);
}

double sampling_clt_statistic(int n, int k, const TestFunction& g, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return sampling_clt_statistic(n, k, g, engine);
}

}  // namespace plstat
