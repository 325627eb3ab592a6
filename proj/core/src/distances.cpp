#include "plstat/distances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plstat {

EmpiricalDistribution EmpiricalDistribution::from_samples(std::vector<double> values) {
  EmpiricalDistribution d;
  d.samples = std::move(values);
  d.sorted = d.samples;
  std::sort(d.sorted.begin(), d.sorted.end());
  if (d.samples.empty()) return d;
  double sum = 0.0;
  for (double v : d.samples) sum += v;
  d.mean = sum / static_cast<double>(d.samples.size());
  if (d.samples.size() > 1) {
    double ss = 0.0;
    for (double v : d.samples) ss += (v - d.mean) * (v - d.mean);
    d.variance = ss / static_cast<double>(d.samples.size() - 1);
  }
  return d;
}

double EmpiricalDistribution::ecdf(double x) const {
  if (sorted.empty()) return 0.0;
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

double EmpiricalDistribution::central_moment(int order) const {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double v : samples) sum += std::pow(v - mean, order);
  return sum / static_cast<double>(samples.size());
}

double EmpiricalDistribution::variance_standard_error() const {
  if (samples.size() < 2) return 0.0;
  const double m2 = central_moment(2);
  return std::sqrt(std::max(0.0, central_moment(4) - m2 * m2) / static_cast<double>(samples.size()));
}

EmpiricalDistribution centred(const EmpiricalDistribution& dist) {
  std::vector<double> values = dist.samples;
  for (double& v : values) v -= dist.mean;
  return EmpiricalDistribution::from_samples(std::move(values));
}

double ks_one_sample(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf) {
  if (emp.sorted.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  const double n = static_cast<double>(emp.sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < emp.sorted.size(); ++i) {
    const double f = cdf(emp.sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.sorted.empty() || b.sorted.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  const double na = static_cast<double>(a.sorted.size());
  const double nb = static_cast<double>(b.sorted.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.sorted.size() && j < b.sorted.size()) {
    const double x = std::min(a.sorted[i], b.sorted[j]);
    while (i < a.sorted.size() && a.sorted[i] == x) ++i;
    while (j < b.sorted.size() && b.sorted[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double normal_cdf(double x, double variance) {
  if (variance <= 0.0) return x >= 0.0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

}  // namespace plstat
