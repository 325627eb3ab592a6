#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace plstat {

/// Samples plus summary statistics and a sorted copy for the ECDF.
struct EmpiricalDistribution {
  std::vector<double> samples;
  std::vector<double> sorted;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, 0 for a single sample

  static EmpiricalDistribution from_samples(std::vector<double> values);

  std::size_t size() const noexcept { return samples.size(); }

  /// Right-continuous step function: fraction of samples <= x.
  double ecdf(double x) const;

  /// (1/R) sum (x - mean)^order.
  double central_moment(int order) const;

  /// Standard error of the sample variance, sqrt((m4 - s^4) / R).
  double variance_standard_error() const;
};

/// Subtracts the empirical mean from every sample.
EmpiricalDistribution centred(const EmpiricalDistribution& dist);

/// sup_x |ECDF(x) - cdf(x)|, evaluated on both sides of every jump.
double ks_one_sample(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf);

/// sup_x |ECDF_a(x) - ECDF_b(x)|, stepping through ties together.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// CDF of N(0, variance); a point mass at 0 when variance == 0.
double normal_cdf(double x, double variance);

}  // namespace plstat
