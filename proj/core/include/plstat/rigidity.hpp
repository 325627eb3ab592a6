#pragma once

#include <span>
#include <vector>

#include "plstat/limit_laws.hpp"
#include "plstat/spectra.hpp"

namespace plstat {

/// Deviations |lambda_j - loc_j| and their rigidity-normalised versions.
struct RigidityProfile {
  int n = 0;
  std::vector<double> deviations;
  std::vector<double> weighted;
  double max_weighted = 0.0;
};

/// Weighted by n^(2/3) min(j, n - j + 1)^(1/3).
RigidityProfile wigner_rigidity(const Spectrum& spectrum, const ClassicalLocations& locations);

/// Weighted uniformly by n^(2/3).
RigidityProfile sc_rigidity(const Spectrum& spectrum, const ClassicalLocations& locations);

/// (log n)^(c log log n), n >= 3.
double polylog_envelope(long n, double c);

/// Outcome of the two deterministic Marchenko-Pastur quantile inequalities:
///   hard edge  gamma_j <= pi^2 j^2 / (2 n^2)                for 1 <= j <= fraction * n
///   soft edge  |4 - gamma_{n-k}| <= (9 sqrt(2) pi phi / n)^(2/3)  for 0 <= k <= 3 phi
/// with phi = polylog_envelope(n, c). The soft-edge constant relies on
/// rho(x) >= sqrt(4 - x) / (2 sqrt(2) pi), which fails for x > 2; it is
/// violated for k near 3 phi. The valid lower bound sqrt(4 - x) / (4 pi)
/// gives (18 pi phi / n)^(2/3), tracked as the corrected soft edge.
struct EdgeBoundReport {
  long n = 0;
  double c = 0.0;
  double phi = 0.0;
  long hard_edge_checked = 0;
  long hard_edge_violations = 0;
  double max_hard_edge_ratio = 0.0;  // gamma_j / bound, maximised over j
  long soft_edge_checked = 0;
  long soft_edge_violations = 0;
  double max_soft_edge_ratio = 0.0;
  long corrected_soft_edge_violations = 0;
  double max_corrected_soft_edge_ratio = 0.0;

  bool all_hold() const noexcept { return hard_edge_violations == 0 && soft_edge_violations == 0; }
  bool corrected_hold() const noexcept { return hard_edge_violations == 0 && corrected_soft_edge_violations == 0; }
};

inline constexpr double kHardEdgeFraction = 1.0 / 100.0;

EdgeBoundReport edge_bound_checks(long n, double c, double hard_edge_fraction = kHardEdgeFraction);

/// Least-squares slope of log(values) against log(sizes).
double growth_exponent(std::span<const double> sizes, std::span<const double> values);

}  // namespace plstat
