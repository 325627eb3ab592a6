#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plstat/test_function.hpp"

namespace plstat {

enum class LawKind { Semicircle, MarchenkoPastur };

/// Semicircle law on [-2, 2] or the square-case Marchenko-Pastur law on [0, 4].
class LimitLaw {
 public:
  static LimitLaw semicircle() { return LimitLaw(LawKind::Semicircle); }
  static LimitLaw marchenko_pastur() { return LimitLaw(LawKind::MarchenkoPastur); }

  explicit LimitLaw(LawKind kind) : kind_(kind) {}

  LawKind kind() const noexcept { return kind_; }
  double lower() const noexcept { return kind_ == LawKind::Semicircle ? -2.0 : 0.0; }
  double upper() const noexcept { return kind_ == LawKind::Semicircle ? 2.0 : 4.0; }

  /// Closed-form density; zero off the support. The Marchenko-Pastur density
  /// is infinite at 0 and is reported as 0 there.
  double density(double x) const;

  /// Closed-form distribution function (arcsine-type antiderivative).
  double cdf(double x) const;

  /// Unique x with cdf(x) = p, |cdf(x) - p| <= 1e-12. Throws
  /// std::domain_error unless 0 < p < 1.
  double quantile(double p) const;

 private:
  LawKind kind_;
};

/// Classical eigenvalue locations: values[j-1] = quantile(j/n) for j < n and
/// values[n-1] = right end of the support.
struct ClassicalLocations {
  int n = 0;
  std::vector<double> values;
};

ClassicalLocations classical_locations(const LimitLaw& law, int n);

/// i.i.d. draws by inverse CDF of a seeded uniform stream.
std::vector<double> sample(const LimitLaw& law, std::size_t count, std::uint64_t seed);

/// E f(psi) by Chebyshev-substituted quadrature, refined until two successive
/// node doublings agree to 1e-13.
double expect_f(const LimitLaw& law, const TestFunction& f);

/// Var f(psi), computed as E (f(psi) - E f(psi))^2.
double var_f(const LimitLaw& law, const TestFunction& f);

/// Raw moment E psi^order via the same quadrature.
double moment(const LimitLaw& law, int order);

}  // namespace plstat
