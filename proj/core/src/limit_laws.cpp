#include "plstat/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "plstat/rng.hpp"

namespace plstat {

namespace {

constexpr double kPi = std::numbers::pi;

// Marchenko-Pastur CDF in the variable u = sqrt(x), u in [0, 2]. With
// x = 4 sin^2(phi): F = (2/pi) (phi + sin(phi) cos(phi)).
double mp_cdf_sqrt(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 2.0) return 1.0;
  const double phi = std::asin(u / 2.0);
  return std::clamp((2.0 / kPi) * (phi + std::sin(phi) * std::cos(phi)), 0.0, 1.0);
}

// dF/du for the u = sqrt(x) parametrisation.
double mp_cdf_sqrt_derivative(double u) { return std::sqrt(std::max(0.0, 4.0 - u * u)) / kPi; }

// Bisection for an increasing G on [lo, hi] down to width 1e-13 (or until the
// midpoint stops moving), then a single Newton step when the slope is safely
// away from zero and the step stays inside the final bracket.
template <class Cdf, class Slope>
double solve_increasing(Cdf cdf, Slope slope, double p, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  const double d = slope(x);
  if (d > 1e-3) {
    const double polished = x - (cdf(x) - p) / d;
    if (polished >= lo && polished <= hi &&
        std::abs(cdf(polished) - p) <= std::abs(cdf(x) - p)) {
      x = polished;
    }
  }
  return x;
}

// Integral over theta in [0, pi] with the midpoint (Gauss-Chebyshev) rule,
// doubling the node count until successive values agree.
double theta_integral(const std::function<double(double)>& integrand) {
  auto rule = [&](int nodes) {
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double theta = (2.0 * i + 1.0) * kPi / (2.0 * nodes);
      sum += integrand(theta);
    }
    return sum * kPi / nodes;
  };
  int nodes = 256;
  double previous = rule(nodes);
  while (nodes < (1 << 18)) {
    nodes *= 2;
    const double current = rule(nodes);
    if (std::abs(current - previous) <= 1e-13 * std::max(1.0, std::abs(current))) return current;
    previous = current;
  }
  return previous;
}

}  // namespace

double LimitLaw::density(double x) const {
  if (kind_ == LawKind::Semicircle) {
    if (x < -2.0 || x > 2.0) return 0.0;
    return std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * kPi);
  }
  if (x <= 0.0 || x > 4.0) return 0.0;
  return std::sqrt((4.0 - x) / x) / (2.0 * kPi);
}

double LimitLaw::cdf(double x) const {
  if (kind_ == LawKind::Semicircle) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    const double v = 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(x / 2.0) / kPi;
    return std::clamp(v, 0.0, 1.0);
  }
  if (x <= 0.0) return 0.0;
  if (x >= 4.0) return 1.0;
  return mp_cdf_sqrt(std::sqrt(x));
}

double LimitLaw::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0, 1)");
  if (kind_ == LawKind::Semicircle) {
    if (p == 0.5) return 0.0;
    return solve_increasing([this](double x) { return cdf(x); },
                            [this](double x) { return density(x); }, p, -2.0, 2.0);
  }
  // Solve in u = sqrt(x): the hard edge at 0 has infinite density in x but a
  // finite slope in u.
  const double u = solve_increasing(mp_cdf_sqrt, mp_cdf_sqrt_derivative, p, 0.0, 2.0);
  return u * u;
}

ClassicalLocations classical_locations(const LimitLaw& law, int n) {
  if (n < 1) throw std::invalid_argument("classical_locations: n must be >= 1");
  ClassicalLocations out{n, std::vector<double>(static_cast<std::size_t>(n))};
  for (int j = 1; j < n; ++j) {
    out.values[static_cast<std::size_t>(j - 1)] =
        law.quantile(static_cast<double>(j) / static_cast<double>(n));
  }
  out.values.back() = law.upper();
  return out;
}

std::vector<double> sample(const LimitLaw& law, std::size_t count, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = law.quantile(uniform_open01(engine));
  return out;
}

double expect_f(const LimitLaw& law, const TestFunction& f) {
  if (law.kind() == LawKind::Semicircle) {
    // x = 2 cos(theta): rho(x) dx = (2/pi) sin^2(theta) dtheta
    return theta_integral([&](double t) {
      const double s = std::sin(t);
      return (2.0 / kPi) * f(2.0 * std::cos(t)) * s * s;
    });
  }
  // x = 2 + 2 cos(theta): rho_MP(x) dx = (1/pi) (1 - cos(theta)) dtheta
  return theta_integral(
      [&](double t) { return (1.0 / kPi) * f(2.0 + 2.0 * std::cos(t)) * (1.0 - std::cos(t)); });
}

double var_f(const LimitLaw& law, const TestFunction& f) {
  const double mean = expect_f(law, f);
  TestFunction centred_square{
      "centred_square",
      [&f, mean](double x) {
        const double d = f(x) - mean;
        return d * d;
      },
      {}, 1.0, true};
  return std::max(0.0, expect_f(law, centred_square));
}

double moment(const LimitLaw& law, int order) {
  TestFunction power{"power", [order](double x) { return std::pow(x, order); }, {}, 1.0, true};
  return expect_f(law, power);
}

}  // namespace plstat
