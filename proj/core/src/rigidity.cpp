#include "plstat/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace plstat {

namespace {

template <class Weight>
RigidityProfile profile(const Spectrum& spectrum, const ClassicalLocations& locations, Weight weight) {
  if (spectrum.n() != locations.n || locations.values.size() != spectrum.ordered.size()) {
    throw std::invalid_argument("rigidity: spectrum and classical locations differ in size");
  }
  RigidityProfile out;
  out.n = spectrum.n();
  out.deviations.resize(spectrum.ordered.size());
  out.weighted.resize(spectrum.ordered.size());
  for (std::size_t i = 0; i < spectrum.ordered.size(); ++i) {
    const double dev = std::abs(spectrum.ordered[i] - locations.values[i]);
    out.deviations[i] = dev;
    out.weighted[i] = dev * weight(static_cast<int>(i) + 1);
    out.max_weighted = std::max(out.max_weighted, out.weighted[i]);
  }
  return out;
}

}  // namespace

RigidityProfile wigner_rigidity(const Spectrum& spectrum, const ClassicalLocations& locations) {
  const double n = spectrum.n();
  const double scale = std::pow(n, 2.0 / 3.0);
  return profile(spectrum, locations, [=](int j) {
    return scale * std::cbrt(std::min<double>(j, n - j + 1));
  });
}

RigidityProfile sc_rigidity(const Spectrum& spectrum, const ClassicalLocations& locations) {
  const double scale = std::pow(static_cast<double>(spectrum.n()), 2.0 / 3.0);
  return profile(spectrum, locations, [=](int) { return scale; });
}

double polylog_envelope(long n, double c) {
  if (n < 3) throw std::invalid_argument("polylog_envelope: n must be >= 3");
  const double loglog = std::log(std::log(static_cast<double>(n)));
  return std::exp(c * loglog * loglog);
}

EdgeBoundReport edge_bound_checks(long n, double c, double hard_edge_fraction) {
  if (n < 3) throw std::invalid_argument("edge_bound_checks: n must be >= 3");
  const LimitLaw mp = LimitLaw::marchenko_pastur();
  const double nd = static_cast<double>(n);
  constexpr double pi = std::numbers::pi;

  EdgeBoundReport r;
  r.n = n;
  r.c = c;
  r.phi = polylog_envelope(n, c);

  const long hard_max = static_cast<long>(std::floor(hard_edge_fraction * nd));
  for (long j = 1; j <= hard_max && j < n; ++j) {
    const double gamma = mp.quantile(static_cast<double>(j) / nd);
    const double bound = pi * pi * static_cast<double>(j * j) / (2.0 * nd * nd);
    ++r.hard_edge_checked;
    r.max_hard_edge_ratio = std::max(r.max_hard_edge_ratio, gamma / bound);
    if (gamma > bound) ++r.hard_edge_violations;
  }

  const double soft_bound = std::pow(9.0 * std::sqrt(2.0) * pi * r.phi / nd, 2.0 / 3.0);
  const double corrected_bound = std::pow(18.0 * pi * r.phi / nd, 2.0 / 3.0);
  const long soft_max = std::min<long>(static_cast<long>(std::floor(3.0 * r.phi)), n - 1);
  for (long k = 0; k <= soft_max; ++k) {
    const double gamma = k == 0 ? mp.upper() : mp.quantile(static_cast<double>(n - k) / nd);
    const double gap = std::abs(4.0 - gamma);
    ++r.soft_edge_checked;
    r.max_soft_edge_ratio = std::max(r.max_soft_edge_ratio, gap / soft_bound);
    if (gap > soft_bound) ++r.soft_edge_violations;
    r.max_corrected_soft_edge_ratio = std::max(r.max_corrected_soft_edge_ratio, gap / corrected_bound);
    if (gap > corrected_bound) ++r.corrected_soft_edge_violations;
  }
  return r;
}

double growth_exponent(std::span<const double> sizes, std::span<const double> values) {
  if (sizes.size() != values.size() || sizes.size() < 2) {
    throw std::invalid_argument("growth_exponent: need at least two matching points");
  }
  double mx = 0.0;
  double my = 0.0;
  const double m = static_cast<double>(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    mx += std::log(sizes[i]);
    my += std::log(values[i]);
  }
  mx /= m;
  my /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double dx = std::log(sizes[i]) - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace plstat
