#include "plstat/variance_functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "plstat/errors.hpp"

namespace plstat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConvergenceTolerance = 1e-7;

struct Grid {
  std::vector<double> x;
  std::vector<double> w;
};

// Gauss-Chebyshev (first kind): theta_i = (2i - 1) pi / (2N), weights pi/N.
Grid gauss_grid(int nodes) {
  Grid g;
  g.x.resize(static_cast<std::size_t>(nodes));
  g.w.assign(static_cast<std::size_t>(nodes), kPi / nodes);
  for (int i = 0; i < nodes; ++i) {
    g.x[static_cast<std::size_t>(i)] = 2.0 * std::cos((2.0 * i + 1.0) * kPi / (2.0 * nodes));
  }
  return g;
}

// Chebyshev-Lobatto: theta_j = j pi / N, j = 0..N, trapezoid weights.
Grid lobatto_grid(int nodes) {
  Grid g;
  g.x.resize(static_cast<std::size_t>(nodes) + 1);
  g.w.assign(static_cast<std::size_t>(nodes) + 1, kPi / nodes);
  for (int j = 0; j <= nodes; ++j) g.x[static_cast<std::size_t>(j)] = 2.0 * std::cos(j * kPi / nodes);
  g.w.front() *= 0.5;
  g.w.back() *= 0.5;
  return g;
}

// f on [-2, 2] in the centred variable; sample covariance passes f(u + 2).
struct Terms {
  double main = 0.0;
  double quadratic_moment = 0.0;  // integral of f(x)(2 - x^2)/sqrt(4 - x^2)
  double linear_moment = 0.0;     // integral of f(x) x / sqrt(4 - x^2)
};

Terms centred_terms(const TestFunction& f, int nodes) {
  Terms t;
  const double energy = chebyshev_double_integral(
      [&f](double x, double y) {
        const double dd = divided_difference(f, x, y);
        return dd * dd * (4.0 - x * y);
      },
      nodes);
  t.main = energy / (2.0 * kPi * kPi);
  t.quadratic_moment = chebyshev_integral([&f](double x) { return f(x) * (2.0 - x * x); }, nodes);
  t.linear_moment = chebyshev_integral([&f](double x) { return f(x) * x; }, nodes);
  return t;
}

void check_inputs(const TestFunction& f, int nodes) {
  if (!f.bounded) throw std::invalid_argument("variance functional: test function must be bounded");
  if (nodes < 32) throw std::invalid_argument("variance functional: nodes must be >= 32");
}

template <class Evaluate>
VarianceReport converged(Evaluate evaluate, int nodes, const char* what) {
  VarianceReport coarse = evaluate(nodes);
  const VarianceReport fine = evaluate(2 * nodes);
  if (!std::isfinite(coarse.total) || !std::isfinite(fine.total) ||
      std::abs(fine.total - coarse.total) > kConvergenceTolerance) {
    throw ConvergenceError(std::string(what) + ": quadrature did not converge (doubling nodes moved the total by " +
                           std::to_string(std::abs(fine.total - coarse.total)) + ")");
  }
  coarse.node_count = nodes;
  return coarse;
}

}  // namespace

double divided_difference(const TestFunction& f, double x, double y) {
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  if (std::abs(x - y) > 1e-8 * scale) return (f(x) - f(y)) / (x - y);
  return f.derivative(0.5 * (x + y));
}

double chebyshev_integral(const std::function<double(double)>& h, int nodes) {
  const Grid g = gauss_grid(nodes);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) sum += g.w[i] * h(g.x[i]);
  return sum;
}

double chebyshev_double_integral(const std::function<double(double, double)>& h, int nodes) {
  const Grid gx = gauss_grid(nodes);
  const Grid gy = lobatto_grid(nodes);
  double total = 0.0;
  for (std::size_t i = 0; i < gx.x.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < gy.x.size(); ++j) row += gy.w[j] * h(gx.x[i], gy.x[j]);
    total += gx.w[i] * row;
  }
  return total;
}

VarianceReport wigner_variance(const TestFunction& f, double m4, double sigma2, int nodes) {
  check_inputs(f, nodes);
  if (m4 < 1.0) throw std::invalid_argument("wigner_variance: m4 must be >= 1");
  if (sigma2 < 0.0) throw std::invalid_argument("wigner_variance: sigma2 must be >= 0");
  auto evaluate = [&](int n) {
    const Terms t = centred_terms(f, n);
    VarianceReport r;
    r.main_term = t.main;
    r.fourth_moment_term = (m4 - 3.0) / (2.0 * kPi * kPi) * t.quadratic_moment * t.quadratic_moment;
    r.diagonal_term = (sigma2 - 2.0) / (4.0 * kPi * kPi) * t.linear_moment * t.linear_moment;
    r.total = r.main_term + r.fourth_moment_term + r.diagonal_term;
    r.node_count = n;
    return r;
  };
  return converged(evaluate, nodes, "wigner_variance");
}

VarianceReport sc_variance(const TestFunction& f, double m4, int nodes,
                           FourthMomentIntegrand integrand) {
  check_inputs(f, nodes);
  if (m4 < 1.0) throw std::invalid_argument("sc_variance: m4 must be >= 1");
  // Shift u = x - 2 onto [-2, 2].
  TestFunction shifted{f.name + "(u+2)", [&f](double u) { return f(u + 2.0); },
                       [&f](double u) { return f.derivative(u + 2.0); }, f.lipschitz_bound,
                       f.bounded};
  auto evaluate = [&](int n) {
    const Terms t = centred_terms(shifted, n);
    VarianceReport r;
    r.main_term = t.main;
    const double moment = integrand == FourthMomentIntegrand::WeightedByF
                              ? t.linear_moment
                              : chebyshev_integral([](double u) { return u; }, n);
    r.fourth_moment_term = (m4 - 3.0) / (4.0 * kPi * kPi) * moment * moment;
    r.diagonal_term = 0.0;
    r.total = r.main_term + r.fourth_moment_term;
    r.node_count = n;
    return r;
  };
  return converged(evaluate, nodes, "sc_variance");
}

}  // namespace plstat
