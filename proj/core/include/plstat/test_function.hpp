#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace plstat {

/// A real test function f with an optional analytic derivative.
///
/// `lipschitz_bound` holds on [-2, 4], the union of the semicircle and
/// Marchenko-Pastur supports. `bounded` means bounded on that set; the
/// variance functionals refuse functions without it.
struct TestFunction {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;  // empty -> central difference
  double lipschitz_bound = 1.0;
  bool bounded = true;

  double operator()(double x) const { return eval(x); }

  /// f'(x), analytic when available, else central difference with h = 1e-5.
  double derivative(double x) const;
};

/// Built-in functions: x, x2, x3, sin, cos2x, lorentz, bump.
const std::vector<TestFunction>& catalog();

/// Catalog lookup. Also accepts the aliases "identity" (= x), "square"
/// (= x2) and "constant" (= 1). Throws std::invalid_argument if unknown.
const TestFunction& find_test_function(std::string_view name);

TestFunction constant_function(double value);

}  // namespace plstat
