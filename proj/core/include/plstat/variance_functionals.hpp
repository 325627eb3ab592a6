#pragma once

#include <functional>

#include "plstat/test_function.hpp"

namespace plstat {

/// Terms of a limiting variance functional. `diagonal_term` is the sigma^2
/// correction and is always 0 for the sample-covariance functional.
struct VarianceReport {
  double main_term = 0.0;
  double fourth_moment_term = 0.0;
  double diagonal_term = 0.0;
  double total = 0.0;
  int node_count = 0;
};

/// Integrand used for the m4 - 3 term of the sample-covariance functional.
/// `WeightedByF` integrates f(x)(x-2)/sqrt(4-(x-2)^2); `Unweighted` drops the
/// f(x) factor, which makes the term vanish identically. Kept only for
/// comparison runs.
enum class FourthMomentIntegrand { WeightedByF, Unweighted };

inline constexpr int kDefaultVarianceNodes = 256;

/// Limiting variance of tr f(M) for real symmetric Wigner matrices with
/// off-diagonal fourth moment m4 and diagonal variance sigma2.
///
/// All integrals are taken after x = 2 cos(theta), which absorbs the
/// 1/sqrt(4 - x^2) weight exactly. The double integral pairs an N-point
/// Gauss-Chebyshev grid with an (N+1)-point Chebyshev-Lobatto grid (theta
/// shifted by half a step), so x == y never occurs at a node pair.
///
/// Throws std::invalid_argument for unbounded f or nodes < 32, and
/// ConvergenceError if doubling the node count moves the total by more
/// than 1e-7.
VarianceReport wigner_variance(const TestFunction& f, double m4, double sigma2,
                               int nodes = kDefaultVarianceNodes);

/// Limiting variance of tr f(A) for square real sample covariance matrices.
VarianceReport sc_variance(const TestFunction& f, double m4, int nodes = kDefaultVarianceNodes,
                           FourthMomentIntegrand integrand = FourthMomentIntegrand::WeightedByF);

/// (f(x) - f(y)) / (x - y), switching to f' at the midpoint when
/// |x - y| <= 1e-8 max(1, |x|, |y|).
double divided_difference(const TestFunction& f, double x, double y);

/// Integral of h(x, y) / (sqrt(4 - x^2) sqrt(4 - y^2)) over [-2,2]^2 on the
/// offset Chebyshev grids described above.
double chebyshev_double_integral(const std::function<double(double, double)>& h, int nodes);

/// Integral of h(x) / sqrt(4 - x^2) over [-2, 2] with N Gauss-Chebyshev nodes.
double chebyshev_integral(const std::function<double(double)>& h, int nodes);

}  // namespace plstat
