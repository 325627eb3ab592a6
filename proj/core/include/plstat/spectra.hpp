#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "plstat/rng.hpp"
#include "plstat/test_function.hpp"

namespace plstat {

/// Eigenvalues of one realisation, ascending.
struct Spectrum {
  std::vector<double> ordered;

  int n() const noexcept { return static_cast<int>(ordered.size()); }
};

/// All eigenvalues of a real symmetric matrix. Throws std::invalid_argument if
/// the input is not symmetric to within 1e-12 max(1, max|m_ij|).
Spectrum eigenvalues_sym(const Eigen::MatrixXd& matrix);

/// Complex Hermitian counterpart.
Spectrum eigenvalues_herm(const Eigen::MatrixXcd& matrix);

/// L_n[f] = sum_i f(lambda_i).
double linear_stat(const Spectrum& spectrum, const TestFunction& f);

enum class PartialMode { UnorderedPrefix, SamplingComplement };

struct PartialStatResult {
  double value = 0.0;
  int k = 0;
  PartialMode mode = PartialMode::UnorderedPrefix;
};

/// sum_{i=1}^{n-k} f(lambda_{pi(i)}) for a uniform permutation pi drawn by
/// Fisher-Yates from its own stream.
PartialStatResult partial_stat_unordered(const Spectrum& spectrum, const TestFunction& f, int k,
                                         std::uint64_t seed);
PartialStatResult partial_stat_unordered(const Spectrum& spectrum, const TestFunction& f, int k,
                                         Engine& engine);

/// L_n[f] - sum_{j=1}^{k} f(lambda_{xi_j}) for a uniform ordered k-sample xi
/// drawn without replacement.
PartialStatResult partial_stat_sampling(const Spectrum& spectrum, const TestFunction& f, int k,
                                        std::uint64_t seed);
PartialStatResult partial_stat_sampling(const Spectrum& spectrum, const TestFunction& f, int k,
                                        Engine& engine);

/// Deterministic cores of the two modes. `permutation` is a permutation of
/// 0..n-1; `removed` holds k distinct 0-based indices.
double prefix_sum(const Spectrum& spectrum, const TestFunction& f, std::span<const int> permutation,
                  int k);
double complement_sum(const Spectrum& spectrum, const TestFunction& f, std::span<const int> removed);

/// Uniform permutation of 0..n-1.
std::vector<int> random_permutation(int n, Engine& engine);

/// sqrt(n / (k (n - k))), 0 < k < n.
double alpha(long n, long k);

}  // namespace plstat
