#include "plstat/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace plstat {

namespace {

void check_k(const Spectrum& spectrum, int k) {
  if (k < 0 || k > spectrum.n()) throw std::invalid_argument("partial statistic: k must lie in [0, n]");
}

}  // namespace

Spectrum eigenvalues_sym(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("eigenvalues_sym: matrix must be square");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("eigenvalues_sym: matrix is not symmetric");
  }
  Spectrum out;
  if (matrix.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues_sym: solver failed");
  const auto& values = solver.eigenvalues();
  out.ordered.assign(values.data(), values.data() + values.size());
  std::sort(out.ordered.begin(), out.ordered.end());
  return out;
}

Spectrum eigenvalues_herm(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("eigenvalues_herm: matrix must be square");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("eigenvalues_herm: matrix is not Hermitian");
  }
  Spectrum out;
  if (matrix.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues_herm: solver failed");
  const auto& values = solver.eigenvalues();
  out.ordered.assign(values.data(), values.data() + values.size());
  std::sort(out.ordered.begin(), out.ordered.end());
  return out;
}

double linear_stat(const Spectrum& spectrum, const TestFunction& f) {
  double sum = 0.0;
  for (double lambda : spectrum.ordered) sum += f(lambda);
  return sum;
}

std::vector<int> random_permutation(int n, Engine& engine) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(uniform_index(engine, static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

double prefix_sum(const Spectrum& spectrum, const TestFunction& f, std::span<const int> permutation,
                  int k) {
  check_k(spectrum, k);
  const int keep = spectrum.n() - k;
  double sum = 0.0;
  for (int i = 0; i < keep; ++i) {
    sum += f(spectrum.ordered[static_cast<std::size_t>(permutation[static_cast<std::size_t>(i)])]);
  }
  return sum;
}

double complement_sum(const Spectrum& spectrum, const TestFunction& f, std::span<const int> removed) {
  check_k(spectrum, static_cast<int>(removed.size()));
  double sum = linear_stat(spectrum, f);
  for (int idx : removed) sum -= f(spectrum.ordered[static_cast<std::size_t>(idx)]);
  return sum;
}

PartialStatResult partial_stat_unordered(const Spectrum& spectrum, const TestFunction& f, int k,
                                         Engine& engine) {
  check_k(spectrum, k);
  const auto perm = random_permutation(spectrum.n(), engine);
  return {prefix_sum(spectrum, f, perm, k), k, PartialMode::UnorderedPrefix};
}

PartialStatResult partial_stat_unordered(const Spectrum& spectrum, const TestFunction& f, int k,
                                         std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return partial_stat_unordered(spectrum, f, k, engine);
}

PartialStatResult partial_stat_sampling(const Spectrum& spectrum, const TestFunction& f, int k,
                                        Engine& engine) {
  check_k(spectrum, k);
  // Partial Fisher-Yates: the first k slots form a uniform ordered k-sample.
  std::vector<int> pool(static_cast<std::size_t>(spectrum.n()));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(uniform_index(engine, static_cast<std::uint64_t>(spectrum.n() - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  return {complement_sum(spectrum, f, std::span<const int>(pool.data(), static_cast<std::size_t>(k))), k,
          PartialMode::SamplingComplement};
}

PartialStatResult partial_stat_sampling(const Spectrum& spectrum, const TestFunction& f, int k,
                                        std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return partial_stat_sampling(spectrum, f, k, engine);
}

double alpha(long n, long k) {
  if (!(k > 0 && k < n)) throw std::invalid_argument("alpha: requires 0 < k < n");
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::sqrt(nd / (kd * (nd - kd)));
}

}  // namespace plstat
