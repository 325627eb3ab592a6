#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "plstat/rng.hpp"

namespace plstat {

enum class EntryKind { Gaussian, Rademacher, SymmetricUniform, ScaledTwoPoint, Custom };

/// Law of a single real matrix entry with exact moment access.
///
/// Discrete laws (Rademacher, ScaledTwoPoint, Custom) keep an atom table;
/// Gaussian and SymmetricUniform use closed forms throughout.
class EntryDistribution {
 public:
  static EntryDistribution gaussian(double variance = 1.0);
  /// +-sqrt(variance) with probability 1/2 each.
  static EntryDistribution rademacher(double variance = 1.0);
  /// Uniform on [-sqrt(3 variance), sqrt(3 variance)].
  static EntryDistribution symmetric_uniform(double variance = 1.0);
  /// Unit variance, fourth moment m4 >= 1: +-1/sqrt(2) with probability
  /// 1 - q and +-sqrt(2 m4 - 1) with probability q = 1/(4 m4 - 3).
  static EntryDistribution scaled_two_point(double m4);
  /// Finite atom table. Probabilities must be nonnegative and sum to 1.
  static EntryDistribution custom(std::vector<double> values, std::vector<double> probabilities);

  EntryKind kind() const noexcept { return kind_; }
  std::string name() const;
  double mean() const;
  double variance() const { return raw_moment(2) - mean() * mean(); }
  double fourth_moment() const { return raw_moment(4); }
  bool symmetric() const noexcept { return symmetric_; }

  /// E w^p (signed) for integer p >= 0.
  double raw_moment(int p) const;
  /// E |w|^p for real p >= 0.
  double abs_moment(double p) const;
  /// E[|w|^p 1{|w| > threshold}].
  double tail_abs_moment(double p, double threshold) const;
  /// E[w 1{|w| <= threshold}].
  double truncated_mean(double threshold) const;

  /// Largest |w| in the support; +inf for Gaussian.
  double sup_abs() const;

  /// Parameters as stored: the variance for closed-form laws, m4 for the
  /// two-point law.
  double parameter() const noexcept { return parameter_; }
  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double draw(Engine& engine) const;

 private:
  EntryDistribution(EntryKind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  EntryKind kind_;
  double parameter_;
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  bool symmetric_ = true;
};

enum class SymmetryClass { RealSymmetric, ComplexHermitian };

struct WignerSpec {
  int n = 0;
  EntryDistribution offdiag = EntryDistribution::gaussian(1.0);
  EntryDistribution diag = EntryDistribution::gaussian(1.0);
  SymmetryClass symmetry = SymmetryClass::RealSymmetric;
};

struct SampleCovSpec {
  int n = 0;
  EntryDistribution entry = EntryDistribution::gaussian(1.0);
  SymmetryClass symmetry = SymmetryClass::RealSymmetric;
};

/// M_n = W_n / sqrt(n). Entries are drawn row by row over the upper triangle.
Eigen::MatrixXd sample_wigner(const WignerSpec& spec, Engine& engine);
Eigen::MatrixXd sample_wigner(const WignerSpec& spec, std::uint64_t seed);

/// Complex Hermitian variant: off-diagonal real and imaginary parts each drawn
/// from the off-diagonal law scaled to variance 1/2, real diagonal.
Eigen::MatrixXcd sample_wigner_hermitian(const WignerSpec& spec, std::uint64_t seed);

/// A_n = X^T X / n, exactly symmetric.
Eigen::MatrixXd sample_sample_cov(const SampleCovSpec& spec, Engine& engine);
Eigen::MatrixXd sample_sample_cov(const SampleCovSpec& spec, std::uint64_t seed);

/// A_n = X^* X / n with complex entries of variance 1 (1/2 per part).
Eigen::MatrixXcd sample_sample_cov_complex(const SampleCovSpec& spec, std::uint64_t seed);

struct TruncatedMoments {
  double mu = 0.0;    // E[w 1{|w| <= threshold}]
  double tau2 = 0.0;  // E w^2 - E[w^2 1{|w| <= threshold}]
};

TruncatedMoments truncated_moments(const EntryDistribution& dist, double threshold);

/// Truncate at eps_n = n^(1/2 - eps) and re-inject the lost mean and
/// variance through a symmetric two-point law z = a +- sqrt(b2 - a^2), mixed
/// in with probability mix_prob = |mu|/eps_n + tau2/eps_n^2.
struct TruncationMixture {
  double epsilon_n = 0.0;
  double mu = 0.0;
  double tau2 = 0.0;
  double a = 0.0;
  double b2 = 0.0;
  double mix_prob = 0.0;
  double second_moment = 0.0;     // E w^2 of the original law
  double truncated_fourth = 0.0;  // E[w^4 1{|w| <= eps_n}]

  double z_plus() const;
  double z_minus() const;
  /// Residual of "mixture mean = 0".
  double mean_residual() const;
  /// Residual of "mixture second moment = E w^2".
  double second_moment_residual() const;
  double fourth_moment() const;
  /// max |z| over the two atoms.
  double max_abs_z() const;
};

/// Throws std::domain_error when mix_prob > 1 (threshold too small for the
/// law).
TruncationMixture build_truncation_mixture(const EntryDistribution& dist, long n, double eps);

/// n^(p/2) (n^(4 eps)/n^2 sum_{i<j} E[w^4 1] + n^(2 eps)/n sum_i E[w_ii^2 1])
/// with indicators of |w| > n^(1/2 - eps); i.i.d. per class.
double c0_deficit(const WignerSpec& spec, double p, double eps, long n);

/// Symmetric and E|x|^p <= (C1 sqrt(p))^p for p = 1..pmax.
bool c1_check(const EntryDistribution& dist, double c1, int pmax);

}  // namespace plstat
