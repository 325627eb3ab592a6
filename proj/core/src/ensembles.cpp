#include "plstat/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace plstat {

namespace {

// Keeps a persistent normal_distribution so Gaussian draws use both halves of
// each polar-method pair.
class EntrySampler {
 public:
  explicit EntrySampler(const EntryDistribution& dist)
      : dist_(dist), normal_(0.0, std::sqrt(dist.kind() == EntryKind::Gaussian ? dist.parameter() : 1.0)) {}

  double operator()(Engine& engine) {
    if (dist_.kind() == EntryKind::Gaussian) return normal_(engine);
    return dist_.draw(engine);
  }

 private:
  const EntryDistribution& dist_;
  std::normal_distribution<double> normal_;
};

double double_factorial(int k) {
  double out = 1.0;
  for (int i = k; i > 1; i -= 2) out *= i;
  return out;
}

// E|X|^p for X ~ N(0, 1).
double gaussian_abs_moment(double p) {
  return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

}  // namespace

EntryDistribution EntryDistribution::gaussian(double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("gaussian: variance must be positive");
  return EntryDistribution(EntryKind::Gaussian, variance);
}

EntryDistribution EntryDistribution::rademacher(double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("rademacher: variance must be positive");
  const double s = std::sqrt(variance);
  EntryDistribution d = custom({-s, s}, {0.5, 0.5});
  d.kind_ = EntryKind::Rademacher;
  d.parameter_ = variance;
  return d;
}

EntryDistribution EntryDistribution::symmetric_uniform(double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("symmetric_uniform: variance must be positive");
  return EntryDistribution(EntryKind::SymmetricUniform, variance);
}

EntryDistribution EntryDistribution::scaled_two_point(double m4) {
  if (!(m4 >= 1.0)) throw std::invalid_argument("scaled_two_point: m4 must be >= 1");
  const double q = 1.0 / (4.0 * m4 - 3.0);
  const double s = std::sqrt(0.5);
  const double t = std::sqrt(2.0 * m4 - 1.0);
  std::vector<double> values;
  std::vector<double> probs;
  if (q < 1.0) {
    values.insert(values.end(), {-s, s});
    probs.insert(probs.end(), {(1.0 - q) / 2.0, (1.0 - q) / 2.0});
  }
  values.insert(values.end(), {-t, t});
  probs.insert(probs.end(), {q / 2.0, q / 2.0});
  EntryDistribution d = custom(std::move(values), std::move(probs));
  d.kind_ = EntryKind::ScaledTwoPoint;
  d.parameter_ = m4;
  return d;
}

EntryDistribution EntryDistribution::custom(std::vector<double> values,
                                            std::vector<double> probabilities) {
  if (values.empty() || values.size() != probabilities.size()) {
    throw std::invalid_argument("custom: need equally many values and probabilities");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("custom: probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("custom: probabilities must sum to 1");

  EntryDistribution d(EntryKind::Custom, 0.0);
  d.atoms_ = std::move(values);
  d.weights_ = std::move(probabilities);
  d.cumulative_.resize(d.weights_.size());
  std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cumulative_.begin());
  d.cumulative_.back() = 1.0;

  d.symmetric_ = true;
  for (std::size_t i = 0; i < d.atoms_.size() && d.symmetric_; ++i) {
    double mirrored = 0.0;
    double own = 0.0;
    for (std::size_t j = 0; j < d.atoms_.size(); ++j) {
      if (std::abs(d.atoms_[j] + d.atoms_[i]) <= 1e-14 * std::max(1.0, std::abs(d.atoms_[i]))) {
        mirrored += d.weights_[j];
      }
      if (std::abs(d.atoms_[j] - d.atoms_[i]) <= 1e-14 * std::max(1.0, std::abs(d.atoms_[i]))) {
        own += d.weights_[j];
      }
    }
    d.symmetric_ = std::abs(mirrored - own) <= 1e-14;
  }
  return d;
}

std::string EntryDistribution::name() const {
  switch (kind_) {
    case EntryKind::Gaussian: return "gaussian";
    case EntryKind::Rademacher: return "rademacher";
    case EntryKind::SymmetricUniform: return "uniform";
    case EntryKind::ScaledTwoPoint: return "two_point";
    case EntryKind::Custom: return "custom";
  }
  return "unknown";
}

double EntryDistribution::mean() const { return raw_moment(1); }

double EntryDistribution::raw_moment(int p) const {
  if (p < 0) throw std::invalid_argument("raw_moment: p must be >= 0");
  if (p == 0) return 1.0;
  switch (kind_) {
    case EntryKind::Gaussian:
      return p % 2 == 1 ? 0.0 : std::pow(parameter_, p / 2.0) * double_factorial(p - 1);
    case EntryKind::SymmetricUniform: {
      const double a = std::sqrt(3.0 * parameter_);
      return p % 2 == 1 ? 0.0 : std::pow(a, p) / (p + 1.0);
    }
    default: {
      double sum = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) sum += weights_[i] * std::pow(atoms_[i], p);
      return sum;
    }
  }
}

double EntryDistribution::abs_moment(double p) const { return tail_abs_moment(p, -1.0); }

double EntryDistribution::tail_abs_moment(double p, double threshold) const {
  if (p < 0.0) throw std::invalid_argument("tail_abs_moment: p must be >= 0");
  switch (kind_) {
    case EntryKind::Gaussian: {
      const double sigma = std::sqrt(parameter_);
      const double full = std::pow(sigma, p) * gaussian_abs_moment(p);
      if (threshold <= 0.0) return full;
      const double z = threshold / sigma;
      return full * boost::math::gamma_q((p + 1.0) / 2.0, z * z / 2.0);
    }
    case EntryKind::SymmetricUniform: {
      const double a = std::sqrt(3.0 * parameter_);
      const double t = std::max(threshold, 0.0);
      if (t >= a) return 0.0;
      return (std::pow(a, p + 1.0) - std::pow(t, p + 1.0)) / ((p + 1.0) * a);
    }
    default: {
      double sum = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const double v = std::abs(atoms_[i]);
        if (v > threshold) sum += weights_[i] * std::pow(v, p);
      }
      return sum;
    }
  }
}

double EntryDistribution::truncated_mean(double threshold) const {
  switch (kind_) {
    case EntryKind::Gaussian:
    case EntryKind::SymmetricUniform:
      return 0.0;
    default: {
      double sum = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (std::abs(atoms_[i]) <= threshold) sum += weights_[i] * atoms_[i];
      }
      return sum;
    }
  }
}

double EntryDistribution::sup_abs() const {
  switch (kind_) {
    case EntryKind::Gaussian: return std::numeric_limits<double>::infinity();
    case EntryKind::SymmetricUniform: return std::sqrt(3.0 * parameter_);
    default: {
      double m = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (weights_[i] > 0.0) m = std::max(m, std::abs(atoms_[i]));
      }
      return m;
    }
  }
}

double EntryDistribution::draw(Engine& engine) const {
  switch (kind_) {
    case EntryKind::Gaussian: {
      std::normal_distribution<double> normal(0.0, std::sqrt(parameter_));
      return normal(engine);
    }
    case EntryKind::SymmetricUniform: {
      const double a = std::sqrt(3.0 * parameter_);
      return a * (2.0 * uniform_open01(engine) - 1.0);
    }
    default: {
      const double u = uniform_open01(engine);
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                             atoms_.size() - 1);
      return atoms_[idx];
    }
  }
}

Eigen::MatrixXd sample_wigner(const WignerSpec& spec, Engine& engine) {
  if (spec.n < 1) throw std::invalid_argument("sample_wigner: n must be >= 1");
  const int n = spec.n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  EntrySampler off(spec.offdiag);
  EntrySampler diag(spec.diag);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = scale * diag(engine);
    for (int j = i + 1; j < n; ++j) {
      const double v = scale * off(engine);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

Eigen::MatrixXd sample_wigner(const WignerSpec& spec, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return sample_wigner(spec, engine);
}

Eigen::MatrixXcd sample_wigner_hermitian(const WignerSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw std::invalid_argument("sample_wigner_hermitian: n must be >= 1");
  Engine engine = make_engine(seed);
  const int n = spec.n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double half = std::sqrt(0.5);
  EntrySampler off(spec.offdiag);
  EntrySampler diag(spec.diag);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = {scale * diag(engine), 0.0};
    for (int j = i + 1; j < n; ++j) {
      const double re = half * off(engine);
      const double im = half * off(engine);
      m(i, j) = std::complex<double>(re, im) * scale;
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

Eigen::MatrixXd sample_sample_cov(const SampleCovSpec& spec, Engine& engine) {
  if (spec.n < 1) throw std::invalid_argument("sample_sample_cov: n must be >= 1");
  const int n = spec.n;
  EntrySampler entry(spec.entry);
  Eigen::MatrixXd x(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) x(i, j) = entry(engine);
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / n);
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  return a;
}

Eigen::MatrixXd sample_sample_cov(const SampleCovSpec& spec, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return sample_sample_cov(spec, engine);
}

Eigen::MatrixXcd sample_sample_cov_complex(const SampleCovSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw std::invalid_argument("sample_sample_cov_complex: n must be >= 1");
  Engine engine = make_engine(seed);
  const int n = spec.n;
  const double half = std::sqrt(0.5);
  EntrySampler entry(spec.entry);
  Eigen::MatrixXcd x(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = half * entry(engine);
      x(i, j) = {re, half * entry(engine)};
    }
  }
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  a.selfadjointView<Eigen::Lower>().rankUpdate(x.adjoint(), 1.0 / n);
  a.triangularView<Eigen::StrictlyUpper>() = a.adjoint();
  return a;
}

TruncatedMoments truncated_moments(const EntryDistribution& dist, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("truncated_moments: threshold must be positive");
  return {dist.truncated_mean(threshold), dist.tail_abs_moment(2.0, threshold)};
}

double TruncationMixture::z_plus() const { return a + std::sqrt(std::max(0.0, b2 - a * a)); }
double TruncationMixture::z_minus() const { return a - std::sqrt(std::max(0.0, b2 - a * a)); }

double TruncationMixture::mean_residual() const { return mu * (1.0 - mix_prob) + a * mix_prob; }

double TruncationMixture::second_moment_residual() const {
  return (second_moment - tau2) * (1.0 - mix_prob) + b2 * mix_prob - second_moment;
}

double TruncationMixture::fourth_moment() const {
  const double s2 = std::max(0.0, b2 - a * a);
  const double z4 = a * a * a * a + 6.0 * a * a * s2 + s2 * s2;
  return truncated_fourth * (1.0 - mix_prob) + z4 * mix_prob;
}

double TruncationMixture::max_abs_z() const { return std::abs(a) + std::sqrt(std::max(0.0, b2 - a * a)); }

TruncationMixture build_truncation_mixture(const EntryDistribution& dist, long n, double eps) {
  if (n < 1) throw std::invalid_argument("build_truncation_mixture: n must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("build_truncation_mixture: eps must lie in (0, 1/2)");
  TruncationMixture m;
  m.epsilon_n = std::pow(static_cast<double>(n), 0.5 - eps);
  const TruncatedMoments tm = truncated_moments(dist, m.epsilon_n);
  m.mu = tm.mu;
  m.tau2 = tm.tau2;
  m.second_moment = dist.raw_moment(2);
  m.truncated_fourth = dist.raw_moment(4) - dist.tail_abs_moment(4.0, m.epsilon_n);
  m.mix_prob = std::abs(m.mu) / m.epsilon_n + m.tau2 / (m.epsilon_n * m.epsilon_n);
  if (m.mix_prob > 1.0) {
    throw std::domain_error("build_truncation_mixture: mixing probability exceeds 1; threshold " +
                            std::to_string(m.epsilon_n) + " is too small for this law");
  }
  if (m.mix_prob == 0.0) return m;
  m.a = -m.mu * (1.0 - m.mix_prob) / m.mix_prob;
  m.b2 = (m.second_moment - m.tau2) + m.tau2 / m.mix_prob;
  if (m.b2 < m.a * m.a * (1.0 - 1e-12)) {
    throw std::logic_error("build_truncation_mixture: b^2 < a^2");
  }
  return m;
}

double c0_deficit(const WignerSpec& spec, double p, double eps, long n) {
  if (n < 1) throw std::invalid_argument("c0_deficit: n must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("c0_deficit: eps must lie in (0, 1/2)");
  const double nd = static_cast<double>(n);
  const double threshold = std::pow(nd, 0.5 - eps);
  const double off = 0.5 * nd * (nd - 1.0) * spec.offdiag.tail_abs_moment(4.0, threshold);
  const double diag = nd * spec.diag.tail_abs_moment(2.0, threshold);
  return std::pow(nd, p / 2.0) *
         (std::pow(nd, 4.0 * eps) / (nd * nd) * off + std::pow(nd, 2.0 * eps) / nd * diag);
}

bool c1_check(const EntryDistribution& dist, double c1, int pmax) {
  if (pmax < 1) throw std::invalid_argument("c1_check: pmax must be >= 1");
  if (!dist.symmetric()) return false;
  for (int p = 1; p <= pmax; ++p) {
    const double bound = std::pow(c1 * std::sqrt(static_cast<double>(p)), p);
    if (dist.abs_moment(p) > bound * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace plstat
