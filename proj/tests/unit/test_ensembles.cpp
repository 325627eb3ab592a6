#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "plstat/distances.hpp"
#include "plstat/ensembles.hpp"
#include "plstat/limit_laws.hpp"
#include "plstat/spectra.hpp"

using namespace plstat;
using Catch::Approx;

namespace {

double gauss_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }

// E[|w|^p 1{|w| > t}] for a standard normal, by quadrature.
double gauss_tail(double p, double t) {
  return 2.0 * oracle::integrate([p](double x) { return std::pow(x, p) * gauss_pdf(x); }, t, t + 40.0);
}

std::vector<EntryDistribution> laws() {
  return {EntryDistribution::gaussian(1.0), EntryDistribution::rademacher(1.0),
          EntryDistribution::symmetric_uniform(1.0), EntryDistribution::scaled_two_point(3.0),
          EntryDistribution::scaled_two_point(7.0),
          EntryDistribution::custom({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25})};
}

}  // namespace

TEST_CASE("declared moments", "[ensembles]") {
  CHECK(EntryDistribution::gaussian(1.0).fourth_moment() == Approx(3.0));
  CHECK(EntryDistribution::gaussian(2.0).fourth_moment() == Approx(12.0));
  CHECK(EntryDistribution::rademacher(1.0).fourth_moment() == Approx(1.0));
  CHECK(EntryDistribution::symmetric_uniform(1.0).fourth_moment() == Approx(9.0 / 5.0));
  for (double m4 : {1.0, 1.5, 3.0, 10.0, 400.0}) {
    const auto d = EntryDistribution::scaled_two_point(m4);
    CHECK(d.variance() == Approx(1.0).margin(1e-14));
    CHECK(d.fourth_moment() == Approx(m4).epsilon(1e-13));
  }
  for (const auto& d : laws()) {
    INFO(d.name());
    CHECK(d.mean() == Approx(0.0).margin(1e-15));
    CHECK(d.symmetric());
    for (int p : {1, 3, 5}) CHECK(d.raw_moment(p) == Approx(0.0).margin(1e-14));
  }
  CHECK_THROWS_AS(EntryDistribution::scaled_two_point(0.5), std::invalid_argument);
  CHECK_THROWS_AS(EntryDistribution::custom({1.0, 2.0}, {0.3, 0.3}), std::invalid_argument);
  CHECK_FALSE(EntryDistribution::custom({-1.0, 2.0}, {2.0 / 3, 1.0 / 3}).symmetric());
}

TEST_CASE("sampled variance and fourth moment match the declared values", "[ensembles]") {
  std::uint64_t seed = 100;
  for (const auto& d : laws()) {
    Engine engine = make_engine(seed++);
    const int count = 1000000;
    double s2 = 0, s4 = 0, s8 = 0;
    for (int i = 0; i < count; ++i) {
      const double x = d.draw(engine);
      s2 += x * x;
      s4 += x * x * x * x;
      s8 += std::pow(x, 8);
    }
    s2 /= count;
    s4 /= count;
    s8 /= count;
    const double v = d.variance();
    const double m4 = d.fourth_moment();
    const double se2 = std::sqrt((m4 - v * v) / count);
    const double se4 = std::sqrt((d.raw_moment(8) - m4 * m4) / count);
    INFO(d.name());
    CHECK(std::abs(s2 - v) <= 5 * se2 + 1e-15);
    CHECK(std::abs(s4 - m4) <= 3 * se4 + 1e-15);
  }
}

TEST_CASE("wigner matrices", "[ensembles]") {
  WignerSpec one{1, EntryDistribution::gaussian(1.0), EntryDistribution::gaussian(1.0)};
  const auto m1 = sample_wigner(one, 9);
  REQUIRE(m1.rows() == 1);
  Engine e = make_engine(9);
  std::normal_distribution<double> nd;
  CHECK(m1(0, 0) == nd(e));  // single diagonal draw, 1/sqrt(1) scaling

  WignerSpec spec{50, EntryDistribution::gaussian(1.0), EntryDistribution::gaussian(2.0)};
  const auto a = sample_wigner(spec, 1);
  CHECK(a == a.transpose());
  CHECK(a == sample_wigner(spec, 1));
  const auto b = sample_wigner(spec, 2);
  int equal = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = i; j < 50; ++j) equal += a(i, j) == b(i, j);
  CHECK(equal == 0);

  WignerSpec rad{500, EntryDistribution::rademacher(1.0), EntryDistribution::rademacher(1.0)};
  const auto m = sample_wigner(rad, 3);
  CHECK(std::abs(m(0, 1)) == Approx(1.0 / std::sqrt(500.0)));
  const auto spectrum = eigenvalues_sym(m);
  const auto esd = EmpiricalDistribution::from_samples(spectrum.ordered);
  const LimitLaw sc = LimitLaw::semicircle();
  CHECK(ks_one_sample(esd, [&](double x) { return sc.cdf(x); }) <= 0.05);
}

TEST_CASE("hermitian wigner matrices", "[ensembles]") {
  WignerSpec spec{20, EntryDistribution::gaussian(1.0), EntryDistribution::gaussian(1.0),
                  SymmetryClass::ComplexHermitian};
  const auto h = sample_wigner_hermitian(spec, 5);
  CHECK(h == h.adjoint());
  double off = 0;
  for (int i = 0; i < 20; ++i) CHECK(h(i, i).imag() == 0.0);
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j) off += std::norm(h(i, j));
  CHECK(off / (190.0 / 20.0) == Approx(1.0).epsilon(0.25));
}

TEST_CASE("sample covariance matrices", "[ensembles]") {
  SampleCovSpec one{1, EntryDistribution::gaussian(1.0)};
  const auto a1 = sample_sample_cov(one, 4);
  Engine e = make_engine(4);
  std::normal_distribution<double> nd;
  const double x = nd(e);
  CHECK(a1(0, 0) == Approx(x * x).epsilon(1e-15));
  CHECK(a1(0, 0) >= 0.0);

  SampleCovSpec spec{500, EntryDistribution::rademacher(1.0)};
  const auto a = sample_sample_cov(spec, 8);
  CHECK(a == a.transpose());
  CHECK(a == sample_sample_cov(spec, 8));
  const auto s = eigenvalues_sym(a);
  CHECK(s.ordered.front() >= -1e-10);
  const LimitLaw mp = LimitLaw::marchenko_pastur();
  CHECK(ks_one_sample(EmpiricalDistribution::from_samples(s.ordered), [&](double t) { return mp.cdf(t); }) <=
        0.05);

  const auto c = sample_sample_cov_complex({30, EntryDistribution::gaussian(1.0)}, 3);
  CHECK((c - c.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("truncated moments", "[ensembles]") {
  const auto rad = truncated_moments(EntryDistribution::rademacher(1.0), 2.0);
  CHECK(rad.mu == 0.0);
  CHECK(rad.tau2 == 0.0);
  const auto g = truncated_moments(EntryDistribution::gaussian(1.0), 1.0);
  CHECK(g.mu == 0.0);
  CHECK(g.tau2 == Approx(gauss_tail(2.0, 1.0)).margin(1e-12));
  for (double t : {0.5, 2.0, 3.5}) {
    CHECK(EntryDistribution::gaussian(1.0).tail_abs_moment(4.0, t) == Approx(gauss_tail(4.0, t)).margin(1e-12));
  }
  const auto u = truncated_moments(EntryDistribution::symmetric_uniform(1.0), 1.0);
  const double a = std::sqrt(3.0);
  CHECK(u.tau2 == Approx((a * a * a - 1.0) / (3.0 * a)).margin(1e-14));
  // Asymmetric, mean zero: -1 w.p. 2/3, 2 w.p. 1/3.
  const auto skew = EntryDistribution::custom({-1.0, 2.0}, {2.0 / 3, 1.0 / 3});
  const auto s = truncated_moments(skew, 1.5);
  CHECK(s.mu == Approx(-2.0 / 3).margin(1e-15));
  CHECK(s.tau2 == Approx(4.0 / 3).margin(1e-15));
}

TEST_CASE("truncation mixture preserves mean and second moment", "[ensembles]") {
  const auto rad = build_truncation_mixture(EntryDistribution::rademacher(1.0), 10000, 0.1);
  CHECK(rad.mix_prob == 0.0);
  CHECK(rad.a == 0.0);
  CHECK(rad.b2 == 0.0);
  CHECK(rad.fourth_moment() == Approx(1.0));

  struct Case {
    EntryDistribution dist;
    long n;
    double eps;
  };
  std::vector<Case> cases;
  for (long n : {1000L, 10000L, 100000L}) {
    for (double eps : {0.05, 0.1, 0.2, 0.3}) {
      cases.push_back({EntryDistribution::gaussian(1.0), n, eps});
      cases.push_back({EntryDistribution::scaled_two_point(400.0), n, eps});
    }
  }
  cases.push_back({EntryDistribution::custom({-1.0, 2.0}, {2.0 / 3, 1.0 / 3}), 5, 0.1});

  for (const auto& c : cases) {
    TruncationMixture m;
    try {
      m = build_truncation_mixture(c.dist, c.n, c.eps);
    } catch (const std::domain_error&) {
      continue;  // mixing probability above 1: outside the construction's range
    }
    INFO(c.dist.name() << " n=" << c.n << " eps=" << c.eps);
    CHECK(m.epsilon_n == Approx(std::pow(static_cast<double>(c.n), 0.5 - c.eps)));
    CHECK(m.b2 >= m.a * m.a);
    if (m.mix_prob > 0.0) {
      CHECK(std::max(std::abs(m.z_plus()), std::abs(m.z_minus())) <= 4.0 * m.epsilon_n);
    }
    // Independent evaluation from the two atoms.
    const double zp = m.z_plus();
    const double zm = m.z_minus();
    const double ew2_trunc = c.dist.kind() == EntryKind::Gaussian ? 1.0 - gauss_tail(2.0, m.epsilon_n)
                                                                  : c.dist.raw_moment(2) - m.tau2;
    const double mean = (1 - m.mix_prob) * m.mu + m.mix_prob * 0.5 * (zp + zm);
    const double second = (1 - m.mix_prob) * ew2_trunc + m.mix_prob * 0.5 * (zp * zp + zm * zm);
    CHECK(std::abs(mean) <= 1e-12);
    CHECK(std::abs(second - c.dist.raw_moment(2)) <= 1e-12);
    CHECK(std::abs(m.mean_residual()) <= 1e-12);
    CHECK(std::abs(m.second_moment_residual()) <= 1e-12);
    CHECK(m.fourth_moment() <= 513.0 * c.dist.fourth_moment());
  }
  CHECK_THROWS_AS(build_truncation_mixture(EntryDistribution::custom({-1.0, 2.0}, {2.0 / 3, 1.0 / 3}), 2, 0.1),
                  std::domain_error);
}

TEST_CASE("condition C0 deficit", "[ensembles]") {
  WignerSpec rad{0, EntryDistribution::rademacher(1.0), EntryDistribution::rademacher(1.0)};
  for (long n : {5L, 100L, 100000L}) {
    for (double p : {0.0, 1.0, 3.0}) CHECK(c0_deficit(rad, p, 0.1, n) == 0.0);
  }
  WignerSpec gauss{0, EntryDistribution::gaussian(1.0), EntryDistribution::gaussian(1.0)};
  auto oracle_deficit = [](double p, double eps, double n) {
    const double t = std::pow(n, 0.5 - eps);
    return std::pow(n, p / 2) * (std::pow(n, 4 * eps) / (n * n) * 0.5 * n * (n - 1) * gauss_tail(4.0, t) +
                                 std::pow(n, 2 * eps) / n * n * gauss_tail(2.0, t));
  };
  const double d3 = c0_deficit(gauss, 1.0, 0.1, 1000);
  const double d4 = c0_deficit(gauss, 1.0, 0.1, 10000);
  CHECK(d4 < d3);
  CHECK(d3 == Approx(oracle_deficit(1.0, 0.1, 1000)).epsilon(1e-8));
  CHECK(d4 == Approx(oracle_deficit(1.0, 0.1, 10000)).epsilon(1e-8));
  WignerSpec bounded{0, EntryDistribution::custom({-3.0, 0.0, 3.0}, {1.0 / 18, 8.0 / 9, 1.0 / 18}),
                     EntryDistribution::rademacher(1.0)};
  CHECK(c0_deficit(bounded, 2.0, 0.1, 1000000) == 0.0);
}

TEST_CASE("condition C1", "[ensembles]") {
  CHECK(c1_check(EntryDistribution::rademacher(1.0), 1.0, 20));
  CHECK(c1_check(EntryDistribution::gaussian(1.0), 1.0, 16));
  CHECK_FALSE(c1_check(EntryDistribution::custom({-1.0, 2.0}, {2.0 / 3, 1.0 / 3}), 10.0, 4));
  // Gaussian absolute moments against double factorials for even p.
  const auto g = EntryDistribution::gaussian(1.0);
  double df = 1.0;
  for (int p = 2; p <= 16; p += 2) {
    df *= p - 1;
    CHECK(g.abs_moment(p) == Approx(df).epsilon(1e-12));
    CHECK(df <= std::pow(std::sqrt(p), p));
  }
}
