#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "oracles.hpp"
#include "plstat/ensembles.hpp"
#include "plstat/spectra.hpp"

using namespace plstat;
using Catch::Approx;

TEST_CASE("2x2 closed form and identity", "[spectra]") {
  const double a = 0.7, b = -1.3, c = 2.2;
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  const auto s = eigenvalues_sym(m);
  const double mid = (a + c) / 2, r = std::sqrt((a - c) * (a - c) / 4 + b * b);
  CHECK(s.ordered[0] == Approx(mid - r).epsilon(1e-14));
  CHECK(s.ordered[1] == Approx(mid + r).epsilon(1e-14));
  const auto id = eigenvalues_sym(Eigen::MatrixXd::Identity(5, 5));
  CHECK(id.ordered == std::vector<double>(5, 1.0));
}

TEST_CASE("agrees with a Jacobi rotation oracle", "[spectra]") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto m = sample_wigner({50, EntryDistribution::gaussian(1.0), EntryDistribution::gaussian(1.0)}, seed);
    const auto s = eigenvalues_sym(m);
    const auto ref = oracle::jacobi_eigenvalues(m);
    REQUIRE(s.n() == 50);
    for (int i = 0; i < 50; ++i) CHECK(s.ordered[i] == Approx(ref[i]).margin(1e-8));
    CHECK(std::is_sorted(s.ordered.begin(), s.ordered.end()));
  }
}

TEST_CASE("eigenpair residuals from a vector-producing solve", "[spectra]") {
  const auto m = sample_wigner({80, EntryDistribution::rademacher(1.0), EntryDistribution::rademacher(1.0)}, 17);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(m);
  const double norm = m.operatorNorm();
  for (int j : {0, 13, 40, 79}) {
    const Eigen::VectorXd v = full.eigenvectors().col(j);
    CHECK((m * v - full.eigenvalues()(j) * v).norm() / norm <= 1e-9);
  }
  const auto s = eigenvalues_sym(m);
  for (int j = 0; j < 80; ++j) CHECK(s.ordered[j] == Approx(full.eigenvalues()(j)).margin(1e-12));
}

TEST_CASE("rejects non-symmetric input", "[spectra]") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2.001, 1;
  CHECK_THROWS_AS(eigenvalues_sym(m), std::invalid_argument);
  CHECK_THROWS_AS(eigenvalues_sym(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
  Eigen::MatrixXcd h(2, 2);
  h << 1, std::complex<double>(0, 1), std::complex<double>(0, 1), 1;
  CHECK_THROWS_AS(eigenvalues_herm(h), std::invalid_argument);
}

TEST_CASE("hermitian eigenvalues", "[spectra]") {
  Eigen::MatrixXcd h(2, 2);
  h << 2, std::complex<double>(0, 1), std::complex<double>(0, -1), 2;
  const auto s = eigenvalues_herm(h);
  CHECK(s.ordered[0] == Approx(1.0));
  CHECK(s.ordered[1] == Approx(3.0));
}

TEST_CASE("trace identities", "[spectra]") {
  const auto m = sample_wigner({200, EntryDistribution::gaussian(1.0), EntryDistribution::gaussian(1.0)}, 21);
  const auto s = eigenvalues_sym(m);
  const double tr = m.trace();
  const double fro = m.squaredNorm();
  CHECK(linear_stat(s, find_test_function("x")) == Approx(tr).margin(1e-8 * 200));
  CHECK(linear_stat(s, find_test_function("x2")) == Approx(fro).epsilon(1e-8));
  CHECK(linear_stat(s, constant_function(1.0)) == 200.0);
  // n E psi^2 = n, fluctuation O(1) at this scale; allow a generous band.
  CHECK(std::abs(linear_stat(s, find_test_function("x2")) - 200.0) < 4.0 * std::sqrt(200.0));
}

TEST_CASE("partial statistics boundary cases", "[spectra]") {
  const auto s = eigenvalues_sym(
      sample_wigner({30, EntryDistribution::gaussian(1.0), EntryDistribution::gaussian(1.0)}, 4));
  for (const auto& f : catalog()) {
    CHECK(partial_stat_unordered(s, f, 0, 9).value == Approx(linear_stat(s, f)).margin(1e-12));
    CHECK(partial_stat_sampling(s, f, 0, 9).value == linear_stat(s, f));
    CHECK(partial_stat_unordered(s, f, 30, 9).value == 0.0);
    CHECK(partial_stat_sampling(s, f, 30, 9).value == Approx(0.0).margin(1e-12));
  }
  CHECK_THROWS_AS(partial_stat_unordered(s, find_test_function("x"), 31, 1), std::invalid_argument);
  CHECK_THROWS_AS(partial_stat_sampling(s, find_test_function("x"), -1, 1), std::invalid_argument);
  const auto r = partial_stat_sampling(s, find_test_function("x"), 3, 5);
  CHECK(r.k == 3);
  CHECK(r.mode == PartialMode::SamplingComplement);
  CHECK(partial_stat_unordered(s, find_test_function("x"), 3, 5).value ==
        partial_stat_unordered(s, find_test_function("x"), 3, 5).value);
}

TEST_CASE("both partial modes give the same exact distribution", "[spectra]") {
  // Integer eigenvalues and f = x keep every sum exact.
  for (int n : {4, 5, 6}) {
    Spectrum s;
    for (int i = 1; i <= n; ++i) s.ordered.push_back(static_cast<double>(i * i));
    const auto& f = find_test_function("x");
    for (int k = 0; k <= n; ++k) {
      std::map<double, long> prefix_counts;
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        ++prefix_counts[prefix_sum(s, f, perm, k)];
      } while (std::next_permutation(perm.begin(), perm.end()));

      // Ordered k-samples without replacement, each weighted by (n-k)! so the
      // totals match the n! permutations.
      std::map<double, long> sample_counts;
      long weight = 1;
      for (int i = 2; i <= n - k; ++i) weight *= i;
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::function<void(std::vector<int>&)> rec = [&](std::vector<int>& chosen) {
        if (static_cast<int>(chosen.size()) == k) {
          sample_counts[complement_sum(s, f, chosen)] += weight;
          return;
        }
        for (int t = 0; t < n; ++t) {
          if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
          chosen.push_back(t);
          rec(chosen);
          chosen.pop_back();
        }
      };
      std::vector<int> chosen;
      rec(chosen);
      INFO("n=" << n << " k=" << k);
      CHECK(prefix_counts == sample_counts);
    }
  }
}

TEST_CASE("statistics depend only on the eigenvalue multiset", "[spectra]") {
  Spectrum a{{-1.0, 0.5, 2.0, 3.0}};
  std::vector<int> p1{0, 1, 2, 3}, p2{3, 2, 1, 0};
  const auto& f = find_test_function("sin");
  CHECK(prefix_sum(a, f, p1, 0) == Approx(prefix_sum(a, f, p2, 0)).margin(1e-15));
  CHECK(prefix_sum(a, f, p1, 2) == Approx(f(-1.0) + f(0.5)));
  CHECK(prefix_sum(a, f, p2, 2) == Approx(f(3.0) + f(2.0)));
}

TEST_CASE("random permutations are uniform", "[spectra]") {
  Engine engine = make_engine(77);
  std::map<std::vector<int>, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[random_permutation(3, engine)];
  REQUIRE(counts.size() == 6);
  for (const auto& [perm, c] : counts) CHECK(std::abs(c - draws / 6.0) < 4 * std::sqrt(draws / 6.0));
}

TEST_CASE("alpha", "[spectra]") {
  CHECK(alpha(100, 50) == Approx(0.2).epsilon(1e-15));
  CHECK(alpha(400, 100) == Approx(std::sqrt(400.0 / 30000.0)).epsilon(1e-15));
  CHECK(alpha(400, 100) == Approx(0.11547).margin(1e-5));
  CHECK(alpha(1000, 1) == Approx(std::sqrt(1000.0 / 999.0)));
  CHECK(alpha(1000, 300) == alpha(1000, 700));
  CHECK_THROWS_AS(alpha(10, 0), std::invalid_argument);
  CHECK_THROWS_AS(alpha(10, 10), std::invalid_argument);
}
