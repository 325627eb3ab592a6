#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "plstat/rng.hpp"
#include "plstat/test_function.hpp"

using namespace plstat;
using Catch::Approx;

TEST_CASE("catalog holds the advertised functions", "[test_function]") {
  for (const char* name : {"x", "x2", "x3", "sin", "cos2x", "lorentz", "bump"}) {
    CHECK(find_test_function(name).name == name);
  }
  CHECK(find_test_function("identity").name == "x");
  CHECK(find_test_function("square").name == "x2");
  CHECK(find_test_function("constant")(12.5) == 1.0);
  CHECK_THROWS_AS(find_test_function("nope"), std::invalid_argument);
}

TEST_CASE("Lipschitz bounds hold on random pairs in [-2, 4]", "[test_function]") {
  Engine engine = make_engine(11);
  for (const auto& f : catalog()) {
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double x = -2.0 + 6.0 * uniform_open01(engine);
      const double y = -2.0 + 6.0 * uniform_open01(engine);
      if (x == y) continue;
      worst = std::max(worst, std::abs(f(x) - f(y)) / std::abs(x - y));
    }
    INFO(f.name);
    CHECK(worst <= f.lipschitz_bound * (1.0 + 1e-12));
  }
}

TEST_CASE("analytic derivatives agree with central differences", "[test_function]") {
  for (const auto& f : catalog()) {
    for (double x : {-1.7, -0.3, 0.0, 0.8, 1.2, 2.9}) {
      const double h = 1e-6;
      const double numeric = (f(x + h) - f(x - h)) / (2 * h);
      INFO(f.name << " at " << x);
      CHECK(f.derivative(x) == Approx(numeric).margin(1e-6));
    }
  }
}

TEST_CASE("bump is smooth, compactly supported and peaks at 1", "[test_function]") {
  const auto& b = find_test_function("bump");
  CHECK(b(1.0) == Approx(1.0));
  CHECK(b(0.5) == 0.0);
  CHECK(b(1.5) == 0.0);
  CHECK(b(-1.0) == 0.0);
  CHECK(b(0.50001) < 1e-10);
}

TEST_CASE("constant functions have zero derivative and Lipschitz bound", "[test_function]") {
  const TestFunction c = constant_function(-3.0);
  CHECK(c(0.2) == -3.0);
  CHECK(c.derivative(0.2) == 0.0);
  CHECK(c.lipschitz_bound == 0.0);
}

TEST_CASE("seed derivation is deterministic and separates lanes and indices", "[rng]") {
  CHECK(derive_seed(1, 2, Lane::Matrix) == derive_seed(1, 2, Lane::Matrix));
  CHECK(derive_seed(1, 2, Lane::Matrix) != derive_seed(1, 2, Lane::Permutation));
  CHECK(derive_seed(1, 2, Lane::Matrix) != derive_seed(1, 3, Lane::Matrix));
  CHECK(derive_seed(1, 2, Lane::Matrix) != derive_seed(2, 2, Lane::Matrix));
  Engine a = make_engine(5, 7, Lane::Sampling);
  Engine b = make_engine(5, 7, Lane::Sampling);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
}

TEST_CASE("uniform helpers stay in range", "[rng]") {
  Engine engine = make_engine(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = uniform_open01(engine);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    ++counts[uniform_index(engine, 7)];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 4 * std::sqrt(10000.0 * 6 / 7));
}
