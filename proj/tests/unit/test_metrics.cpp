#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "netmorph/error.hpp"
#include "netmorph/grid_fields.hpp"
#include "netmorph/metrics.hpp"

using namespace netmorph;

namespace {

/// Independent W1 oracle: integral of |F_mu - F_nu| over the merged support.
double cdf_l1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  std::vector<double> points = mu.support;
  points.insert(points.end(), nu.support.begin(), nu.support.end());
  std::sort(points.begin(), points.end());
  auto cdf = [](const DiscreteMeasure& m, double t) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.support.size(); ++k)
      if (m.support[k] <= t) s += m.weights[k];
    return s;
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    total += std::abs(cdf(mu, points[k]) - cdf(nu, points[k])) * (points[k + 1] - points[k]);
  }
  return total;
}

DiscreteMeasure random_measure(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> pos(-3.0, 3.0), mass(0.0, 1.0);
  const int n = size(rng);
  std::vector<double> s(n), w(n);
  for (int k = 0; k < n; ++k) {
    s[k] = pos(rng);
    w[k] = mass(rng) + 1e-3;
  }
  return make_measure(s, w);
}

/// c11 = c22 = f / sqrt(2), c12 = 0: the Frobenius norm field is f.
TensorField from_norm(const ScalarField& f) {
  TensorField c(f.grid());
  for (std::size_t m = 0; m < f.size(); ++m) {
    c.c11.values()[m] = f.values()[m] / std::sqrt(2.0);
    c.c22.values()[m] = f.values()[m] / std::sqrt(2.0);
  }
  return c;
}

/// F* + K / N^q with smooth positive F* and K sampled at cell centers.
TensorField synthetic(int n, double q) {
  const Grid g(n);
  ScalarField f(g);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = g.x(i), y = g.y(j);
      const double star = 1.0 + 0.5 * std::sin(3.0 * x) * std::cos(2.0 * y) + x * y;
      const double k = std::exp(-8.0 * ((x - 0.3) * (x - 0.3) + (y - 0.6) * (y - 0.6)));
      f(i, j) = star + k / std::pow(static_cast<double>(n), q);
    }
  }
  return from_norm(f);
}

}  // namespace

TEST_CASE("Wasserstein examples") {
  const DiscreteMeasure a = make_measure({0.0}, {1.0});
  const DiscreteMeasure b = make_measure({1.0}, {1.0});
  for (double p : {1.0, 2.0, 3.5}) CHECK(wasserstein_1d(a, b, p) == doctest::Approx(1.0));
  const DiscreteMeasure two = make_measure({0.0, 1.0}, {1.0, 1.0});
  const DiscreteMeasure half = make_measure({0.5}, {1.0});
  CHECK(wasserstein_1d(two, half) == doctest::Approx(0.5));
  CHECK(wasserstein_1d(two, two) == 0.0);
  CHECK(wasserstein_1d(two, half, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("invalid measures are rejected") {
  CHECK_THROWS_AS(wasserstein_1d({{0.0}, {0.5}}, {{0.0}, {1.0}}), NumericalError);
  CHECK_THROWS_AS(wasserstein_1d({{0.0, 1.0}, {1.5, -0.5}}, {{0.0}, {1.0}}), NumericalError);
  CHECK_THROWS_AS(wasserstein_1d({{0.0}, {1.0}}, {{0.0, 1.0}, {1.0}}), NumericalError);
  CHECK_THROWS_AS(wasserstein_1d({{0.0}, {1.0}}, {{0.0}, {1.0}}, 0.5), NumericalError);
  CHECK_THROWS_AS(make_measure({0.0, 1.0}, {0.0, 0.0}), NumericalError);
}

TEST_CASE("Wasserstein metric axioms on random measures") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const DiscreteMeasure x = random_measure(rng), y = random_measure(rng), z = random_measure(rng);
    for (double p : {1.0, 2.0}) {
      const double xy = wasserstein_1d(x, y, p), yx = wasserstein_1d(y, x, p);
      const double xz = wasserstein_1d(x, z, p), zy = wasserstein_1d(z, y, p);
      CHECK(xy >= 0.0);
      CHECK(xy == yx);
      CHECK(wasserstein_1d(x, x, p) <= 1e-12);
      CHECK(xy <= xz + zy + 1e-12);
    }
  }
}

TEST_CASE("W1 equals the L1 distance of the distribution functions") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const DiscreteMeasure x = random_measure(rng), y = random_measure(rng);
    CHECK(wasserstein_1d(x, y) == doctest::Approx(cdf_l1(x, y)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("translation") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    DiscreteMeasure x = random_measure(rng), y = random_measure(rng);
    const double before = wasserstein_1d(x, y, 2.0);
    const double s = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    DiscreteMeasure xs = x, ys = y;
    for (double& v : xs.support) v += s;
    for (double& v : ys.support) v += s;
    CHECK(wasserstein_1d(xs, ys, 2.0) == doctest::Approx(before).epsilon(1e-12).scale(1.0));
    CHECK(wasserstein_1d(x, xs) == doctest::Approx(std::abs(s)).epsilon(1e-12));
  }
}

TEST_CASE("field embedding") {
  const Grid g(4);
  const DiscreteMeasure uniform = field_to_measure(ScalarField(g, 3.0));
  for (std::size_t k = 0; k < 16; ++k) {
    CHECK(uniform.weights[k] == doctest::Approx(1.0 / 16.0));
    CHECK(uniform.support[k] == doctest::Approx((k + 0.5) / 16.0));
  }
  ScalarField one(g);
  one(2, 1) = 5.0;
  const DiscreteMeasure point = field_to_measure(one);
  CHECK(wasserstein_1d(point, make_measure({(2 * 4 + 1 + 0.5) / 16.0}, {1.0})) <= 1e-15);
  CHECK_THROWS_AS(field_to_measure(ScalarField(g)), NumericalError);
  ScalarField negative(g, 1.0);
  negative(0, 0) = -1.0;
  CHECK_THROWS_AS(field_to_measure(negative), NumericalError);
}

TEST_CASE("error_wasserstein on exact refinements and scalings") {
  const TensorField coarse = initial_condition(Grid(8), InitialCondition::ConstantOne);
  const TensorField fine = initial_condition(Grid(16), InitialCondition::ConstantOne);
  CHECK(error_wasserstein(coarse, fine) == 0.0);
  CHECK(error_richardson(coarse, fine) == 0.0);
  CHECK(error_wasserstein(coarse, coarse) == 0.0);

  const TensorField a = synthetic(8, 2.0), b = synthetic(16, 2.0);
  TensorField a3 = a, b3 = b;
  for (int k = 0; k < 3; ++k) {
    for (double& v : a3.component(k).values()) v *= 3.0;
    for (double& v : b3.component(k).values()) v *= 3.0;
  }
  for (Embedding e : {Embedding::RowMajor, Embedding::Sliced}) {
    WassersteinOptions o;
    o.embedding = e;
    CHECK(error_wasserstein(a3, b3, o) == doctest::Approx(error_wasserstein(a, b, o)).epsilon(1e-12));
    CHECK(error_wasserstein(a, b, o) > 0.0);
  }
  CHECK_THROWS_AS(error_wasserstein(a, synthetic(12, 2.0)), DimensionError);
  CHECK_THROWS_AS(error_richardson(TensorField(Grid(4)), TensorField(Grid(8))), NumericalError);
}

TEST_CASE("synthetic second-order family has Wasserstein order 2") {
  std::vector<double> errors;
  for (int n : {16, 32, 64, 128}) errors.push_back(error_wasserstein(synthetic(n, 2.0), synthetic(2 * n, 2.0)));
  for (std::size_t k = 1; k < errors.size(); ++k) {
    CHECK(std::log2(errors[k - 1] / errors[k]) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("Richardson error of u* + K h^2 shrinks by four") {
  // Constant u* and K: restriction is exact, so the numerators scale by 4
  // exactly and only the normalization differs from the limit ratio.
  auto family = [](int n) {
    const double v = 2.0 + 7.0 / (static_cast<double>(n) * n);
    TensorField c{Grid(n)};
    for (double& x : c.c11.values()) x = v;
    for (double& x : c.c12.values()) x = 0.25 * v;
    for (double& x : c.c22.values()) x = v;
    return c;
  };
  for (int n : {8, 16, 32}) {
    const double e1 = error_richardson(family(n), family(2 * n));
    const double e2 = error_richardson(family(2 * n), family(4 * n));
    const double v1 = 2.0 + 7.0 / (n * n), v2 = 2.0 + 7.0 / (4.0 * n * n);
    CHECK(e1 / e2 == doctest::Approx(4.0 * v2 / v1).epsilon(1e-12));
  }
  CHECK(error_richardson(family(512), family(1024)) / error_richardson(family(1024), family(2048)) ==
        doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("Richardson error counts c12 twice") {
  TensorField a{Grid(3)}, b{Grid(3)};
  for (double& v : a.c11.values()) v = 1.0;
  b = a;
  for (double& v : b.c12.values()) v = 0.1;
  CHECK(error_richardson(a, b) == doctest::Approx(std::sqrt(2.0) * 0.1));
}

TEST_CASE("resolution validation") {
  CHECK_NOTHROW(validate_resolutions({100, 200}));
  CHECK_NOTHROW(validate_resolutions({25, 50, 100, 200}));
  CHECK_THROWS_AS(validate_resolutions({100, 300}), ConfigError);
  CHECK_THROWS_AS(validate_resolutions({100}), ConfigError);
  CHECK_THROWS_AS(validate_resolutions({200, 100}), ConfigError);
  CHECK_THROWS_AS(validate_resolutions({2, 4}), ConfigError);
}

TEST_CASE("convergence study") {
  SUBCASE("identity dynamics gives zero errors") {
    const ConvergenceReport r = convergence_study({8, 16, 32}, [](int n) {
      return initial_condition(Grid(n), InitialCondition::ConstantOne);
    });
    CHECK(r.complete());
    REQUIRE(r.error_w.size() == 2);
    CHECK(r.error_w[0] == 0.0);
    CHECK(r.error_r[1] == 0.0);
  }
  SUBCASE("constructed exponents are recovered") {
    for (double q : {1.0, 2.0}) {
      const ConvergenceReport r =
          convergence_study({16, 32, 64, 128}, [q](int n) { return synthetic(n, q); });
      REQUIRE(r.order_w.size() == 2);
      for (double order : r.order_w) CHECK(order == doctest::Approx(q).epsilon(0.05));
    }
  }
  SUBCASE("one row for two resolutions") {
    const ConvergenceReport r = convergence_study({8, 16}, [](int n) { return synthetic(n, 2.0); });
    CHECK(r.error_w.size() == 1);
    CHECK(r.order_w.empty());
    std::ostringstream os;
    write_convergence_csv(os, r);
    const std::string text = os.str();
    CHECK(text.rfind("N,error_w,error_r,order_w\n8,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.back() == '\n');
    CHECK(text[text.size() - 2] == ',');
  }
  SUBCASE("a failing resolution is recorded") {
    const ConvergenceReport r = convergence_study({8, 16, 32}, [](int n) -> TensorField {
      if (n == 32) throw std::runtime_error("boom");
      return synthetic(n, 2.0);
    });
    CHECK_FALSE(r.complete());
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0] == "N=32: boom");
    CHECK(std::isfinite(r.error_w[0]));
    CHECK(std::isnan(r.error_w[1]));
    CHECK(std::isnan(r.order_w[0]));
    std::ostringstream table;
    write_convergence_table(table, r);
    CHECK(table.str().find("failed: N=32: boom") != std::string::npos);
  }
  CHECK_THROWS_AS(convergence_study({100, 300}, [](int) -> TensorField {
                    throw std::logic_error("must not run");
                  }),
                  ConfigError);
}
