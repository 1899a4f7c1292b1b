#include <cmath>
#include <numbers>

#include "doctest.h"
#include "netmorph/error.hpp"
#include "netmorph/grid_fields.hpp"
#include "netmorph/numeric.hpp"

using namespace netmorph;

TEST_CASE("grid geometry") {
  const Grid g(4);
  CHECK(g.h() * g.n() == 1.0);
  CHECK(g.x(0) == doctest::Approx(0.125));
  CHECK(g.y(3) == doctest::Approx(0.875));
  CHECK(g.index(1, 2) == 6);
  for (int i = 0; i < g.n(); ++i) {
    CHECK(g.x(i) > 0.0);
    CHECK(g.x(i) < 1.0);
  }
  CHECK_THROWS_AS(Grid(0), DimensionError);
}

TEST_CASE("field containers check sizes and grids") {
  CHECK_THROWS_AS(ScalarField(Grid(3), std::vector<double>(8)), DimensionError);
  CHECK_THROWS_AS(TensorField(ScalarField(Grid(3)), ScalarField(Grid(4)), ScalarField(Grid(3))),
                  DimensionError);
  ScalarField f(Grid(3));
  f(0, 2) = 5.0;
  CHECK(f.transposed()(2, 0) == 5.0);
  TensorField t(Grid(3));
  t.c11(0, 1) = 2.0;
  t.c22(1, 0) = 7.0;
  const TensorField r = t.reflected();
  CHECK(r.c22(1, 0) == 2.0);
  CHECK(r.c11(0, 1) == 7.0);
}

TEST_CASE("params validation names the key") {
  ModelParams p;
  p.r = -1.0;
  try {
    p.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "r");
  }
  SourceSpec s;
  s.x0 = 1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("build_source: constant bump gives zero field") {
  const Grid g(2);
  SourceSpec s;
  s.sigma = 1e-300;
  const ScalarField e = build_source(g, s);
  for (double v : e.values()) CHECK(std::abs(v) <= 1e-15);
}

TEST_CASE("build_source matches direct evaluation and sums to zero") {
  const Grid g(4);
  SourceSpec s{0.5, 0.5, 1.0};
  const ScalarField e = build_source(g, s);
  double mean = 0.0;
  std::vector<double> raw;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double x = (i + 0.5) / 4.0, y = (j + 0.5) / 4.0;
      raw.push_back(std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5))));
      mean += raw.back() / 16.0;
    }
  }
  for (int k = 0; k < 16; ++k) CHECK(e.values()[k] == doctest::Approx(raw[k] - mean).epsilon(1e-14));

  for (int n : {7, 100, 257}) {
    const Grid gn(n);
    const ScalarField sn = build_source(gn, SourceSpec{});
    CHECK(std::abs(pairwise_sum(sn.values())) <= 1e-12 * n * n);
    // the bump peaks at the cell nearest (0.25, 0.25)
    int bi = 0, bj = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (sn(i, j) > sn(bi, bj)) {
          bi = i;
          bj = j;
        }
    CHECK(std::abs(gn.x(bi) - 0.25) <= gn.h());
    CHECK(std::abs(gn.y(bj) - 0.25) <= gn.h());
  }
}

TEST_CASE("initial conditions") {
  const Grid g(5);
  const TensorField one = initial_condition(g, InitialCondition::ConstantOne);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      CHECK(one.c11(i, j) == 1.0);
      CHECK(one.c22(i, j) == 1.0);
      CHECK(one.c12(i, j) == 0.0);
    }
  // The center cell of an odd grid sits on the diagonal at (0.5, 0.5).
  const TensorField ridge = initial_condition(g, InitialCondition::DiagonalRidge);
  CHECK(ridge.c11(2, 2) == doctest::Approx(1.0));
  const TensorField zero = initial_condition(g, InitialCondition::Zero);
  CHECK(max_abs(zero.c11.values()) == 0.0);

  for (auto kind : {InitialCondition::ConstantOne, InitialCondition::DiagonalRidge,
                    InitialCondition::Zero}) {
    const TensorField c = initial_condition(Grid(8), kind);
    CHECK(c.reflected() == c);
    for (std::size_t k = 0; k < c.c11.size(); ++k) {
      CHECK(c.c11.values()[k] >= 0.0);
      CHECK(c.c22.values()[k] >= 0.0);
    }
  }
  CHECK(initial_condition_from_string(to_string(InitialCondition::DiagonalRidge)) ==
        InitialCondition::DiagonalRidge);
  CHECK_THROWS_AS(initial_condition_from_string("ridge"), ConfigError);
}

TEST_CASE("central differences") {
  const Grid g(6);
  CHECK(max_abs(dx(ScalarField(g, 3.0)).values()) == 0.0);
  CHECK(max_abs(dy(ScalarField(g, 3.0)).values()) == 0.0);

  ScalarField u(g);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) u(i, j) = 2.0 * g.x(i) - 3.0 * g.y(j);
  const ScalarField ux = dx(u), uy = dy(u);
  for (int i = 1; i < 5; ++i)
    for (int j = 1; j < 5; ++j) {
      CHECK(ux(i, j) == doctest::Approx(2.0).epsilon(1e-13));
      CHECK(uy(i, j) == doctest::Approx(-3.0).epsilon(1e-13));
    }
  // Reflected ghost: one-sided half difference at the boundary.
  CHECK(ux(0, 2) == doctest::Approx((u(1, 2) - u(0, 2)) * 3.0));
  CHECK_THROWS_AS(dx(ScalarField(Grid(2))), DimensionError);
}

TEST_CASE("central differences converge at order 2 in the interior") {
  std::vector<double> errors;
  for (int n : {50, 100, 200}) {
    const Grid g(n);
    ScalarField u(g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) u(i, j) = std::sin(2.0 * std::numbers::pi * g.x(i));
    const ScalarField d = dx(u);
    double err = 0.0;
    for (int i = 1; i < n - 1; ++i) {
      err = std::max(err, std::abs(d(i, 0) - 2.0 * std::numbers::pi *
                                                 std::cos(2.0 * std::numbers::pi * g.x(i))));
    }
    errors.push_back(err);
  }
  for (std::size_t k = 1; k < errors.size(); ++k) {
    CHECK(std::log2(errors[k - 1] / errors[k]) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("restriction") {
  const Grid coarse(3), fine(6);
  CHECK(restrict_to_coarse(ScalarField(fine, 4.0), coarse) == ScalarField(coarse, 4.0));

  ScalarField f(fine);
  f(2, 2) = 1.0;
  f(3, 2) = 2.0;
  f(2, 3) = 3.0;
  f(3, 3) = 4.0;
  CHECK(restrict_to_coarse(f, coarse)(1, 1) == 2.5);

  ScalarField lin(fine);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) lin(i, j) = fine.x(i) + 0.5 * fine.y(j);
  const ScalarField r = restrict_to_coarse(lin, coarse);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(r(i, j) == doctest::Approx(coarse.x(i) + 0.5 * coarse.y(j)));
  CHECK(pairwise_sum(r.values()) / 9.0 == doctest::Approx(pairwise_sum(lin.values()) / 36.0));

  CHECK_THROWS_AS(restrict_to_coarse(ScalarField(Grid(5)), coarse), DimensionError);
}
