#include "netmorph/grid_fields.hpp"

#include <cmath>
#include <string>

#include "netmorph/error.hpp"
#include "netmorph/numeric.hpp"

namespace netmorph {

std::string_view to_string(InitialCondition kind) noexcept {
  switch (kind) {
    case InitialCondition::ConstantOne: return "constant_one";
    case InitialCondition::DiagonalRidge: return "diagonal_ridge";
    case InitialCondition::Zero: return "zero";
  }
  return "unknown";
}

InitialCondition initial_condition_from_string(std::string_view name) {
  if (name == "constant_one") return InitialCondition::ConstantOne;
  if (name == "diagonal_ridge") return InitialCondition::DiagonalRidge;
  if (name == "zero") return InitialCondition::Zero;
  throw ConfigError("ic", 0,
                    "unknown initial condition '" + std::string(name) +
                        "' (expected constant_one, diagonal_ridge or zero)");
}

ScalarField build_source(const Grid& grid, const SourceSpec& spec) {
  spec.validate();
  ScalarField e(grid);
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    const double ddx = grid.x(i) - spec.x0;
    for (int j = 0; j < n; ++j) {
      const double ddy = grid.y(j) - spec.y0;
      e(i, j) = std::exp(-spec.sigma * (ddx * ddx + ddy * ddy));
    }
  }
  const double mean = pairwise_sum(e.values()) / static_cast<double>(grid.cells());
  for (double& v : e.values()) v -= mean;
  return e;
}

TensorField initial_condition(const Grid& grid, InitialCondition kind) {
  TensorField c(grid);
  if (kind == InitialCondition::Zero) return c;
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v = 1.0;
      if (kind == InitialCondition::DiagonalRidge) {
        const double x = grid.x(i);
        const double y = grid.y(j);
        v = (2.0 - std::abs(x + y)) * std::exp(-10.0 * std::abs(x - y));
      }
      c.c11(i, j) = v;
      c.c22(i, j) = v;
    }
  }
  return c;
}

namespace {

void require_derivative_size(const ScalarField& u) {
  if (u.n() < 3) {
    throw DimensionError("derivative operators need n >= 3, got " + std::to_string(u.n()));
  }
}

}  // namespace

ScalarField dx(const ScalarField& u) {
  require_derivative_size(u);
  const int n = u.n();
  const double inv2h = 0.5 * n;
  ScalarField out(u.grid());
  for (int i = 0; i < n; ++i) {
    const int ip = i + 1 < n ? i + 1 : i;
    const int im = i > 0 ? i - 1 : i;
    for (int j = 0; j < n; ++j) out(i, j) = (u(ip, j) - u(im, j)) * inv2h;
  }
  return out;
}

ScalarField dy(const ScalarField& u) {
  require_derivative_size(u);
  const int n = u.n();
  const double inv2h = 0.5 * n;
  ScalarField out(u.grid());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int jp = j + 1 < n ? j + 1 : j;
      const int jm = j > 0 ? j - 1 : j;
      out(i, j) = (u(i, jp) - u(i, jm)) * inv2h;
    }
  }
  return out;
}

ScalarField restrict_to_coarse(const ScalarField& fine, const Grid& coarse) {
  if (fine.n() != 2 * coarse.n()) {
    throw DimensionError("restriction needs a fine grid of size " +
                         std::to_string(2 * coarse.n()) + ", got " + std::to_string(fine.n()));
  }
  ScalarField out(coarse);
  const int n = coarse.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out(i, j) = 0.25 * ((fine(2 * i, 2 * j) + fine(2 * i + 1, 2 * j)) +
                          (fine(2 * i, 2 * j + 1) + fine(2 * i + 1, 2 * j + 1)));
    }
  }
  return out;
}

TensorField restrict_to_coarse(const TensorField& fine, const Grid& coarse) {
  return TensorField(restrict_to_coarse(fine.c11, coarse), restrict_to_coarse(fine.c12, coarse),
                     restrict_to_coarse(fine.c22, coarse));
}

}  // namespace netmorph
