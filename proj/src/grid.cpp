#include "netmorph/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netmorph/error.hpp"

namespace netmorph {

Grid::Grid(int n) : n_(n) {
  if (n < 1) throw DimensionError("grid size must be positive, got " + std::to_string(n));
}

ScalarField::ScalarField(Grid grid, double value) : grid_(grid), data_(grid.cells(), value) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), data_(std::move(values)) {
  if (data_.size() != grid_.cells()) {
    throw DimensionError("field has " + std::to_string(data_.size()) + " values, grid needs " +
                         std::to_string(grid_.cells()));
  }
}

ScalarField ScalarField::transposed() const {
  ScalarField out(grid_);
  const int n = grid_.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

TensorField::TensorField(ScalarField a11, ScalarField a12, ScalarField a22)
    : c11(std::move(a11)), c12(std::move(a12)), c22(std::move(a22)) {
  require_same_grid(c11.grid(), c12.grid(), "tensor component c12");
  require_same_grid(c11.grid(), c22.grid(), "tensor component c22");
}

ScalarField& TensorField::component(int k) {
  switch (k) {
    case 0: return c11;
    case 1: return c12;
    case 2: return c22;
  }
  throw DimensionError("tensor component index out of range: " + std::to_string(k));
}

const ScalarField& TensorField::component(int k) const {
  return const_cast<TensorField*>(this)->component(k);
}

TensorField TensorField::reflected() const {
  return TensorField(c22.transposed(), c12.transposed(), c11.transposed());
}

bool TensorField::all_finite() const noexcept {
  return c11.all_finite() && c12.all_finite() && c22.all_finite();
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": grid size " + std::to_string(b.n()) +
                         " does not match " + std::to_string(a.n()));
  }
}

}  // namespace netmorph
