#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace netmorph {

/// Cell-centered uniform mesh on the unit square with n cells per axis.
///
/// Indices are 0-based; cell (i, j) has center ((i + 1/2) h, (j + 1/2) h) with
/// i the x-index and j the y-index. Storage of every field is row-major in
/// (i, j), so the flat index is i * n + j.
class Grid {
 public:
  explicit Grid(int n);

  int n() const noexcept { return n_; }
  double h() const noexcept { return 1.0 / n_; }
  std::size_t cells() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  double x(int i) const noexcept { return (i + 0.5) / n_; }
  double y(int j) const noexcept { return (j + 0.5) / n_; }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_;
};

/// One real value per cell.
class ScalarField {
 public:
  explicit ScalarField(Grid grid, double value = 0.0);
  ScalarField(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  int n() const noexcept { return grid_.n(); }

  double& operator()(int i, int j) noexcept { return data_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return data_[grid_.index(i, j)]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  /// Grid transposition (i, j) -> (j, i).
  ScalarField transposed() const;

  bool all_finite() const noexcept;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// Symmetric 2x2 tensor per cell, stored as three component fields.
struct TensorField {
  explicit TensorField(Grid grid, double value = 0.0)
      : c11(grid, value), c12(grid, value), c22(grid, value) {}
  TensorField(ScalarField a11, ScalarField a12, ScalarField a22);

  const Grid& grid() const noexcept { return c11.grid(); }
  int n() const noexcept { return c11.n(); }

  ScalarField& component(int k);
  const ScalarField& component(int k) const;

  /// Transposes the grid and swaps c11 with c22, which is how a diagonal
  /// reflection of the domain acts on a tensor field.
  TensorField reflected() const;

  bool all_finite() const noexcept;

  friend bool operator==(const TensorField&, const TensorField&) = default;

  ScalarField c11;
  ScalarField c12;
  ScalarField c22;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace netmorph
