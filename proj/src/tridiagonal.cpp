#include "netmorph/tridiagonal.hpp"

#include <string>

#include "netmorph/error.hpp"

namespace netmorph {

namespace {

[[noreturn]] void breakdown(std::size_t row, double pivot) {
  throw NumericalError("tridiagonal solve broke down at row " + std::to_string(row) +
                       " (pivot " + detail::format_number(pivot) + ")");
}

}  // namespace

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> work) {
  const std::size_t m = diag.size();
  if (lower.size() != m || upper.size() != m || rhs.size() != m || work.size() != m) {
    throw DimensionError("tridiagonal solve: inconsistent lengths");
  }
  if (m == 0) return;
  double pivot = diag[0];
  if (!(pivot > 0.0)) breakdown(0, pivot);
  work[0] = upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t k = 1; k < m; ++k) {
    pivot = diag[k] - lower[k] * work[k - 1];
    if (!(pivot > 0.0)) breakdown(k, pivot);
    work[k] = upper[k] / pivot;
    rhs[k] = (rhs[k] - lower[k] * rhs[k - 1]) / pivot;
  }
  for (std::size_t k = m - 1; k-- > 0;) rhs[k] -= work[k] * rhs[k + 1];
}

}  // namespace netmorph
