#pragma once

#include <span>

namespace netmorph {

/// Solves a tridiagonal system in place with the Thomas algorithm.
///
/// `lower[k]` couples row k to row k-1 (lower[0] is ignored), `upper[k]`
/// couples row k to row k+1 (the last one is ignored). `rhs` is overwritten
/// with the solution and `work` (same length) receives the modified upper
/// diagonal. No pivoting: a pivot <= 0 throws NumericalError, which cannot
/// happen for the diagonally dominant M-matrices built by the ADI sweeps.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs,
                       std::span<double> work);

}  // namespace netmorph
