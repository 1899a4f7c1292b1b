#pragma once

#include <cstddef>
#include <span>

namespace netmorph {

/// Pairwise summation with a fixed split tree. The result depends only on the
/// input order, never on scheduling.
double pairwise_sum(std::span<const double> values) noexcept;

/// Pairwise sum of squares.
double pairwise_sum_squares(std::span<const double> values) noexcept;

double max_abs(std::span<const double> values) noexcept;

}  // namespace netmorph
