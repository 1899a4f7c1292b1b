#pragma once

#include <string_view>

#include "netmorph/grid.hpp"
#include "netmorph/params.hpp"

namespace netmorph {

enum class InitialCondition { ConstantOne, DiagonalRidge, Zero };

std::string_view to_string(InitialCondition kind) noexcept;
InitialCondition initial_condition_from_string(std::string_view name);

/// S = E - mean(E) with E = exp(-sigma |x - x0|^2) sampled at cell centers.
/// The mean is the arithmetic mean over cells, so S sums to zero on the grid.
ScalarField build_source(const Grid& grid, const SourceSpec& spec);

/// Positive semidefinite initial conductivity with c12 = 0 and c11 = c22.
TensorField initial_condition(const Grid& grid, InitialCondition kind);

/// Central differences with homogeneous Neumann reflection at the boundary
/// (the ghost value equals the adjacent interior cell). Requires n >= 3.
ScalarField dx(const ScalarField& u);
ScalarField dy(const ScalarField& u);

/// Averages each 2x2 block of a field on a 2n grid onto the n grid.
ScalarField restrict_to_coarse(const ScalarField& fine, const Grid& coarse);
TensorField restrict_to_coarse(const TensorField& fine, const Grid& coarse);

}  // namespace netmorph
