#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "netmorph/elliptic.hpp"
#include "netmorph/grid.hpp"
#include "netmorph/params.hpp"

namespace netmorph {

/// ||A - A^T||_F / ||A + A^T||_F with A^T the grid transposition.
/// Throws NumericalError when the denominator vanishes.
double asymmetry(const ScalarField& field);

/// Per-cell sqrt(c11^2 + 2 c12^2 + c22^2).
ScalarField frobenius_norm_field(const TensorField& c);

/// Asymmetry of the Frobenius-norm field.
double asymmetry_tensor(const TensorField& c);

struct EnergyTerms {
  double diffusion = 0.0;    ///< D^2/2 |grad C|^2, c12 counted twice
  double pressure = 0.0;     ///< c^2 grad p . (rI + C) grad p
  double metabolic = 0.0;    ///< alpha/gamma ||C||^gamma
  double total() const noexcept { return diffusion + pressure + metabolic; }
};

/// Midpoint-rule quadrature of the energy density with `p` taken as the
/// pressure of `c`. Gradients are the ghost-reflected central differences.
EnergyTerms energy_terms(const TensorField& c, const ModelParams& params, const ScalarField& p);

/// Energy of `c`: solves for p[c] first. Pass a solver to reuse its state.
double energy(const TensorField& c, const ModelParams& params, const ScalarField& source,
              PressureSolver* solver = nullptr);

/// Per-cell |(C (+ rI)) grad p|.
ScalarField flux_magnitude(const TensorField& c, const ScalarField& p, bool include_r, double r);

/// Eigen decomposition of one symmetric 2x2 tensor. Eigenvalues are ordered by
/// decreasing magnitude (the positive one first on ties); (vx, vy) is the unit
/// eigenvector of `lambda1` with its first nonzero component positive, and
/// (1, 0) for isotropic tensors.
struct CellEigen {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double vx = 1.0;
  double vy = 0.0;
};

CellEigen principal_eigen(double c11, double c12, double c22) noexcept;

struct EigenField {
  ScalarField lambda1;
  ScalarField lambda2;
  ScalarField vx;
  ScalarField vy;
};

EigenField principal_eigen(const TensorField& c);

/// Smallest eigenvalue over all cells (negative when C left the PSD cone).
double min_eigenvalue(const TensorField& c);

struct DiagnosticsRecord {
  std::int64_t step = 0;
  double time = 0.0;
  double asymm_c = 0.0;
  double asymm_p = 0.0;  ///< NaN while the pressure is identically zero
  std::optional<double> cond_estimate;
  double energy = 0.0;
  double min_eig = 0.0;
  double max_c_norm = 0.0;
};

/// Diagnostics of a state. `p_half` feeds asymm_p, `energy` is evaluated at
/// `c` with its own pressure solve, and the condition number of L(c) is
/// estimated only when requested.
DiagnosticsRecord make_record(std::int64_t step, double time, const TensorField& c,
                              const ScalarField& p_half, const ModelParams& params,
                              const ScalarField& source, PressureSolver& solver,
                              bool with_condition);

/// Header `step,time,asymm_c,asymm_p,cond,energy,min_eig,max_c_norm`; an
/// absent condition estimate is an empty cell.
void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records);

}  // namespace netmorph
