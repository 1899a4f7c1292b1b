#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "netmorph/diagnostics.hpp"
#include "netmorph/elliptic.hpp"
#include "netmorph/error.hpp"
#include "netmorph/grid.hpp"
#include "netmorph/grid_fields.hpp"
#include "netmorph/params.hpp"

namespace netmorph {

enum class AdiVariant { Plain, Symmetric };
enum class SweepOrder { YthenX, XthenY };

struct SchemeConfig {
  AdiVariant variant = AdiVariant::Symmetric;
  /// Solve for the pressure at 3/2 C^n - 1/2 C^{n-1} instead of C^n.
  bool use_extrapolation = true;
  /// Keep C^{n-1} in the state. Extrapolation needs it.
  bool store_history = true;
  /// Sweep order of the plain variant.
  SweepOrder plain_order = SweepOrder::YthenX;

  void validate() const;
  friend bool operator==(const SchemeConfig&, const SchemeConfig&) = default;
};

struct SimState {
  std::int64_t step = 0;
  double dt = 0.0;
  TensorField c_now;
  std::optional<TensorField> c_prev;
  ScalarField p_half;  ///< pressure of the latest step, zero before the first

  SimState(TensorField c0, double dt_);
  /// Always step * dt, never accumulated.
  double time() const noexcept { return static_cast<double>(step) * dt; }
};

/// Per-cell (||C||_F + eps)^(gamma - 2).
ScalarField metabolic_coeff(const TensorField& c, double gamma, double eps);

struct PressureOuter {
  ScalarField p11;
  ScalarField p12;
  ScalarField p22;
};

/// Outer product of the central-difference pressure gradient.
PressureOuter pressure_outer(const ScalarField& p);

TensorField extrapolate_conductivity(const TensorField& c_now, const TensorField& c_prev);

/// One plain ADI step from state.c_now, forced by state.p_half. With
/// YthenX the first half-step is implicit in y and the second, which also
/// carries alpha Q(C^n), implicit in x. XthenY swaps the axes.
TensorField adi_step(const SimState& state, const ModelParams& params, SweepOrder order);

/// Average of the two sweep orders started from the same state.
TensorField symmetric_adi_step(const SimState& state, const ModelParams& params);

/// Extrapolate (when enabled and history exists), solve for the pressure,
/// then advance C with the configured ADI variant.
SimState step_once(const SimState& state, const ModelParams& params, const SchemeConfig& scheme,
                   const ScalarField& source, PressureSolver& solver);

/// Number of steps to reach t_fin, treating t_fin/dt within 1e-9 relative of
/// an integer as that integer.
std::int64_t step_count(double t_fin, double dt);

struct Observer {
  std::int64_t every = 1;  ///< called at step 0, every `every` steps and at the end; 0 = never
  std::function<void(const SimState&)> callback;
};

struct RunOptions {
  std::int64_t diagnostics_every = 1;  ///< 0 disables diagnostics
  std::int64_t condition_every = 0;    ///< 0 disables condition estimates
  SolverOptions solver;
  std::vector<Observer> observers;
};

struct RunResult {
  SimState final_state;
  std::vector<DiagnosticsRecord> diagnostics;
};

/// Thrown by run when a step fails. Carries the last good state so callers
/// can dump it.
class SimulationAborted : public Error {
 public:
  SimulationAborted(const std::string& what, SimState last_good)
      : Error(what), last_good_(std::move(last_good)) {}
  const SimState& last_good() const noexcept { return last_good_; }

 private:
  SimState last_good_;
};

RunResult run(const ModelParams& params, const SchemeConfig& scheme, const TensorField& c0,
              const ScalarField& source, const RunOptions& options = {});

RunResult run(const ModelParams& params, const SchemeConfig& scheme, int n,
              InitialCondition ic, const SourceSpec& source, const RunOptions& options = {});

}  // namespace netmorph
