#include "netmorph/dynamics.hpp"

#include <cmath>
#include <string>

#include "netmorph/tridiagonal.hpp"

namespace netmorph {

void SchemeConfig::validate() const {
  if (use_extrapolation && !store_history) {
    throw ConfigError("store_history", 0, "extrapolation needs the previous state");
  }
}

SimState::SimState(TensorField c0, double dt_)
    : dt(dt_), c_now(std::move(c0)), p_half(c_now.grid()) {}

ScalarField metabolic_coeff(const TensorField& c, double gamma, double eps) {
  ScalarField q = frobenius_norm_field(c);
  for (double& v : q.values()) v = std::pow(v + eps, gamma - 2.0);
  return q;
}

PressureOuter pressure_outer(const ScalarField& p) {
  const ScalarField gx = dx(p);
  const ScalarField gy = dy(p);
  PressureOuter out{ScalarField(p.grid()), ScalarField(p.grid()), ScalarField(p.grid())};
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double a = gx.values()[k], b = gy.values()[k];
    out.p11.values()[k] = a * a;
    out.p12.values()[k] = a * b;
    out.p22.values()[k] = b * b;
  }
  return out;
}

TensorField extrapolate_conductivity(const TensorField& c_now, const TensorField& c_prev) {
  require_same_grid(c_now.grid(), c_prev.grid(), "extrapolation history");
  TensorField out(c_now.grid());
  for (int k = 0; k < 3; ++k) {
    auto a = c_now.component(k).values();
    auto b = c_prev.component(k).values();
    auto o = out.component(k).values();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] = 1.5 * a[m] - 0.5 * b[m];
  }
  return out;
}

namespace {

enum class Axis { X, Y };

// Grid lines along `axis`: line `l` with position `k` maps to flat index
// base + k * stride.
struct LineLayout {
  std::size_t base_step;
  std::size_t stride;
};

LineLayout layout(Axis axis, int n) {
  // Along y the index j varies fastest; along x the index i strides by n.
  return axis == Axis::Y ? LineLayout{static_cast<std::size_t>(n), 1}
                         : LineLayout{1, static_cast<std::size_t>(n)};
}

/// out = u + lam * (second difference of u along axis), Neumann reflected.
std::vector<double> apply_explicit(std::span<const double> u, int n, double lam, Axis axis) {
  std::vector<double> out(u.begin(), u.end());
  if (lam == 0.0 || n == 1) return out;
  const LineLayout lay = layout(axis, n);
#pragma omp parallel for schedule(static)
  for (int l = 0; l < n; ++l) {
    const std::size_t base = l * lay.base_step;
    for (int k = 0; k < n; ++k) {
      const std::size_t m = base + k * lay.stride;
      const double left = k > 0 ? u[m - lay.stride] : u[m];
      const double right = k + 1 < n ? u[m + lay.stride] : u[m];
      out[m] += lam * ((right - u[m]) - (u[m] - left));
    }
  }
  return out;
}

/// Solves (I - lam * second difference along axis + diag(extra)) v = rhs in
/// place, one tridiagonal system per grid line.
void solve_lines(std::vector<double>& rhs, int n, double lam, Axis axis,
                 std::span<const double> extra) {
  const LineLayout lay = layout(axis, n);
#pragma omp parallel
  {
    std::vector<double> lower(n, -lam), upper(n, -lam), diag(n), line(n), work(n);
#pragma omp for schedule(static)
    for (int l = 0; l < n; ++l) {
      const std::size_t base = l * lay.base_step;
      for (int k = 0; k < n; ++k) {
        const std::size_t m = base + k * lay.stride;
        const int neighbours = (k > 0) + (k + 1 < n);
        diag[k] = 1.0 + lam * neighbours + (extra.empty() ? 0.0 : extra[m]);
        line[k] = rhs[m];
      }
      solve_tridiagonal(lower, diag, upper, line, work);
      for (int k = 0; k < n; ++k) rhs[base + k * lay.stride] = line[k];
    }
  }
}

/// One ADI step of a single component with precomputed forcing and implicit
/// reaction coefficient.
ScalarField advance_component(const ScalarField& u, const ScalarField& forcing,
                              std::span<const double> reaction, double lam, SweepOrder order) {
  const int n = u.n();
  const Axis first = order == SweepOrder::YthenX ? Axis::Y : Axis::X;
  const Axis second = order == SweepOrder::YthenX ? Axis::X : Axis::Y;

  std::vector<double> v = apply_explicit(u.values(), n, lam, second);
  const auto f = forcing.values();
  for (std::size_t m = 0; m < v.size(); ++m) v[m] += f[m];
  solve_lines(v, n, lam, first, {});

  std::vector<double> w = apply_explicit(v, n, lam, first);
  solve_lines(w, n, lam, second, reaction);
  return ScalarField(u.grid(), std::move(w));
}

struct StepInputs {
  TensorField forcing;          ///< dt c^2 P
  std::vector<double> reaction; ///< dt alpha Q(C^n)
  double lam;                   ///< dt D^2 / (2 h^2)
};

StepInputs prepare(const SimState& state, const ModelParams& params) {
  require_same_grid(state.c_now.grid(), state.p_half.grid(), "pressure");
  const Grid& g = state.c_now.grid();
  const double dt = params.dt;
  const double scale = dt * params.c_act * params.c_act;
  PressureOuter p = pressure_outer(state.p_half);
  for (ScalarField* f : {&p.p11, &p.p12, &p.p22}) {
    for (double& v : f->values()) v *= scale;
  }
  const ScalarField q = metabolic_coeff(state.c_now, params.gamma, params.eps);
  std::vector<double> reaction(q.values().begin(), q.values().end());
  for (double& v : reaction) v *= dt * params.alpha;
  const double h = g.h();
  return {TensorField(std::move(p.p11), std::move(p.p12), std::move(p.p22)), std::move(reaction),
          dt * params.d_coef * params.d_coef / (2.0 * h * h)};
}

TensorField advance(const SimState& state, const StepInputs& in, SweepOrder order) {
  return TensorField(
      advance_component(state.c_now.c11, in.forcing.c11, in.reaction, in.lam, order),
      advance_component(state.c_now.c12, in.forcing.c12, in.reaction, in.lam, order),
      advance_component(state.c_now.c22, in.forcing.c22, in.reaction, in.lam, order));
}

TensorField average(const TensorField& a, const TensorField& b) {
  TensorField out(a.grid());
  for (int k = 0; k < 3; ++k) {
    auto x = a.component(k).values();
    auto y = b.component(k).values();
    auto o = out.component(k).values();
    for (std::size_t m = 0; m < o.size(); ++m) o[m] = 0.5 * x[m] + 0.5 * y[m];
  }
  return out;
}

}  // namespace

TensorField adi_step(const SimState& state, const ModelParams& params, SweepOrder order) {
  return advance(state, prepare(state, params), order);
}

TensorField symmetric_adi_step(const SimState& state, const ModelParams& params) {
  const StepInputs in = prepare(state, params);
  return average(advance(state, in, SweepOrder::YthenX), advance(state, in, SweepOrder::XthenY));
}

SimState step_once(const SimState& state, const ModelParams& params, const SchemeConfig& scheme,
                   const ScalarField& source, PressureSolver& solver) {
  const bool extrapolate = scheme.use_extrapolation && state.c_prev.has_value();
  const EllipticOperator op =
      assemble(extrapolate ? extrapolate_conductivity(state.c_now, *state.c_prev) : state.c_now,
               params.r);

  SimState next(state.c_now, state.dt);
  next.step = state.step + 1;
  next.p_half = solver.solve(op, source, state.step > 0 ? &state.p_half : nullptr);

  const SimState forced = [&] {
    SimState s(state.c_now, state.dt);
    s.step = state.step;
    s.p_half = next.p_half;
    return s;
  }();
  next.c_now = scheme.variant == AdiVariant::Symmetric
                   ? symmetric_adi_step(forced, params)
                   : adi_step(forced, params, scheme.plain_order);
  if (scheme.store_history) next.c_prev = state.c_now;
  return next;
}

std::int64_t step_count(double t_fin, double dt) {
  const double ratio = t_fin / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::ceil(ratio));
}

RunResult run(const ModelParams& params, const SchemeConfig& scheme, const TensorField& c0,
              const ScalarField& source, const RunOptions& options) {
  params.validate();
  scheme.validate();
  require_same_grid(c0.grid(), source.grid(), "source");

  PressureSolver solver(options.solver);
  RunResult result{SimState(c0, params.dt), {}};
  SimState& state = result.final_state;
  const std::int64_t steps = step_count(params.t_fin, params.dt);

  auto due = [&](std::int64_t every) {
    return every > 0 && (state.step % every == 0 || state.step == steps);
  };
  auto observe = [&] {
    if (due(options.diagnostics_every)) {
      const bool with_cond = options.condition_every > 0 && state.step % options.condition_every == 0;
      result.diagnostics.push_back(make_record(state.step, state.time(), state.c_now, state.p_half,
                                               params, source, solver, with_cond));
    }
    for (const Observer& o : options.observers) {
      if (o.callback && due(o.every)) o.callback(state);
    }
  };

  observe();
  while (state.step < steps) {
    try {
      SimState next = step_once(state, params, scheme, source, solver);
      if (!next.c_now.all_finite()) throw NumericalError("conductivity became non-finite");
      state = std::move(next);
      observe();
    } catch (const SimulationAborted&) {
      throw;
    } catch (const Error& e) {
      throw SimulationAborted("step " + std::to_string(state.step + 1) + ": " + e.what(), state);
    }
  }
  return result;
}

RunResult run(const ModelParams& params, const SchemeConfig& scheme, int n, InitialCondition ic,
              const SourceSpec& source, const RunOptions& options) {
  const Grid grid(n);
  return run(params, scheme, initial_condition(grid, ic), build_source(grid, source), options);
}

}  // namespace netmorph
