#include "netmorph/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "netmorph/error.hpp"
#include "netmorph/format.hpp"
#include "netmorph/grid_fields.hpp"
#include "netmorph/numeric.hpp"

namespace netmorph {

double asymmetry(const ScalarField& field) {
  const int n = field.n();
  std::vector<double> diff(field.size()), sum(field.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t k = field.grid().index(i, j);
      diff[k] = field(i, j) - field(j, i);
      sum[k] = field(i, j) + field(j, i);
    }
  }
  const double den = pairwise_sum_squares(sum);
  if (!(den > 0.0)) throw NumericalError("asymmetry undefined: A + A^T vanishes");
  return std::sqrt(pairwise_sum_squares(diff) / den);
}

ScalarField frobenius_norm_field(const TensorField& c) {
  ScalarField out(c.grid());
  auto a = c.c11.values(), b = c.c12.values(), d = c.c22.values();
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) {
    o[k] = std::sqrt(a[k] * a[k] + 2.0 * b[k] * b[k] + d[k] * d[k]);
  }
  return out;
}

double asymmetry_tensor(const TensorField& c) { return asymmetry(frobenius_norm_field(c)); }

EnergyTerms energy_terms(const TensorField& c, const ModelParams& params, const ScalarField& p) {
  require_same_grid(c.grid(), p.grid(), "energy pressure");
  const std::size_t cells = c.grid().cells();
  const double area = c.grid().h() * c.grid().h();
  const double d2 = params.d_coef * params.d_coef;
  const double c2 = params.c_act * params.c_act;

  std::vector<double> diffusion(cells), pressure(cells), metabolic(cells);
  for (int k = 0; k < 3; ++k) {
    const ScalarField gx = dx(c.component(k));
    const ScalarField gy = dy(c.component(k));
    const double weight = k == 1 ? 2.0 : 1.0;
    for (std::size_t m = 0; m < cells; ++m) {
      diffusion[m] += weight * (gx.values()[m] * gx.values()[m] + gy.values()[m] * gy.values()[m]);
    }
  }
  const ScalarField px = dx(p);
  const ScalarField py = dy(p);
  const ScalarField norm = frobenius_norm_field(c);
  for (std::size_t m = 0; m < cells; ++m) {
    const double gx = px.values()[m], gy = py.values()[m];
    const double a = params.r + c.c11.values()[m];
    const double b = c.c12.values()[m];
    const double d = params.r + c.c22.values()[m];
    pressure[m] = gx * (a * gx + b * gy) + gy * (b * gx + d * gy);
    metabolic[m] = std::pow(norm.values()[m], params.gamma);
  }
  EnergyTerms e;
  e.diffusion = 0.5 * d2 * area * pairwise_sum(diffusion);
  e.pressure = c2 * area * pairwise_sum(pressure);
  e.metabolic = params.alpha / params.gamma * area * pairwise_sum(metabolic);
  return e;
}

double energy(const TensorField& c, const ModelParams& params, const ScalarField& source,
              PressureSolver* solver) {
  PressureSolver local;
  PressureSolver& s = solver ? *solver : local;
  const ScalarField p = s.solve(assemble(c, params.r), source);
  return energy_terms(c, params, p).total();
}

ScalarField flux_magnitude(const TensorField& c, const ScalarField& p, bool include_r, double r) {
  require_same_grid(c.grid(), p.grid(), "flux pressure");
  const ScalarField px = dx(p);
  const ScalarField py = dy(p);
  const double shift = include_r ? r : 0.0;
  ScalarField out(c.grid());
  for (std::size_t m = 0; m < out.size(); ++m) {
    const double gx = px.values()[m], gy = py.values()[m];
    const double b = c.c12.values()[m];
    const double qx = (c.c11.values()[m] + shift) * gx + b * gy;
    const double qy = b * gx + (c.c22.values()[m] + shift) * gy;
    out.values()[m] = std::hypot(qx, qy);
  }
  return out;
}

CellEigen principal_eigen(double c11, double c12, double c22) noexcept {
  const double mean = 0.5 * (c11 + c22);
  const double half = 0.5 * (c11 - c22);
  const double rad = std::hypot(half, c12);
  CellEigen e;
  const double hi = mean + rad, lo = mean - rad;
  if (std::abs(hi) >= std::abs(lo)) {
    e.lambda1 = hi;
    e.lambda2 = lo;
  } else {
    e.lambda1 = lo;
    e.lambda2 = hi;
  }
  if (rad == 0.0) return e;
  // Two candidate kernel vectors of C - lambda I; the longer one is the
  // better conditioned.
  double ax = c12, ay = e.lambda1 - c11;
  const double bx = e.lambda1 - c22, by = c12;
  if (std::hypot(bx, by) > std::hypot(ax, ay)) {
    ax = bx;
    ay = by;
  }
  const double len = std::hypot(ax, ay);
  ax /= len;
  ay /= len;
  if (ax < 0.0 || (ax == 0.0 && ay < 0.0)) {
    ax = -ax;
    ay = -ay;
  }
  e.vx = ax + 0.0;
  e.vy = ay + 0.0;
  return e;
}

EigenField principal_eigen(const TensorField& c) {
  const Grid& g = c.grid();
  EigenField out{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
  for (std::size_t m = 0; m < g.cells(); ++m) {
    const CellEigen e =
        principal_eigen(c.c11.values()[m], c.c12.values()[m], c.c22.values()[m]);
    out.lambda1.values()[m] = e.lambda1;
    out.lambda2.values()[m] = e.lambda2;
    out.vx.values()[m] = e.vx;
    out.vy.values()[m] = e.vy;
  }
  return out;
}

double min_eigenvalue(const TensorField& c) {
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < c.grid().cells(); ++m) {
    const double a = c.c11.values()[m], b = c.c12.values()[m], d = c.c22.values()[m];
    lowest = std::min(lowest, 0.5 * (a + d) - std::hypot(0.5 * (a - d), b));
  }
  return lowest;
}

DiagnosticsRecord make_record(std::int64_t step, double time, const TensorField& c,
                              const ScalarField& p_half, const ModelParams& params,
                              const ScalarField& source, PressureSolver& solver,
                              bool with_condition) {
  DiagnosticsRecord rec;
  rec.step = step;
  rec.time = time;
  const ScalarField norm = frobenius_norm_field(c);
  rec.asymm_c = max_abs(norm.values()) > 0.0 ? asymmetry(norm) : 0.0;
  rec.asymm_p = max_abs(p_half.values()) > 0.0 ? asymmetry(p_half)
                                              : std::numeric_limits<double>::quiet_NaN();
  const EllipticOperator op = assemble(c, params.r);
  const ScalarField p = solver.solve(op, source);
  rec.energy = energy_terms(c, params, p).total();
  rec.min_eig = min_eigenvalue(c);
  rec.max_c_norm = max_abs(norm.values());
  if (with_condition) rec.cond_estimate = condition_number(op).value;
  return rec;
}

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records) {
  os << "step,time,asymm_c,asymm_p,cond,energy,min_eig,max_c_norm\n";
  for (const DiagnosticsRecord& r : records) {
    os << r.step << ',' << format_double(r.time) << ',' << format_double(r.asymm_c) << ','
       << format_double(r.asymm_p) << ',';
    if (r.cond_estimate) os << format_double(*r.cond_estimate);
    os << ',' << format_double(r.energy) << ',' << format_double(r.min_eig) << ','
       << format_double(r.max_c_norm) << '\n';
  }
}

}  // namespace netmorph
