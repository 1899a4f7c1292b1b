#include "netmorph/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "netmorph/error.hpp"
#include "netmorph/format.hpp"
#include "netmorph/numeric.hpp"

namespace netmorph {

using Vector = Eigen::VectorXd;

EllipticOperator::EllipticOperator(Grid grid, SparseMatrix matrix, double r)
    : grid_(grid), matrix_(std::move(matrix)), r_(r) {
  const auto cells = static_cast<Eigen::Index>(grid_.cells());
  if (matrix_.rows() != cells || matrix_.cols() != cells) {
    throw DimensionError("operator dimension does not match grid of size " +
                         std::to_string(grid_.n()));
  }
  matrix_.makeCompressed();
}

double EllipticOperator::max_abs_entry() const noexcept {
  return max_abs({matrix_.valuePtr(), static_cast<std::size_t>(matrix_.nonZeros())});
}

void EllipticOperator::write_coordinate(std::ostream& os) const {
  // Row-major order so the file reads like the stencil rows.
  const Eigen::SparseMatrix<double, Eigen::RowMajor, int> rows = matrix_;
  for (int r = 0; r < rows.outerSize(); ++r) {
    for (decltype(rows)::InnerIterator it(rows, r); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

EllipticOperator assemble(const TensorField& c, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw ConfigError("r", 0, "background permeability must be > 0");
  }
  if (!c.all_finite()) throw NumericalError("conductivity contains non-finite values");

  const Grid& grid = c.grid();
  const int n = grid.n();
  const double inv_h2 = static_cast<double>(n) * n;
  const double axis = 0.5 * inv_h2;
  const double cross = 0.125 * inv_h2;

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(grid.cells() * 9);

  // w[di + 1][dj + 1] holds the weight of p(i + di, j + dj) in L(C) p at (i, j).
  std::array<std::array<double, 3>, 3> w{};

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (auto& row : w) row.fill(0.0);

      const double k11 = r + c.c11(i, j);
      const double k22 = r + c.c22(i, j);
      const double m = c.c12(i, j);
      // Ghost offsets: a neighbor outside the grid reflects onto (i, j) itself.
      const int djp = j + 1 < n ? 1 : 0;
      const int djm = j > 0 ? -1 : 0;
      const int dip = i + 1 < n ? 1 : 0;
      const int dim = i > 0 ? -1 : 0;

      if (i + 1 < n) {
        const double a = axis * (r + c.c11(i + 1, j) + k11);
        w[2][1] += a;
        w[1][1] -= a;
        const double g = cross * (c.c12(i + 1, j) + m);
        w[2][1 + djp] += g;
        w[2][1 + djm] -= g;
        w[1][1 + djp] += g;
        w[1][1 + djm] -= g;
      }
      if (i > 0) {
        const double a = axis * (r + c.c11(i - 1, j) + k11);
        w[0][1] += a;
        w[1][1] -= a;
        const double g = cross * (c.c12(i - 1, j) + m);
        w[1][1 + djp] -= g;
        w[1][1 + djm] += g;
        w[0][1 + djp] -= g;
        w[0][1 + djm] += g;
      }
      if (j + 1 < n) {
        const double a = axis * (r + c.c22(i, j + 1) + k22);
        w[1][2] += a;
        w[1][1] -= a;
        const double g = cross * (c.c12(i, j + 1) + m);
        w[1 + dip][2] += g;
        w[1 + dim][2] -= g;
        w[1 + dip][1] += g;
        w[1 + dim][1] -= g;
      }
      if (j > 0) {
        const double a = axis * (r + c.c22(i, j - 1) + k22);
        w[1][0] += a;
        w[1][1] -= a;
        const double g = cross * (c.c12(i, j - 1) + m);
        w[1 + dip][1] -= g;
        w[1 + dim][1] += g;
        w[1 + dip][0] -= g;
        w[1 + dim][0] += g;
      }

      const int row = static_cast<int>(grid.index(i, j));
      for (int di = -1; di <= 1; ++di) {
        if (i + di < 0 || i + di >= n) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          if (j + dj < 0 || j + dj >= n) continue;
          // Explicit zeros keep the pattern identical for every C.
          triplets.emplace_back(row, static_cast<int>(grid.index(i + di, j + dj)),
                                -w[di + 1][dj + 1]);
        }
      }
    }
  }

  SparseMatrix a(static_cast<Eigen::Index>(grid.cells()), static_cast<Eigen::Index>(grid.cells()));
  a.setFromTriplets(triplets.begin(), triplets.end());
  return EllipticOperator(grid, std::move(a), r);
}

namespace {

double mean_of(const Vector& v) {
  return pairwise_sum({v.data(), static_cast<std::size_t>(v.size())}) / static_cast<double>(v.size());
}

void project_zero_mean(Vector& v) { v.array() -= mean_of(v); }

Vector to_vector(const ScalarField& f) {
  return Eigen::Map<const Vector>(f.values().data(), static_cast<Eigen::Index>(f.size()));
}

ScalarField to_field(const Grid& grid, const Vector& v) {
  return ScalarField(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

struct KrylovResult {
  Vector x;
  std::size_t iterations = 0;
  double residual = 0.0;  ///< true relative residual at exit
  double floor = 0.0;     ///< relative residual attainable in floating point at x
};

/// Rounding level of b - A x: a few ulps of |A| |x|, relative to |b|.
double residual_floor(const SparseMatrix& abs_a, const Vector& x, double b_norm) {
  return 8.0 * std::numeric_limits<double>::epsilon() * (abs_a * x.cwiseAbs()).norm() / b_norm;
}

/// Right-preconditioned restarted GMRES for m x = b on the zero-mean
/// subspace. Operator and preconditioner outputs are projected, so the
/// constant kernel never enters the Krylov space. Stops at `tol`, at the
/// rounding floor of the residual, or when restarts stop making progress.
template <class Precondition>
KrylovResult gmres_zero_mean(const SparseMatrix& m, Precondition precondition, const Vector& b,
                             Vector x, double tol, std::size_t max_iter, int restart = 30) {
  const double b_norm = b.norm();
  const SparseMatrix abs_m = m.cwiseAbs();
  KrylovResult out;
  project_zero_mean(x);
  auto residual_of = [&](const Vector& v) {
    Vector r = b - m * v;
    project_zero_mean(r);
    return r;
  };
  Vector r = residual_of(x);
  double beta = r.norm();
  double best = beta;
  int stalled_cycles = 0;
  out.floor = residual_floor(abs_m, x, b_norm);

  while (beta > std::max(tol, out.floor) * b_norm && out.iterations < max_iter) {
    const double target = std::max(tol, out.floor) * b_norm;
    std::vector<Vector> v(restart + 1), z(restart);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(restart + 1, restart);
    Vector cs = Vector::Zero(restart), sn = Vector::Zero(restart), g = Vector::Zero(restart + 1);
    v[0] = r / beta;
    g[0] = beta;
    int k = 0;
    while (k < restart && out.iterations < max_iter) {
      z[k] = precondition(v[k]);
      Vector w = m * z[k];
      project_zero_mean(w);
      for (int i = 0; i <= k; ++i) {
        hess(i, k) = w.dot(v[i]);
        w -= hess(i, k) * v[i];
      }
      const double sub = w.norm();
      hess(k + 1, k) = sub;
      if (sub > 0.0) v[k + 1] = w / sub;
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * hess(i, k) + sn[i] * hess(i + 1, k);
        hess(i + 1, k) = -sn[i] * hess(i, k) + cs[i] * hess(i + 1, k);
        hess(i, k) = t;
      }
      const double denom = std::hypot(hess(k, k), hess(k + 1, k));
      if (!(denom > 0.0)) break;  // breakdown: keep the columns built so far
      cs[k] = hess(k, k) / denom;
      sn[k] = hess(k + 1, k) / denom;
      hess(k, k) = denom;
      hess(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      ++k;
      ++out.iterations;
      if (std::abs(g[k]) <= target || !(sub > 0.0)) break;
    }
    if (k == 0) break;
    // Back substitution for the k-dimensional least-squares problem.
    Vector y = g.head(k);
    for (int i = k - 1; i >= 0; --i) {
      for (int j = i + 1; j < k; ++j) y[i] -= hess(i, j) * y[j];
      y[i] /= hess(i, i);
    }
    for (int i = 0; i < k; ++i) x += y[i] * z[i];
    project_zero_mean(x);
    r = residual_of(x);
    beta = r.norm();
    out.floor = residual_floor(abs_m, x, b_norm);
    if (beta < 0.5 * best) {
      stalled_cycles = 0;
    } else if (++stalled_cycles >= 2) {
      break;
    }
    best = std::min(best, beta);
  }
  out.x = std::move(x);
  out.residual = b_norm > 0.0 ? beta / b_norm : 0.0;
  return out;
}

/// Sparse LU of A + delta I. For the singular Neumann operator the shift
/// makes the factorization well defined without pinning a cell; on the
/// zero-mean subspace it is an excellent preconditioner for A itself.
class ShiftedLu {
 public:
  void factorize(const SparseMatrix& a, double shift) {
    SparseMatrix m = a;
    for (Eigen::Index k = 0; k < m.rows(); ++k) m.coeffRef(k, k) += shift;
    m.makeCompressed();
    if (!analyzed_ || m.rows() != rows_) {
      lu_.setPivotThreshold(0.01);
      lu_.analyzePattern(m);
      analyzed_ = true;
      rows_ = m.rows();
    }
    lu_.factorize(m);
    if (lu_.info() != Eigen::Success) {
      valid_ = false;
      throw ConvergenceError("sparse LU factorization failed: " + lu_.lastErrorMessage(), 0,
                             std::numeric_limits<double>::quiet_NaN());
    }
    valid_ = true;
  }

  bool valid() const noexcept { return valid_; }
  void invalidate() noexcept { valid_ = false; }

  Vector solve(const Vector& v) {
    Vector z = lu_.solve(v);
    project_zero_mean(z);
    return z;
  }
  Vector solve_transposed(const Vector& v) {
    Vector z = lu_.transpose().solve(v);
    project_zero_mean(z);
    return z;
  }

 private:
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
  bool valid_ = false;
  Eigen::Index rows_ = 0;
};

/// Jacobi-preconditioned BiCGSTAB on the zero-mean subspace.
KrylovResult bicgstab_zero_mean(const SparseMatrix& a, const Vector& b, Vector x, double tol,
                                std::size_t max_iter) {
  const Vector inv_diag = a.diagonal().cwiseInverse();
  auto precondition = [&](const Vector& v) {
    Vector z = inv_diag.cwiseProduct(v);
    project_zero_mean(z);
    return z;
  };
  KrylovResult out;
  const double b_norm = b.norm();
  project_zero_mean(x);
  Vector r = b - a * x;
  project_zero_mean(r);
  const Vector r_hat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  Vector v = Vector::Zero(b.size());
  Vector p = Vector::Zero(b.size());
  while (r.norm() > tol * b_norm && out.iterations < max_iter) {
    ++out.iterations;
    const double rho_new = r_hat.dot(r);
    if (rho_new == 0.0) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    p = r + beta * (p - omega * v);
    const Vector y = precondition(p);
    v = a * y;
    alpha = rho / r_hat.dot(v);
    const Vector s = r - alpha * v;
    const Vector z = precondition(s);
    const Vector t = a * z;
    const double tt = t.squaredNorm();
    omega = tt > 0.0 ? t.dot(s) / tt : 0.0;
    x += alpha * y + omega * z;
    r = s - omega * t;
    project_zero_mean(r);
    if (omega == 0.0) break;
  }
  project_zero_mean(x);
  Vector res = b - a * x;
  project_zero_mean(res);
  out.residual = res.norm() / b_norm;
  out.floor = residual_floor(a.cwiseAbs(), x, b_norm);
  out.x = std::move(x);
  return out;
}

double factor_shift(const EllipticOperator& op) { return 1e-3 * op.background_permeability(); }

}  // namespace

struct PressureSolver::Backend {
  ShiftedLu lu;
  std::size_t cells = 0;
};

PressureSolver::PressureSolver(SolverOptions options)
    : options_(options), backend_(std::make_unique<Backend>()) {}
PressureSolver::~PressureSolver() = default;
PressureSolver::PressureSolver(PressureSolver&&) noexcept = default;
PressureSolver& PressureSolver::operator=(PressureSolver&&) noexcept = default;

ScalarField PressureSolver::solve(const EllipticOperator& op, const ScalarField& s,
                                  const ScalarField* guess) {
  require_same_grid(op.grid(), s.grid(), "pressure source");
  const Grid& grid = op.grid();
  last_ = SolveStats{};

  const double total = pairwise_sum(s.values());
  const double tolerance = 1e-10 * static_cast<double>(grid.cells()) * max_abs(s.values());
  if (std::abs(total) > tolerance) throw SolvabilityError(total, tolerance);

  Vector b = to_vector(s);
  project_zero_mean(b);
  if (b.norm() == 0.0) return ScalarField(grid);

  const SparseMatrix& a = op.matrix();
  const bool direct =
      options_.kind == LinearSolverKind::Direct ||
      (options_.kind == LinearSolverKind::Auto && grid.n() <= options_.direct_max_n);
  Vector x0 = guess ? to_vector(*guess) : Vector::Zero(b.size());

  KrylovResult result;
  double tol;
  if (direct) {
    tol = options_.residual_tolerance;
    auto precondition = [&](const Vector& v) { return backend_->lu.solve(v); };
    const bool fresh = !options_.reuse_factorization || !backend_->lu.valid() ||
                       backend_->cells != grid.cells();
    if (fresh) {
      backend_->lu.factorize(a, factor_shift(op));
      backend_->cells = grid.cells();
      last_.refactorized = true;
    }
    // Factors from an earlier operator get a short budget. If that is not
    // enough they are refreshed and the iteration continues from where it was.
    result = gmres_zero_mean(a, precondition, b, x0, options_.refinement_tolerance,
                             fresh ? options_.max_refinement_iterations : options_.refactor_after);
    if (!fresh && result.residual > std::max(options_.refinement_tolerance, result.floor)) {
      backend_->lu.factorize(a, factor_shift(op));
      last_.refactorized = true;
      const std::size_t spent = result.iterations;
      result = gmres_zero_mean(a, precondition, b, result.x, options_.refinement_tolerance,
                               options_.max_refinement_iterations);
      result.iterations += spent;
    }
  } else {
    tol = options_.iterative_tolerance;
    result = bicgstab_zero_mean(a, b, x0, tol, options_.max_iterations);
  }
  last_.iterations = result.iterations;
  last_.residual = result.residual;
  last_.floor = result.floor;

  Vector x = std::move(result.x);
  project_zero_mean(x);
  if (!(result.residual <= std::max(tol, result.floor)) || !x.allFinite()) {
    throw ConvergenceError("pressure solve missed its residual tolerance", result.iterations,
                           result.residual);
  }
  return to_field(grid, x);
}

ScalarField solve_pressure(const EllipticOperator& op, const ScalarField& s,
                           const SolverOptions& options) {
  PressureSolver solver(options);
  return solver.solve(op, s);
}

namespace {

Vector deterministic_start(Eigen::Index size) {
  // Golden-ratio sequence: no RNG, no accidental alignment with grid modes.
  Vector v(size);
  for (Eigen::Index k = 0; k < size; ++k) {
    const double t = 0.6180339887498949 * static_cast<double>(k + 1);
    v[k] = t - std::floor(t) - 0.5;
  }
  project_zero_mean(v);
  return v / v.norm();
}

}  // namespace

ConditionEstimate condition_number(const EllipticOperator& op, const ConditionOptions& options) {
  const SparseMatrix& a = op.matrix();
  if (a.rows() < 2) throw DimensionError("condition number needs at least two cells");
  const SparseMatrix at = a.transpose();
  ConditionEstimate est;

  // Largest singular value: power iteration on A^T A.
  {
    Vector x = deterministic_start(a.rows());
    double prev = 0.0;
    bool converged = false;
    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
      Vector y = at * (a * x);
      project_zero_mean(y);
      const double lambda = x.dot(y);
      const double norm = y.norm();
      if (norm == 0.0) throw NumericalError("operator vanishes on the zero-mean subspace");
      x = y / norm;
      if (it > 0 && std::abs(lambda - prev) <= options.relative_tolerance * lambda) {
        prev = lambda;
        converged = true;
        break;
      }
      prev = lambda;
    }
    if (!converged) throw ConvergenceError("power iteration for sigma_max did not converge", it, prev);
    est.sigma_max = std::sqrt(prev);
    est.power_iterations = it + 1;
  }

  // Smallest nonzero singular value: inverse iteration with (A^T A)^+, each
  // application being two refined zero-mean solves (with A^T, then with A).
  {
    ShiftedLu lu;
    lu.factorize(a, factor_shift(op));
    auto solve_with = [&](const SparseMatrix& m, bool transposed, const Vector& rhs) {
      auto precondition = [&](const Vector& v) {
        return transposed ? lu.solve_transposed(v) : lu.solve(v);
      };
      KrylovResult res =
          gmres_zero_mean(m, precondition, rhs, Vector::Zero(rhs.size()), 1e-12, 200);
      if (!(res.residual <= std::max(1e-9, res.floor))) {
        throw ConvergenceError("inner solve of inverse iteration failed", res.iterations, res.residual);
      }
      return res.x;
    };
    Vector x = deterministic_start(a.rows());
    double prev = 0.0;
    bool converged = false;
    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
      const Vector y = solve_with(at, true, x);
      const Vector z = solve_with(a, false, y);
      const double mu = y.squaredNorm();  // x^T (A^T A)^+ x for unit x
      x = z / z.norm();
      if (it > 0 && std::abs(mu - prev) <= options.relative_tolerance * mu) {
        prev = mu;
        converged = true;
        break;
      }
      prev = mu;
    }
    if (!converged) {
      throw ConvergenceError("inverse iteration for sigma_min did not converge", it, prev);
    }
    est.sigma_min = 1.0 / std::sqrt(prev);
    est.inverse_iterations = it + 1;
  }

  est.value = est.sigma_max / est.sigma_min;
  return est;
}

}  // namespace netmorph
