#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>

#include <Eigen/SparseCore>

#include "netmorph/grid.hpp"

namespace netmorph {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Discrete Darcy operator -L(C) p = -div((rI + C) grad p) with homogeneous
/// Neumann closure.
///
/// The operator is assembled in flux form: every row is the difference of
/// face fluxes, and fluxes through the domain boundary are dropped. Each row
/// therefore sums to zero (constants are in the kernel) and each column sums
/// to zero (the range is the zero-mean subspace). The matrix is value
/// unsymmetric whenever c12 varies in space.
class EllipticOperator {
 public:
  EllipticOperator(Grid grid, SparseMatrix matrix, double r);

  const Grid& grid() const noexcept { return grid_; }
  double background_permeability() const noexcept { return r_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  double max_abs_entry() const noexcept;

  /// `row col value` triples, 0-based, one per stored entry.
  void write_coordinate(std::ostream& os) const;

 private:
  Grid grid_;
  SparseMatrix matrix_;
  double r_;
};

/// Nine-point assembly: arithmetic face averages of r + c11 (r + c22) for the
/// axis terms and the conservative cross-derivative flux for c12.
EllipticOperator assemble(const TensorField& c, double r);

enum class LinearSolverKind { Auto, Direct, Iterative };

/// Direct: sparse LU of the shifted operator, refined by GMRES on the
/// zero-mean subspace until the residual reaches rounding level.
/// Iterative: Jacobi-preconditioned BiCGSTAB. Auto: Direct up to
/// `direct_max_n` cells per axis, Iterative above.
struct SolverOptions {
  LinearSolverKind kind = LinearSolverKind::Auto;
  int direct_max_n = 400;
  /// Relative residual every direct solve must meet. When rounding alone
  /// puts the residual of the exact solution above it (8 eps |A||p| / |s|),
  /// that floor is the bound instead.
  double residual_tolerance = 1e-9;
  double refinement_tolerance = 1e-11;  ///< GMRES refinement target
  std::size_t max_refinement_iterations = 200;
  /// Keep LU factors across solves; they are refreshed when refinement with
  /// the old factors has not converged after `refactor_after` iterations.
  bool reuse_factorization = true;
  std::size_t refactor_after = 20;
  double iterative_tolerance = 1e-10;   ///< relative residual target of BiCGSTAB
  std::size_t max_iterations = 20000;
};

struct SolveStats {
  std::size_t iterations = 0;
  double residual = 0.0;  ///< relative residual of the returned pressure
  double floor = 0.0;     ///< relative residual attainable in double precision
  bool refactorized = false;
};

/// Solves -L(C) p = s with the constant kernel removed: the source is
/// projected to zero mean and the returned pressure has zero mean.
///
/// Keeps the sparsity analysis between calls so repeated solves on operators
/// with the same grid only refactor numerically.
class PressureSolver {
 public:
  explicit PressureSolver(SolverOptions options = {});
  ~PressureSolver();
  PressureSolver(PressureSolver&&) noexcept;
  PressureSolver& operator=(PressureSolver&&) noexcept;

  const SolverOptions& options() const noexcept { return options_; }

  /// `guess` is the starting iterate of the Krylov refinement.
  ScalarField solve(const EllipticOperator& op, const ScalarField& s,
                    const ScalarField* guess = nullptr);

  const SolveStats& last_stats() const noexcept { return last_; }

 private:
  SolverOptions options_;
  SolveStats last_;
  struct Backend;
  std::unique_ptr<Backend> backend_;
};

ScalarField solve_pressure(const EllipticOperator& op, const ScalarField& s,
                           const SolverOptions& options = {});

struct ConditionOptions {
  double relative_tolerance = 1e-6;  ///< stop when successive estimates agree this closely
  std::size_t max_iterations = 10000;
};

struct ConditionEstimate {
  double value = 0.0;      ///< sigma_max / sigma_min on the zero-mean subspace
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  std::size_t power_iterations = 0;
  std::size_t inverse_iterations = 0;
};

/// Ratio of the extreme singular values of -L(C) restricted to the complement
/// of the constant kernel. For symmetric operators this is lambda_max /
/// lambda_min. Power iteration on A^T A gives the top value; inverse iteration
/// through the factorized operator (and its transpose) gives the bottom one.
ConditionEstimate condition_number(const EllipticOperator& op, const ConditionOptions& options = {});

}  // namespace netmorph
