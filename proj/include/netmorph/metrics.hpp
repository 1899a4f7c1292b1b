#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netmorph/grid.hpp"

namespace netmorph {

/// Weighted points on the real line. Weights are nonnegative and sum to 1.
struct DiscreteMeasure {
  std::vector<double> support;
  std::vector<double> weights;

  /// Throws NumericalError unless sizes match, weights are >= 0 and sum to 1
  /// within 1e-12.
  void validate() const;
};

/// Builds a measure from nonnegative masses, normalizing them.
DiscreteMeasure make_measure(std::vector<double> support, std::vector<double> masses);

/// W_p between two measures on the line, from the monotone (quantile)
/// coupling swept over the merged cumulative masses.
double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p = 1.0);

/// Row-major flattening: cell k sits at (k + 1/2) / N^2 with its value as mass.
DiscreteMeasure field_to_measure(const ScalarField& field);

enum class Embedding {
  RowMajor,  ///< field_to_measure of the norm field
  Sliced,    ///< mean of W_p over projections of the 2D cell centers on fixed angles
};

struct WassersteinOptions {
  double p = 1.0;
  Embedding embedding = Embedding::RowMajor;
  int slices = 16;  ///< angles k pi / slices for the sliced variant
};

/// W_p between the Frobenius-norm fields of a coarse solution and the
/// restriction of a solution on the doubled grid. A `fine` field on the
/// coarse grid itself is compared as is.
double error_wasserstein(const TensorField& coarse, const TensorField& fine,
                         const WassersteinOptions& options = {});

/// ||C(h) - R C(h/2)|| / ||C(h)|| in the Frobenius norm over all cells, c12
/// counted twice, with R the 2x2 block average (identity on equal grids).
double error_richardson(const TensorField& coarse, const TensorField& fine);

struct ConvergenceReport {
  std::vector<int> resolutions;
  std::vector<double> error_w;  ///< one per consecutive pair, NaN where a run failed
  std::vector<double> error_r;
  std::vector<double> order_w;  ///< log2 ratio of consecutive error_w; one fewer entry
  std::vector<std::string> failures;  ///< "N=...: message" for each failed resolution
  std::string embedding = "row_major";
  double wasserstein_p = 1.0;

  bool complete() const noexcept { return failures.empty(); }
};

/// Throws ConfigError unless there are at least two resolutions and each
/// one doubles the previous.
void validate_resolutions(const std::vector<int>& resolutions);

/// Runs `simulate` at every resolution (in order) and compares neighbours.
/// A failing resolution is recorded and its pairs get NaN errors.
ConvergenceReport convergence_study(const std::vector<int>& resolutions,
                                    const std::function<TensorField(int)>& simulate,
                                    const WassersteinOptions& options = {});

/// CSV with header `N,error_w,error_r,order_w`. Row k holds the pair
/// (N_k, N_{k+1}) labelled by N_k; order_w is empty on the first row.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

/// Fixed-width table, one line per pair.
void write_convergence_table(std::ostream& os, const ConvergenceReport& report);

}  // namespace netmorph
