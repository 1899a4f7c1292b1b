#include "netmorph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "netmorph/diagnostics.hpp"
#include "netmorph/error.hpp"
#include "netmorph/format.hpp"
#include "netmorph/grid_fields.hpp"
#include "netmorph/numeric.hpp"

namespace netmorph {

void DiscreteMeasure::validate() const {
  if (support.size() != weights.size()) throw NumericalError("measure: support/weight size mismatch");
  if (support.empty()) throw NumericalError("measure: empty support");
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
      throw NumericalError("measure: negative or non-finite weight at index " + std::to_string(k));
    }
    if (!std::isfinite(support[k])) throw NumericalError("measure: non-finite support point");
  }
  const double total = pairwise_sum(weights);
  if (std::abs(total - 1.0) > 1e-12) {
    throw NumericalError("measure: weights sum to " + detail::format_number(total) + ", not 1");
  }
}

DiscreteMeasure make_measure(std::vector<double> support, std::vector<double> masses) {
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw NumericalError("measure: negative or non-finite mass");
  }
  const double total = pairwise_sum(masses);
  if (!(total > 0.0)) throw NumericalError("measure: total mass must be positive");
  for (double& m : masses) m /= total;
  DiscreteMeasure mu{std::move(support), std::move(masses)};
  mu.validate();
  return mu;
}

namespace {

std::vector<std::size_t> sorted_order(const std::vector<double>& support) {
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  return order;
}

}  // namespace

double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw NumericalError("Wasserstein order must be >= 1");
  mu.validate();
  nu.validate();
  const auto a = sorted_order(mu.support);
  const auto b = sorted_order(nu.support);
  std::size_t i = 0, j = 0;
  double wa = mu.weights[a[0]], wb = nu.weights[b[0]];
  double cost = 0.0;
  while (i < a.size() && j < b.size()) {
    const double m = std::min(wa, wb);
    const double d = std::abs(mu.support[a[i]] - nu.support[b[j]]);
    cost += m * (p == 1.0 ? d : std::pow(d, p));
    wa -= m;
    wb -= m;
    if (wa <= 0.0 && ++i < a.size()) wa = mu.weights[a[i]];
    if (wb <= 0.0 && ++j < b.size()) wb = nu.weights[b[j]];
  }
  return p == 1.0 ? cost : std::pow(cost, 1.0 / p);
}

DiscreteMeasure field_to_measure(const ScalarField& field) {
  const std::size_t cells = field.size();
  std::vector<double> support(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    support[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(cells);
  }
  auto v = field.values();
  return make_measure(std::move(support), std::vector<double>(v.begin(), v.end()));
}

namespace {

double sliced_distance(const ScalarField& a, const ScalarField& b, double p, int slices) {
  if (slices < 1) throw NumericalError("sliced Wasserstein needs at least one slice");
  const Grid& g = a.grid();
  const int n = g.n();
  auto av = a.values(), bv = b.values();
  std::vector<double> ma(av.begin(), av.end()), mb(bv.begin(), bv.end());
  double total = 0.0;
  for (int s = 0; s < slices; ++s) {
    const double theta = std::numbers::pi * s / slices;
    const double ct = std::cos(theta), st = std::sin(theta);
    std::vector<double> support(g.cells());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) support[g.index(i, j)] = g.x(i) * ct + g.y(j) * st;
    }
    const double w = wasserstein_1d(make_measure(support, ma), make_measure(support, mb), p);
    total += std::pow(w, p);
  }
  return std::pow(total / slices, 1.0 / p);
}

TensorField on_coarse_grid(const TensorField& coarse, const TensorField& fine) {
  if (fine.n() == coarse.n()) return fine;
  return restrict_to_coarse(fine, coarse.grid());
}

}  // namespace

double error_wasserstein(const TensorField& coarse, const TensorField& fine,
                         const WassersteinOptions& options) {
  const TensorField restricted = on_coarse_grid(coarse, fine);
  const ScalarField a = frobenius_norm_field(coarse);
  const ScalarField b = frobenius_norm_field(restricted);
  if (options.embedding == Embedding::Sliced) {
    return sliced_distance(a, b, options.p, options.slices);
  }
  return wasserstein_1d(field_to_measure(a), field_to_measure(b), options.p);
}

double error_richardson(const TensorField& coarse, const TensorField& fine) {
  const TensorField restricted = on_coarse_grid(coarse, fine);
  const std::size_t cells = coarse.grid().cells();
  std::vector<double> diff(3 * cells), base(3 * cells);
  for (int k = 0; k < 3; ++k) {
    const double weight = k == 1 ? std::sqrt(2.0) : 1.0;
    auto c = coarse.component(k).values();
    auto f = restricted.component(k).values();
    for (std::size_t m = 0; m < cells; ++m) {
      diff[k * cells + m] = weight * (c[m] - f[m]);
      base[k * cells + m] = weight * c[m];
    }
  }
  const double den = pairwise_sum_squares(base);
  if (!(den > 0.0)) throw NumericalError("Richardson error undefined: coarse solution is zero");
  return std::sqrt(pairwise_sum_squares(diff) / den);
}

void validate_resolutions(const std::vector<int>& resolutions) {
  if (resolutions.size() < 2) {
    throw ConfigError("resolutions", 0, "need at least two resolutions");
  }
  if (resolutions[0] < 3) throw ConfigError("resolutions", 0, "resolutions must be >= 3");
  for (std::size_t k = 1; k < resolutions.size(); ++k) {
    if (resolutions[k] != 2 * resolutions[k - 1]) {
      throw ConfigError("resolutions", 0,
                        "each resolution must double the previous one (" +
                            std::to_string(resolutions[k - 1]) + " -> " +
                            std::to_string(resolutions[k]) + ")");
    }
  }
}

ConvergenceReport convergence_study(const std::vector<int>& resolutions,
                                    const std::function<TensorField(int)>& simulate,
                                    const WassersteinOptions& options) {
  validate_resolutions(resolutions);
  ConvergenceReport report;
  report.resolutions = resolutions;
  report.embedding = options.embedding == Embedding::Sliced ? "sliced" : "row_major";
  report.wasserstein_p = options.p;

  std::vector<std::optional<TensorField>> solutions;
  for (int n : resolutions) {
    try {
      solutions.emplace_back(simulate(n));
    } catch (const std::exception& e) {
      report.failures.push_back("N=" + std::to_string(n) + ": " + e.what());
      solutions.emplace_back(std::nullopt);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k + 1 < solutions.size(); ++k) {
    double ew = nan, er = nan;
    if (solutions[k] && solutions[k + 1]) {
      ew = error_wasserstein(*solutions[k], *solutions[k + 1], options);
      try {
        er = error_richardson(*solutions[k], *solutions[k + 1]);
      } catch (const NumericalError&) {
        er = nan;
      }
    }
    report.error_w.push_back(ew);
    report.error_r.push_back(er);
  }
  for (std::size_t k = 0; k + 1 < report.error_w.size(); ++k) {
    report.order_w.push_back(std::log2(report.error_w[k] / report.error_w[k + 1]));
  }
  return report;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "N,error_w,error_r,order_w\n";
  for (std::size_t k = 0; k < report.error_w.size(); ++k) {
    os << report.resolutions[k] << ',' << format_double(report.error_w[k]) << ','
       << format_double(report.error_r[k]) << ',';
    if (k > 0) os << format_double(report.order_w[k - 1]);
    os << '\n';
  }
}

void write_convergence_table(std::ostream& os, const ConvergenceReport& report) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << "Wasserstein p=" << format_double(report.wasserstein_p) << ", embedding "
     << report.embedding << "\n";
  os << std::setw(12) << "N pair" << std::setw(14) << "error_W" << std::setw(10) << "order"
     << std::setw(14) << "error_R" << '\n';
  os << std::scientific << std::setprecision(3);
  for (std::size_t k = 0; k < report.error_w.size(); ++k) {
    const std::string pair =
        std::to_string(report.resolutions[k]) + "/" + std::to_string(report.resolutions[k + 1]);
    os << std::setw(12) << pair << std::setw(14) << report.error_w[k];
    if (k > 0) {
      os << std::setw(10) << std::fixed << std::setprecision(2) << report.order_w[k - 1]
         << std::scientific << std::setprecision(3);
    } else {
      os << std::setw(10) << "-";
    }
    os << std::setw(14) << report.error_r[k] << '\n';
  }
  for (const std::string& f : report.failures) os << "failed: " << f << '\n';
  os.flags(flags);
  os.precision(precision);
}

}  // namespace netmorph
