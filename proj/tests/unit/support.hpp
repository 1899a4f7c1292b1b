#pragma once

#include <random>

#include "netmorph/grid.hpp"

namespace testing_support {

/// Per-cell C = a a^T + b b^T with components drawn from [-scale, scale].
inline netmorph::TensorField random_psd(const netmorph::Grid& g, std::mt19937_64& rng,
                                        double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  netmorph::TensorField c(g);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double a1 = u(rng), a2 = u(rng), b1 = u(rng), b2 = u(rng);
    c.c11.values()[k] = a1 * a1 + b1 * b1;
    c.c12.values()[k] = a1 * a2 + b1 * b2;
    c.c22.values()[k] = a2 * a2 + b2 * b2;
  }
  return c;
}

inline netmorph::ScalarField random_field(const netmorph::Grid& g, std::mt19937_64& rng,
                                          double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  netmorph::ScalarField f(g);
  for (double& v : f.values()) v = u(rng);
  return f;
}

/// Zero-mean random source.
inline netmorph::ScalarField random_source(const netmorph::Grid& g, std::mt19937_64& rng) {
  netmorph::ScalarField f = random_field(g, rng);
  double mean = 0.0;
  for (double v : f.values()) mean += v;
  mean /= static_cast<double>(f.size());
  for (double& v : f.values()) v -= mean;
  return f;
}

}  // namespace testing_support
