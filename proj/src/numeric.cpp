#include "netmorph/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace netmorph {

namespace {

constexpr std::size_t kLeaf = 64;

template <class F>
double pairwise(std::span<const double> v, F f) noexcept {
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += f(x);
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half), f) + pairwise(v.subspan(half), f);
}

}  // namespace

double pairwise_sum(std::span<const double> values) noexcept {
  return pairwise(values, [](double x) { return x; });
}

double pairwise_sum_squares(std::span<const double> values) noexcept {
  return pairwise(values, [](double x) { return x * x; });
}

double max_abs(std::span<const double> values) noexcept {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace netmorph
