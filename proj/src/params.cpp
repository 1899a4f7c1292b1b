#include "netmorph/params.hpp"

#include <cmath>

#include "netmorph/error.hpp"

namespace netmorph {

namespace {

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, 0, what);
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(r) && r > 0.0, "r", "must be > 0");
  require(std::isfinite(d_coef) && d_coef >= 0.0, "d_coef", "must be >= 0");
  require(std::isfinite(c_act) && c_act > 0.0, "c_act", "must be > 0");
  require(std::isfinite(alpha) && alpha > 0.0, "alpha", "must be > 0");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma", "must be > 0");
  require(std::isfinite(eps) && eps > 0.0, "eps", "must be > 0");
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be > 0");
  require(std::isfinite(t_fin) && t_fin >= 0.0, "t_fin", "must be >= 0");
}

void SourceSpec::validate() const {
  require(std::isfinite(x0) && x0 > 0.0 && x0 < 1.0, "x0", "must lie in (0, 1)");
  require(std::isfinite(y0) && y0 > 0.0 && y0 < 1.0, "y0", "must lie in (0, 1)");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma", "must be > 0");
}

}  // namespace netmorph
