#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "netmorph/dynamics.hpp"
#include "netmorph/elliptic.hpp"
#include "netmorph/grid_fields.hpp"
#include "netmorph/params.hpp"

namespace netmorph {

/// Everything a simulation run needs. No field is random: runs are fully
/// determined by the configuration (and the thread count).
struct RunConfig {
  ModelParams params;
  int n = 600;
  SchemeConfig scheme;
  InitialCondition ic = InitialCondition::ConstantOne;
  SourceSpec source;
  std::int64_t snapshot_every = 0;      ///< 0: every tenth of the run
  std::int64_t diagnostics_every = 10;  ///< 0: no diagnostics
  std::int64_t cond_every = 0;          ///< 0: no condition estimates
  std::string output_dir = "out";
  LinearSolverKind solver = LinearSolverKind::Auto;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Parses `key = value` lines. `#` starts a comment, blank lines are
/// ignored and `[section]` headers group keys (a key inside a section must
/// belong to it). Absent keys keep their defaults; `dt` defaults to 1/n.
/// Unknown keys, empty values and constraint violations raise ConfigError
/// with the key and line number.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file. Throws IoError when it cannot be read.
RunConfig load_config(const std::string& path);

/// Canonical text of a configuration; parse_config(to_config_text(c))
/// reproduces c exactly.
std::string to_config_text(const RunConfig& config);

std::string_view to_string(LinearSolverKind kind) noexcept;
std::string_view to_string(AdiVariant variant) noexcept;
std::string_view to_string(SweepOrder order) noexcept;

}  // namespace netmorph
