#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "netmorph/config.hpp"
#include "netmorph/metrics.hpp"

namespace netmorph {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,      ///< bad arguments or configuration
  kExitNumerical = 3,  ///< solver or simulation failure
  kExitIo = 4,         ///< unreadable, unwritable or corrupt files
};

/// Maps an exception to an exit code (unknown exceptions count as numerical).
int exit_code_for(const std::exception& e) noexcept;

/// Runs one simulation into config.output_dir:
///   manifest.ini             configuration echo plus version and timing comments
///   diagnostics.csv          when diagnostics are enabled
///   snapshots/c_<step>.bin   conductivity at step 0, every snapshot_every steps (a tenth
///                            of the run when 0) and at the end
///   snapshots/p_<step>.bin   matching pressures
///   c_final.bin, p_final.bin final state
/// On a failed step the last good state is written as abort_c_<step>.bin.
int cmd_run(const RunConfig& config, std::ostream& log);

struct ConvergeOptions {
  std::vector<int> resolutions{100, 200, 400};
  WassersteinOptions wasserstein;
};

/// Runs the configuration at each resolution with dt = h, stores the final
/// conductivities as converge/c_<N>.bin and writes convergence.csv and
/// convergence.txt.
int cmd_converge(const RunConfig& config, const ConvergeOptions& options, std::ostream& log);

enum class CompareMetric { Wasserstein, Richardson, Both };

/// Prints `error_w <value>` and/or `error_r <value>` for two tensor
/// snapshots on the same grid or on nested grids (N and 2N, in any order).
int cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                CompareMetric metric, const WassersteinOptions& wasserstein, std::ostream& out);

/// Writes norm.csv, flux.csv, eigenvectors.csv (every `stride`-th cell) and
/// asymmetry.csv for a tensor snapshot into `out_dir`. The pressure is solved
/// from the snapshot with the configuration's parameters and source.
int cmd_diagnose(const std::filesystem::path& snapshot, const RunConfig& config, int stride,
                 const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace netmorph
