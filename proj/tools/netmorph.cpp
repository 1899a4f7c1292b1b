// Command-line front end: run, converge, compare, diagnose.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "netmorph/config.hpp"
#include "netmorph/error.hpp"
#include "netmorph/harness.hpp"

using namespace netmorph;

namespace {

RunConfig load(const std::string& path, const std::string& out) {
  RunConfig config = path.empty() ? parse_config("") : load_config(path);
  if (!out.empty()) config.output_dir = out;
  return config;
}

std::vector<int> parse_resolutions(const std::string& text) {
  std::vector<int> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    try {
      std::size_t used = 0;
      values.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError("resolutions", 0, "not an integer: '" + item + "'");
    }
    start = end + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor network-formation solver and analysis harness"};
  app.set_version_flag("--version", std::string(NETMORPH_VERSION));
  app.require_subcommand(1);

  std::string config_path, out_dir, resolutions = "100,200,400", metric = "both";
  double wasserstein_order = 1.0;
  bool sliced = false;
  int stride = 8;
  int threads = 0;
  std::string snapshot_a, snapshot_b;

  app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)")
      ->check(CLI::NonNegativeNumber);

  auto* run = app.add_subcommand("run", "run one simulation");
  run->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory (overrides the configuration)");

  auto* converge = app.add_subcommand("converge", "multi-resolution convergence study");
  converge->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);
  converge->add_option("--out", out_dir, "output directory (overrides the configuration)");
  converge->add_option("--resolutions", resolutions, "comma-separated, each doubling the last")
      ->capture_default_str();
  converge->add_option("--wasserstein-order", wasserstein_order, "order p >= 1")
      ->capture_default_str();
  converge->add_flag("--sliced", sliced, "sliced 2D Wasserstein instead of row-major embedding");

  auto* compare = app.add_subcommand("compare", "metrics between two tensor snapshots");
  compare->add_option("a", snapshot_a, "first snapshot")->required();
  compare->add_option("b", snapshot_b, "second snapshot (same grid or doubled)")->required();
  compare->add_option("--metric", metric, "w, r or both")
      ->check(CLI::IsMember({"w", "r", "both"}))
      ->capture_default_str();
  compare->add_option("--wasserstein-order", wasserstein_order, "order p >= 1")
      ->capture_default_str();
  compare->add_flag("--sliced", sliced, "sliced 2D Wasserstein instead of row-major embedding");

  auto* diagnose = app.add_subcommand("diagnose", "plot-ready CSVs for a tensor snapshot");
  diagnose->add_option("snapshot", snapshot_a, "tensor snapshot")->required();
  diagnose->add_option("--config", config_path, "configuration (parameters and source)")
      ->check(CLI::ExistingFile);
  diagnose->add_option("--out", out_dir, "directory for the CSV files");
  diagnose->add_option("--stride", stride, "eigenvector subsampling")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    WassersteinOptions wasserstein;
    wasserstein.p = wasserstein_order;
    wasserstein.embedding = sliced ? Embedding::Sliced : Embedding::RowMajor;
    if (!(wasserstein_order >= 1.0)) {
      throw ConfigError("wasserstein-order", 0, "must be >= 1");
    }

    if (*run) return cmd_run(load(config_path, out_dir), std::cerr);
    if (*converge) {
      ConvergeOptions options;
      options.resolutions = parse_resolutions(resolutions);
      options.wasserstein = wasserstein;
      return cmd_converge(load(config_path, out_dir), options, std::cerr);
    }
    if (*compare) {
      const CompareMetric m = metric == "w"   ? CompareMetric::Wasserstein
                              : metric == "r" ? CompareMetric::Richardson
                                              : CompareMetric::Both;
      const int code = cmd_compare(snapshot_a, snapshot_b, m, wasserstein, std::cout);
      return code;
    }
    if (*diagnose) {
      const RunConfig config = load(config_path, "");
      return cmd_diagnose(snapshot_a, config, stride, out_dir.empty() ? "diagnose" : out_dir,
                          std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}
