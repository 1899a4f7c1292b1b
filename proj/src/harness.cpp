#include "netmorph/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <sstream>

#include "netmorph/diagnostics.hpp"
#include "netmorph/dynamics.hpp"
#include "netmorph/error.hpp"
#include "netmorph/format.hpp"
#include "netmorph/io.hpp"

namespace netmorph {

namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitUsage;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kExitIo;
  return kExitNumerical;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string step_name(const char* prefix, std::int64_t step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s_%08lld.bin", prefix, static_cast<long long>(step));
  return buf;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

std::string manifest_text(const RunConfig& config, const std::string& started,
                          const std::string& status) {
  std::ostringstream os;
  os << "# netmorph " << NETMORPH_VERSION << '\n'
     << "# started " << started << '\n'
     << "# " << status << '\n'
     << to_config_text(config);
  return os.str();
}

template <class Body>
int guarded(std::ostream& log, Body body) {
  try {
    return body();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

RunOptions run_options(const RunConfig& config) {
  RunOptions options;
  options.diagnostics_every = config.diagnostics_every;
  options.condition_every = config.cond_every;
  options.solver.kind = config.solver;
  return options;
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const fs::path out(config.output_dir);
    ensure_directory(out);
    const fs::path snapshots = out / "snapshots";
    ensure_directory(snapshots);

    const std::string started = utc_timestamp();
    write_file_atomic(out / "manifest.ini", manifest_text(config, started, "status running"));
    const auto t0 = std::chrono::steady_clock::now();

    const std::int64_t steps = step_count(config.params.t_fin, config.params.dt);
    const std::int64_t cadence =
        config.snapshot_every > 0 ? config.snapshot_every : std::max<std::int64_t>(1, steps / 10);
    RunOptions options = run_options(config);
    options.observers.push_back(Observer{1, [&](const SimState& s) {
      const bool due = s.step == 0 || s.step == steps || s.step % cadence == 0;
      if (!due) return;
      write_snapshot(snapshots / step_name("c", s.step), s.c_now);
      write_snapshot(snapshots / step_name("p", s.step), s.p_half);
    }});

    const Grid grid(config.n);
    RunResult result{SimState(TensorField(grid), config.params.dt), {}};
    try {
      result = run(config.params, config.scheme, initial_condition(grid, config.ic),
                   build_source(grid, config.source), options);
    } catch (const SimulationAborted& e) {
      const fs::path dump = out / step_name("abort_c", e.last_good().step);
      write_snapshot(dump, e.last_good().c_now);
      write_file_atomic(out / "manifest.ini",
                        manifest_text(config, started, "status failed: " + std::string(e.what())));
      log << "simulation aborted: " << e.what() << "\nlast good state written to " << dump.string()
          << '\n';
      return static_cast<int>(kExitNumerical);
    }

    write_snapshot(out / "c_final.bin", result.final_state.c_now);
    write_snapshot(out / "p_final.bin", result.final_state.p_half);
    if (!result.diagnostics.empty()) {
      write_file_atomic(out / "diagnostics.csv", diagnostics_csv(result.diagnostics));
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file_atomic(out / "manifest.ini",
                      manifest_text(config, started,
                                    "status ok, steps " + std::to_string(result.final_state.step) +
                                        ", wall_seconds " + format_double(wall)));
    log << "completed " << result.final_state.step << " steps in " << format_double(wall)
        << " s, output in " << out.string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_converge(const RunConfig& config, const ConvergeOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    validate_resolutions(options.resolutions);
    const fs::path out(config.output_dir);
    const fs::path store = out / "converge";
    ensure_directory(store);

    auto simulate = [&](int n) {
      RunConfig c = config;
      c.n = n;
      c.params.dt = 1.0 / n;
      c.diagnostics_every = 0;
      c.cond_every = 0;
      const Grid grid(n);
      log << "running N=" << n << '\n';
      RunResult r = run(c.params, c.scheme, initial_condition(grid, c.ic),
                        build_source(grid, c.source), run_options(c));
      write_snapshot(store / ("c_" + std::to_string(n) + ".bin"), r.final_state.c_now);
      return std::move(r.final_state.c_now);
    };
    const ConvergenceReport report = convergence_study(options.resolutions, simulate, options.wasserstein);

    std::ostringstream csv, table;
    write_convergence_csv(csv, report);
    write_convergence_table(table, report);
    write_file_atomic(out / "convergence.csv", csv.str());
    write_file_atomic(out / "convergence.txt", table.str());
    log << table.str();
    return static_cast<int>(report.complete() ? kExitOk : kExitNumerical);
  });
}

int cmd_compare(const fs::path& a, const fs::path& b, CompareMetric metric,
                const WassersteinOptions& wasserstein, std::ostream& out) {
  return guarded(out, [&] {
    TensorField first = read_tensor_snapshot(a);
    TensorField second = read_tensor_snapshot(b);
    if (first.n() > second.n()) std::swap(first, second);
    if (second.n() != first.n() && second.n() != 2 * first.n()) {
      throw DimensionError("snapshots of size " + std::to_string(first.n()) + " and " +
                           std::to_string(second.n()) + " are not nested");
    }
    if (metric != CompareMetric::Richardson) {
      out << "error_w " << format_double(error_wasserstein(first, second, wasserstein)) << '\n';
    }
    if (metric != CompareMetric::Wasserstein) {
      out << "error_r " << format_double(error_richardson(first, second)) << '\n';
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_diagnose(const fs::path& snapshot, const RunConfig& config, int stride,
                 const fs::path& out_dir, std::ostream& log) {
  return guarded(log, [&] {
    if (stride < 1) throw ConfigError("stride", 0, "must be >= 1");
    const TensorField c = read_tensor_snapshot(snapshot);
    ensure_directory(out_dir);
    const ScalarField source = build_source(c.grid(), config.source);
    SolverOptions solver;
    solver.kind = config.solver;
    const ScalarField p = solve_pressure(assemble(c, config.params.r), source, solver);

    write_file_atomic(out_dir / "norm.csv", field_csv(frobenius_norm_field(c)));
    write_file_atomic(out_dir / "flux.csv", field_csv(flux_magnitude(c, p, false, config.params.r)));
    write_file_atomic(out_dir / "eigenvectors.csv", eigenvector_csv(c, stride));
    const double ac = asymmetry_tensor(c);
    const double ap = asymmetry(p);
    write_file_atomic(out_dir / "asymmetry.csv",
                      "asymm_c,asymm_p\n" + format_double(ac) + ',' + format_double(ap) + '\n');
    log << "asymm_c " << format_double(ac) << "\nasymm_p " << format_double(ap) << '\n';
    return static_cast<int>(kExitOk);
  });
}

}  // namespace netmorph
