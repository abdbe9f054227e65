// Command-line front end: run, sweep, check.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "doifbp/checks.hpp"
#include "doifbp/config.hpp"
#include "doifbp/errors.hpp"
#include "doifbp/io.hpp"
#include "doifbp/limit_lab.hpp"
#include "doifbp/presets.hpp"

namespace fs = std::filesystem;
using namespace doifbp;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

int verbosity = 1;  // 0 quiet, 1 normal, 2 verbose

void log(int level, const std::string& msg) {
  if (verbosity >= level) std::cerr << msg << "\n";
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

unsigned sweep_threads() {
  const char* env = std::getenv("DOIFBP_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError(std::string("DOIFBP_THREADS must be a positive integer, got '") + env + "'");
  return static_cast<unsigned>(n);
}

fs::path prepare_output(const RunConfig& cfg) {
  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create output directory: " + ec.message());
  const fs::path used = dir / "config.used";
  std::FILE* out = std::fopen(used.string().c_str(), "wb");
  if (!out) throw IoError(used.string(), "cannot open for writing");
  const std::string text = serialize_config(cfg);
  std::fwrite(text.data(), 1, text.size(), out);
  std::fclose(out);
  return dir;
}

int cmd_run(const std::string& path) {
  const RunConfig cfg = load_config(path);
  if (cfg.gammas.size() != 1) throw ConfigError("gamma: run takes a single gamma; use the sweep subcommand for a list");
  const fs::path dir = prepare_output(cfg);
  const FluidState initial = make_initial_state(cfg, cfg.gammas.front());
  log(1, "run: preset " + cfg.preset + ", gamma " + g17(cfg.gammas.front()) + ", T " + g17(cfg.t_final));

  long count = 0;
  auto snap_name = [&](long k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_%06ld.snap", k);
    return (dir / buf).string();
  };
  if (cfg.snapshot_every > 0) snapshot(initial, snap_name(0));
  const StepObserver observer = [&](const FluidState&, const FluidState& after, double dt) {
    ++count;
    if (cfg.snapshot_every > 0 && count % cfg.snapshot_every == 0) snapshot(after, snap_name(count));
    if (verbosity >= 2 && count % cfg.record_every == 0) log(2, "step " + std::to_string(count) + " t=" + g17(after.t) + " dt=" + g17(dt));
  };
  const RunResult res = run(initial, cfg.t_final, cfg.record_every, cfg.cfl_safety, observer);
  if (cfg.snapshot_every > 0 && res.steps % cfg.snapshot_every != 0) snapshot(res.final_state, snap_name(res.steps));
  write_diagnostics(res.records, (dir / "diagnostics.csv").string());

  const DiagnosticsRecord& first = res.records.front();
  const DiagnosticsRecord& last = res.records.back();
  log(1, "run: " + std::to_string(res.steps) + " steps, E " + g17(first.E_total) + " -> " + g17(last.E_total) +
             ", wrote " + (dir / "diagnostics.csv").string());
  return kOk;
}

int cmd_sweep(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const unsigned threads = sweep_threads();
  const fs::path dir = prepare_output(cfg);
  SweepOptions o;
  o.t_final = cfg.t_final;
  o.eps = cfg.congestion_eps;
  o.cfl_safety = cfg.cfl_safety;
  o.record_every = cfg.record_every;
  o.threads = threads;
  // Building the first state up front surfaces preset errors as config errors.
  (void)make_initial_state(cfg, cfg.gammas.front());
  log(1, "sweep: " + std::to_string(cfg.gammas.size()) + " gamma values, " +
             (threads ? std::to_string(threads) : std::string("auto")) + " threads");
  const SweepResult res = gamma_sweep([&](double g) { return make_initial_state(cfg, g); }, cfg.gammas, o);
  for (const SweepRow& row : res.rows) {
    write_diagnostics(row.records, (dir / ("diagnostics_gamma_" + g17(row.gamma) + ".csv")).string());
    log(2, "gamma " + g17(row.gamma) + ": |(rho-1)+|_2 = " + g17(row.excess[1]) + ", steps " + std::to_string(row.steps));
  }
  write_sweep(res, (dir / "sweep.csv").string());
  log(1, "sweep: slope " + (res.slope_l2 ? g17(*res.slope_l2) : std::string("absent")) + ", wrote " +
             (dir / "sweep.csv").string());
  return kOk;
}

int cmd_check(const std::string& scratch) {
  bool all = true;
  for (int id : kCheckSuites) {
    const CheckResult r = run_check(id, scratch);
    all = all && r.passed;
    if (verbosity >= 1 || !r.passed) {
      std::printf("[%s] %d %s (%.1f s): %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds, r.detail.c_str());
      std::fflush(stdout);
    }
  }
  return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressible Doi model simulator and gamma-limit lab"};
  app.require_subcommand(1);
  bool quiet = false, verbose = false;
  app.add_flag("-q,--quiet", quiet, "Only report errors");
  app.add_flag("-v,--verbose", verbose, "Log every recorded step");

  std::string run_path, sweep_path, scratch = (fs::temp_directory_path() / "doifbp-check").string();
  auto* run_cmd = app.add_subcommand("run", "Single simulation; writes diagnostics.csv and optional snapshots");
  run_cmd->add_option("config", run_path, "Config file")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "Gamma sweep; writes sweep.csv");
  sweep_cmd->add_option("config", sweep_path, "Config file")->required();
  auto* check_cmd = app.add_subcommand("check", "Run the invariant and property suites");
  check_cmd->add_option("--scratch", scratch, "Directory for temporary snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  verbosity = quiet ? 0 : verbose ? 2 : 1;

  try {
    if (*run_cmd) return cmd_run(run_path);
    if (*sweep_cmd) return cmd_sweep(sweep_path);
    return cmd_check(scratch);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}
