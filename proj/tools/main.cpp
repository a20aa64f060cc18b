// efmhd: command-line driver for the filtered DSEM ideal-MHD solver.
//
//   efmhd run <config>
//   efmhd convergence <config>
//   efmhd bench <p> <n> <rate>
//   efmhd slice <snapshot> <axis> <coord>
//   efmhd reference <config>
//   efmhd vortex-error <snapshot>
//
// Exit codes: 0 success, 1 configuration or usage error, 2 the run lost
// admissibility (unrecoverable element, or any failure with filters off).
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "efmhd/config.hpp"
#include "efmhd/driver.hpp"
#include "efmhd/parallel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUnrecoverable = 2;

int cmd_run(const std::string& path, int threads, bool quiet) {
  efmhd::ConfigFile cf = efmhd::load_config(path);
  if (threads > 0) cf.run.threads = threads;
  efmhd::Simulation sim(cf.run);
  const auto t0 = std::chrono::steady_clock::now();
  long last_report = 0;
  const auto res = sim.run([&](const efmhd::DiagnosticsRow& r) {
    if (quiet || r.step - last_report < 100) return;
    last_report = r.step;
    std::fprintf(stderr, "step %ld  t=%.6g  max(1-f)=%.3g  min rho=%.4g  min P=%.4g\n", r.step, r.time,
                 r.max_limiting, r.min_rho, r.min_pressure);
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("case %s  p=%d  elements=%d  steps=%ld  t=%.9g  wall=%.2fs\n", cf.run.name.c_str(), cf.run.order,
              sim.mesh().num_elements(), res.steps, res.time, wall);
  std::printf("max(1-f)=%.6g\n", res.max_limiting);
  if (cf.run.kind == efmhd::CaseKind::Vortex && res.completed) {
    std::printf("vortex e_B=%.6e\n", efmhd::vortex_error(sim.state(), sim.reference(), sim.mesh(), sim.time(), cf.run.mu));
  }
  if (!res.completed) {
    std::fprintf(stderr, "run failed: %s\n", res.failure.c_str());
    return kExitUnrecoverable;
  }
  return kExitOk;
}

int cmd_convergence(const std::string& path, int threads) {
  efmhd::ConfigFile cf = efmhd::load_config(path);
  if (threads > 0) cf.run.threads = threads;
  std::printf("order,cells,error,max_limiting\n");
  const auto table = efmhd::convergence_study(cf.run, cf.convergence.orders, cf.convergence.resolutions,
                                              [](const efmhd::ConvergenceEntry& e) {
                                                std::printf("%d,%d,%.6e,%.6e\n", e.order, e.cells, e.error,
                                                            e.max_limiting);
                                                std::fflush(stdout);
                                              });
  for (const auto& [p, rate] : table.rates) std::printf("rate P%d = %.3f\n", p, rate);
  for (const auto& e : table.entries) {
    if (!e.completed) return kExitUnrecoverable;
  }
  return kExitOk;
}

int cmd_bench(int p, int n, double rate, int repeats) {
  const auto rep = efmhd::bench_filter(p, n, rate, repeats);
  std::printf("p=%d elements=%d violating=%d\n", rep.order, rep.elements, rep.violating);
  std::printf("naive     %.6f s  feasible=%s\n", rep.naive_seconds, rep.naive_feasible ? "yes" : "no");
  std::printf("optimized %.6f s  feasible=%s\n", rep.optimized_seconds, rep.optimized_feasible ? "yes" : "no");
  std::printf("ratio optimized/naive = %.3f  (speedup %.2fx)\n", rep.ratio, rep.ratio > 0 ? 1.0 / rep.ratio : 0.0);
  return rep.naive_feasible && rep.optimized_feasible ? kExitOk : kExitUnrecoverable;
}

int cmd_slice(const std::string& path, const std::string& axis, double coord, int samples, const std::string& out) {
  if (axis != "x" && axis != "y") throw CLI::ValidationError("axis", "must be x or y");
  const auto snap = efmhd::read_snapshot_csv(path);
  const int per = samples > 0 ? samples : 2 * (snap.order + 1);
  const auto line = efmhd::sample_line(snap, axis[0], coord, per);
  if (out.empty()) {
    efmhd::write_line_csv(std::cout, line, snap.gamma);
  } else {
    std::ofstream os(out);
    efmhd::write_line_csv(os, line, snap.gamma);
  }
  return kExitOk;
}

int cmd_reference(const std::string& path, const std::string& out, int threads) {
  efmhd::ConfigFile cf = efmhd::load_config(path);
  if (threads > 0) cf.run.threads = threads;
  const auto t0 = std::chrono::steady_clock::now();
  const auto snap = efmhd::p0_reference(cf.run, cf.reference.cells, cf.reference.dt);
  const auto line = efmhd::sample_line(snap, 'y', 0.0, 1);
  std::vector<efmhd::LineSample> kept;
  const int k = std::max(cf.reference.decimate, 1);
  for (std::size_t i = k / 2; i < line.size(); i += k) kept.push_back(line[i]);
  std::ofstream os(out.empty() ? cf.run.name + "_p0_reference.csv" : out);
  os << "# P0 reference: case=" << cf.run.name << " cells=" << cf.reference.cells << " t=" << snap.time << '\n';
  efmhd::write_line_csv(os, kept, snap.gamma);
  std::printf("reference: %d cells, %zu samples, wall %.1fs\n", cf.reference.cells, kept.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity-preserving filtered DSEM solver for ideal MHD"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0: default)");

  std::string config;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run a case to its end time");
  run->add_option("config", config, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_flag("-q,--quiet", quiet, "No progress output");

  auto* conv = app.add_subcommand("convergence", "Vortex convergence study");
  conv->add_option("config", config, "Configuration file")->required()->check(CLI::ExistingFile);

  int p = 3, n = 10000, repeats = 3;
  double rate = 1.0;
  auto* bench = app.add_subcommand("bench", "Naive vs optimized filter solve on synthetic elements");
  bench->add_option("p", p, "Polynomial order")->required()->check(CLI::Range(1, 10));
  bench->add_option("n", n, "Number of elements")->required()->check(CLI::PositiveNumber);
  bench->add_option("rate", rate, "Fraction of violating elements")->required()->check(CLI::Range(0.0, 1.0));
  bench->add_option("--repeats", repeats, "Timing repeats (best is reported)");

  std::string snapshot, axis, out;
  double coord = 0.0;
  int samples = 0;
  auto* slice = app.add_subcommand("slice", "Sample a snapshot along a line");
  slice->add_option("snapshot", snapshot, "Snapshot CSV")->required()->check(CLI::ExistingFile);
  slice->add_option("axis", axis, "Coordinate held fixed (x or y)")->required();
  slice->add_option("coord", coord, "Value of the fixed coordinate")->required();
  slice->add_option("--samples", samples, "Samples per element (default 2(p+1))");
  slice->add_option("-o,--output", out, "Output CSV (default stdout)");

  auto* ref = app.add_subcommand("reference", "High-resolution P0 reference solution");
  ref->add_option("config", config, "Configuration file")->required()->check(CLI::ExistingFile);
  ref->add_option("-o,--output", out, "Output CSV");

  auto* verr = app.add_subcommand("vortex-error", "Magnetic L1 error of a vortex snapshot");
  verr->add_option("snapshot", snapshot, "Snapshot CSV")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (threads > 0) efmhd::set_num_threads(threads);

  try {
    if (*run) return cmd_run(config, threads, quiet);
    if (*conv) return cmd_convergence(config, threads);
    if (*bench) return cmd_bench(p, n, rate, repeats);
    if (*slice) return cmd_slice(snapshot, axis, coord, samples, out);
    if (*ref) return cmd_reference(config, out, threads);
    if (*verr) {
      std::printf("%.6e\n", efmhd::vortex_error(efmhd::read_snapshot_csv(snapshot)));
      return kExitOk;
    }
  } catch (const efmhd::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const efmhd::UnrecoverableElementError& e) {
    std::fprintf(stderr, "unrecoverable element: %s\n", e.what());
    return kExitUnrecoverable;
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
