/// \file driver.hpp
/// \brief Run orchestration, vortex error norms, convergence studies, the
/// P0 reference mode and the filter micro-benchmark.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "efmhd/cases.hpp"
#include "efmhd/io.hpp"
#include "efmhd/time_integrator.hpp"

namespace efmhd {

struct RunResult {
  std::vector<DiagnosticsRow> diagnostics;  // every step, independent of output cadence
  long steps = 0;
  double time = 0.0;
  bool completed = false;
  bool unrecoverable = false;
  std::string failure;
  double max_limiting = 0.0;
  double initial_mass = 0.0;
};

class Simulation {
 public:
  explicit Simulation(const CaseConfig& cfg);

  const CaseConfig& config() const { return cfg_; }
  const ReferenceElement& reference() const { return re_; }
  const StructuredMesh& mesh() const { return mesh_; }
  const SpatialOperator& op() const { return *op_; }
  const GasModel& gas() const { return gas_; }
  Stepper& stepper() { return *stepper_; }

  Field& state() { return u_; }
  const Field& state() const { return u_; }
  double time() const { return t_; }
  long steps() const { return steps_; }

  /// One step of size min(dt, t_end - t). Throws StepFailure.
  StepDiagnostics step();

  /// Steps to t_end, writing files when cfg.output.directory is set. A
  /// failure is reported in the result (the last good state is kept and
  /// written); it does not throw. `on_step` sees every diagnostics row.
  RunResult run(const std::function<void(const DiagnosticsRow&)>& on_step = {});

  Snapshot snapshot() const;
  DiagnosticsRow initial_row() const;

 private:
  CaseConfig cfg_;
  GasModel gas_;
  ReferenceElement re_;
  StructuredMesh mesh_;
  std::unique_ptr<SpatialOperator> op_;
  std::unique_ptr<Stepper> stepper_;
  Field u_;
  double t_ = 0.0;
  long steps_ = 0;
};

/// Magnetic L1 error of the vortex normalized by A = 400, using a 9-point
/// Gauss-Legendre rule per dimension in every element.
double vortex_error(const Field& u, const ReferenceElement& re, const StructuredMesh& mesh, double t, double mu);
double vortex_error(const Snapshot& s);

struct ConvergenceEntry {
  int order = 0;
  int cells = 0;
  double error = 0.0;
  double max_limiting = 0.0;
  bool completed = false;
};

struct ConvergenceTable {
  std::vector<ConvergenceEntry> entries;
  std::vector<std::pair<int, double>> rates;  // order -> least-squares rate
};

/// Least-squares slope of log(error) against log(cells per side), sign
/// flipped so that a decreasing error gives a positive rate.
double convergence_rate(const std::vector<int>& cells, const std::vector<double>& errors);

/// Runs the vortex for every (order, resolution) pair. Throws ConfigError
/// for fewer than two distinct resolutions.
ConvergenceTable convergence_study(const CaseConfig& base, const std::vector<int>& orders,
                                   const std::vector<int>& resolutions,
                                   const std::function<void(const ConvergenceEntry&)>& on_entry = {});

/// The case at p = 0 on `cells` elements along x (filters are inert).
/// dt <= 0 scales the configured step with the resolution.
Snapshot p0_reference(const CaseConfig& base, int cells, double dt = 0.0);

struct FilterBenchReport {
  int order = 0;
  int elements = 0;
  double violation_rate = 0.0;
  int violating = 0;
  double naive_seconds = 0.0;
  double optimized_seconds = 0.0;
  double ratio = 0.0;  // optimized / naive
  bool naive_feasible = false;
  bool optimized_feasible = false;
};

/// Synthetic 2D elements; a `violation_rate` fraction violates positivity
/// at some nodes. Inputs are drawn from a fixed seed.
struct SyntheticElements {
  int order = 0;
  std::vector<std::vector<ConservedState>> nodal;
  std::vector<ConstraintSet> constraints;
  int violating = 0;
};
SyntheticElements make_synthetic_elements(int p, int n_elements, double violation_rate, unsigned seed = 12345);

/// Times naive and optimized solvers on identical inputs (best of `repeats`)
/// and checks that both results satisfy the constraints at every node, up to
/// the round-off of recomputing the filtered state with a dense matvec.
FilterBenchReport bench_filter(int p, int n_elements, double violation_rate, int repeats = 3, unsigned seed = 12345);

}  // namespace efmhd
