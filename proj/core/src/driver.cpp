#include "efmhd/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "efmhd/parallel.hpp"
#include "efmhd/polynomial.hpp"

namespace efmhd {

namespace {

constexpr double kVortexArea = 400.0;
constexpr int kErrorQuadraturePoints = 9;

std::string step_tag(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06ld", step);
  return buf;
}

void write_snapshot_files(const std::filesystem::path& dir, const std::string& stem, const Snapshot& s, bool vtk) {
  write_snapshot_csv(dir / (stem + ".csv"), s);
  if (vtk) write_vtk(dir / (stem + ".vtk"), s);
}

}  // namespace

Simulation::Simulation(const CaseConfig& cfg)
    : cfg_(cfg),
      gas_(cfg.gamma),
      re_(build_reference_element(cfg.order, cfg.dim, cfg.mode_order)),
      mesh_(make_mesh(cfg)) {
  validate(cfg_);
  if (cfg_.threads > 0) set_num_threads(cfg_.threads);
  op_ = std::make_unique<SpatialOperator>(re_, mesh_, gas_, cfg_.riemann);
  StepConfig sc;
  sc.dt = cfg_.dt;
  sc.t_end = cfg_.t_end;
  sc.filters_enabled = cfg_.filters_enabled;
  sc.filter = cfg_.filter;
  stepper_ = std::make_unique<Stepper>(*op_, sc);
  u_ = initial_field(cfg_, re_, mesh_);
}

StepDiagnostics Simulation::step() {
  const double remaining = cfg_.t_end - t_;
  const bool last = remaining <= cfg_.dt * (1.0 + 1e-9);
  const double dt = last ? remaining : cfg_.dt;
  StepDiagnostics d = stepper_->ssprk3_step(u_, dt);
  ++steps_;
  t_ = last ? cfg_.t_end : steps_ * cfg_.dt;
  return d;
}

Snapshot Simulation::snapshot() const {
  Snapshot s;
  s.case_name = cfg_.name;
  s.time = t_;
  s.order = cfg_.order;
  s.dim = cfg_.dim;
  s.cells = mesh_.cells;
  s.lower = cfg_.lower;
  s.upper = cfg_.upper;
  s.gamma = cfg_.gamma;
  s.mu = cfg_.kind == CaseKind::Vortex ? cfg_.mu : 0.0;
  s.field = u_;
  return s;
}

DiagnosticsRow Simulation::initial_row() const {
  DiagnosticsRow r;
  r.step = steps_;
  r.time = t_;
  r.min_rho = std::numeric_limits<double>::infinity();
  r.min_pressure = std::numeric_limits<double>::infinity();
  for (const auto& x : u_.data()) {
    r.min_rho = std::min(r.min_rho, x.rho());
    r.min_pressure = std::min(r.min_pressure, pressure(x, gas_));
  }
  r.divb_l1 = stepper_->divb_l1(u_);
  r.total_mass = total_mass(u_, re_, mesh_);
  return r;
}

RunResult Simulation::run(const std::function<void(const DiagnosticsRow&)>& on_step) {
  RunResult res;
  const bool files = !cfg_.output.directory.empty();
  const std::filesystem::path dir(cfg_.output.directory);
  std::ofstream diag;
  if (files) {
    std::filesystem::create_directories(dir);
    diag.open(dir / (cfg_.output.prefix + "_diagnostics.csv"));
    if (!diag) throw std::runtime_error("cannot write diagnostics in " + dir.string());
    write_diagnostics_header(diag);
  }

  DiagnosticsRow row0 = initial_row();
  res.initial_mass = row0.total_mass;
  res.diagnostics.push_back(row0);
  if (on_step) on_step(row0);
  if (files) {
    write_diagnostics_row(diag, row0);
    write_snapshot_files(dir, cfg_.output.prefix + "_" + step_tag(0), snapshot(), cfg_.output.vtk);
  }

  while (t_ < cfg_.t_end) {
    StepDiagnostics d;
    try {
      d = step();
    } catch (const StepFailure& err) {
      res.failure = "step " + std::to_string(steps_ + 1) + ", " + err.what();
      res.unrecoverable = err.unrecoverable();
      break;
    }
    DiagnosticsRow r;
    r.step = steps_;
    r.time = t_;
    r.max_limiting = d.max_limiting;
    r.he_activations = d.he_activations;
    r.hp_activations = d.hp_activations;
    r.max_iterations = d.max_iterations;
    r.filtered_elements = d.filtered_elements;
    r.min_rho = d.min_rho;
    r.min_pressure = d.min_pressure;
    r.min_entropy_margin = d.min_entropy_margin;
    r.divb_l1 = d.divb_l1;
    r.total_mass = total_mass(u_, re_, mesh_);
    res.max_limiting = std::max(res.max_limiting, d.max_limiting);
    res.diagnostics.push_back(r);
    if (on_step) on_step(r);
    const bool done = !(t_ < cfg_.t_end);
    if (files && (steps_ % cfg_.output.diagnostics_every == 0 || done)) {
      write_diagnostics_row(diag, r);
      diag.flush();
    }
    if (files && cfg_.output.snapshot_every > 0 && steps_ % cfg_.output.snapshot_every == 0 && !done) {
      write_snapshot_files(dir, cfg_.output.prefix + "_" + step_tag(steps_), snapshot(), cfg_.output.vtk);
    }
  }

  res.steps = steps_;
  res.time = t_;
  res.completed = res.failure.empty();
  if (files) {
    const std::string stem = cfg_.output.prefix + (res.completed ? "_final" : "_lastgood");
    write_snapshot_files(dir, stem, snapshot(), cfg_.output.vtk);
  }
  return res;
}

double vortex_error(const Field& u, const ReferenceElement& re, const StructuredMesh& mesh, double t, double mu) {
  if (mesh.dim != 2) throw std::invalid_argument("vortex_error needs a 2D field");
  const auto gl = poly::gauss_legendre(kErrorQuadraturePoints);
  std::vector<std::vector<double>> interp;
  for (double x : gl.points) interp.push_back(poly::lagrange_weights(re.nodes_1d, x));
  const double jac = 0.25 * mesh.h[0] * mesh.h[1];

  std::vector<double> per_element(static_cast<std::size_t>(mesh.num_elements()));
  parallel_for(mesh.num_elements(), [&](int e) {
    const auto ue = u.element(e);
    double sum = 0.0;
    for (int qj = 0; qj < kErrorQuadraturePoints; ++qj) {
      for (int qi = 0; qi < kErrorQuadraturePoints; ++qi) {
        double bx = 0.0, by = 0.0;
        for (int j = 0; j < re.n1d; ++j) {
          for (int i = 0; i < re.n1d; ++i) {
            const double w = interp[qi][i] * interp[qj][j];
            const ConservedState& s = ue[re.node_index(i, j)];
            bx += w * s[kBx];
            by += w * s[kBy];
          }
        }
        const auto x = mesh.map_point(e, gl.points[qi], gl.points[qj]);
        const PrimitiveState ex = vortex_state(x[0], x[1], t, mu);
        sum += gl.weights[qi] * gl.weights[qj] * (std::abs(bx - ex.B.x) + std::abs(by - ex.B.y));
      }
    }
    per_element[e] = sum * jac;
  });
  return std::accumulate(per_element.begin(), per_element.end(), 0.0) / kVortexArea;
}

double vortex_error(const Snapshot& s) {
  if (s.case_name != "vortex") throw std::invalid_argument("vortex_error: snapshot is not a vortex run");
  const ReferenceElement re = build_reference_element(s.order, s.dim);
  return vortex_error(s.field, re, snapshot_mesh(s), s.time, s.mu);
}

double convergence_rate(const std::vector<int>& cells, const std::vector<double>& errors) {
  if (cells.size() != errors.size() || cells.size() < 2) {
    throw ConfigError("convergence rate needs at least two resolutions");
  }
  if (std::set<int>(cells.begin(), cells.end()).size() != cells.size()) {
    throw ConfigError("convergence rate: duplicate resolution");
  }
  const std::size_t n = cells.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(1.0 / cells[i]);
    my += std::log(errors[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(1.0 / cells[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceTable convergence_study(const CaseConfig& base, const std::vector<int>& orders,
                                   const std::vector<int>& resolutions,
                                   const std::function<void(const ConvergenceEntry&)>& on_entry) {
  if (base.kind != CaseKind::Vortex) throw ConfigError("convergence study needs the vortex case");
  if (resolutions.size() < 2) throw ConfigError("convergence study needs at least two resolutions");
  if (std::set<int>(resolutions.begin(), resolutions.end()).size() != resolutions.size()) {
    throw ConfigError("convergence study: duplicate resolution");
  }
  ConvergenceTable table;
  for (int p : orders) {
    std::vector<int> cells;
    std::vector<double> errors;
    for (int n : resolutions) {
      CaseConfig cfg = base;
      cfg.order = p;
      cfg.cells = {n, n};
      cfg.output.directory.clear();
      Simulation sim(cfg);
      const RunResult r = sim.run();
      ConvergenceEntry entry;
      entry.order = p;
      entry.cells = n;
      entry.completed = r.completed;
      entry.max_limiting = r.max_limiting;
      entry.error = r.completed ? vortex_error(sim.state(), sim.reference(), sim.mesh(), sim.time(), cfg.mu)
                                : std::numeric_limits<double>::quiet_NaN();
      table.entries.push_back(entry);
      if (on_entry) on_entry(entry);
      if (entry.completed) {
        cells.push_back(n);
        errors.push_back(entry.error);
      }
    }
    const double rate = cells.size() >= 2 ? convergence_rate(cells, errors) : std::numeric_limits<double>::quiet_NaN();
    table.rates.emplace_back(p, rate);
  }
  return table;
}

Snapshot p0_reference(const CaseConfig& base, int cells, double dt) {
  CaseConfig cfg = base;
  cfg.order = 0;
  cfg.cells[0] = cells;
  cfg.dt = dt > 0.0 ? dt : base.dt * base.cells[0] / cells;
  cfg.output.directory.clear();
  Simulation sim(cfg);
  const RunResult r = sim.run();
  if (!r.completed) throw std::runtime_error("P0 reference run failed: " + r.failure);
  return sim.snapshot();
}

SyntheticElements make_synthetic_elements(int p, int n_elements, double violation_rate, unsigned seed) {
  if (!(violation_rate >= 0.0 && violation_rate <= 1.0)) throw std::invalid_argument("violation rate must be in [0,1]");
  const GasModel gas(5.0 / 3.0);
  const ReferenceElement re = build_reference_element(p, 2);
  const int N = re.num_nodes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform = [&](double a, double b) { return a + (b - a) * unit(rng); };

  SyntheticElements out;
  out.order = p;
  const int violating = static_cast<int>(std::llround(violation_rate * n_elements));
  std::vector<char> flag(static_cast<std::size_t>(n_elements), 0);
  std::fill(flag.begin(), flag.begin() + violating, 1);
  std::shuffle(flag.begin(), flag.end(), rng);
  out.violating = violating;

  // Zero-mean nodal shape from random non-constant modes, scaled so that its
  // minimum over the nodes is -1.
  auto shape = [&]() {
    Eigen::VectorXd c(N);
    c(0) = 0.0;
    for (int m = 1; m < N; ++m) c(m) = normal(rng) / (1.0 + re.mode_order[m]);
    Eigen::VectorXd s = re.vandermonde * c;
    return Eigen::VectorXd(s / -s.minCoeff());
  };

  for (int e = 0; e < n_elements && p > 0; ++e) {
    const double rho = uniform(0.5, 2.0);
    const double P = uniform(0.2, 1.0);
    const Vec3 v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-0.2, 0.2)};
    const Vec3 B{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-0.2, 0.2)};
    const double a = flag[e] ? uniform(1.2, 3.0) : uniform(0.0, 0.5);
    const double b = uniform(0.0, 0.3);
    const Eigen::VectorXd sp = shape();
    const Eigen::VectorXd sr = shape();
    std::vector<ConservedState> nodal(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      nodal[i] = prim_to_cons({rho * (1.0 + b * sr(i)), v, B, 1.0}, gas);
      // Perturb the internal energy directly so that P is exactly affine in the shape.
      const Vec3 m = nodal[i].momentum();
      nodal[i][kEnergy] = P * (1.0 + a * sp(i)) / (gas.gamma() - 1.0) + 0.5 * dot(m, m) / nodal[i].rho() +
                          0.5 * dot(B, B);
    }
    ConstraintSet c;
    c.mode = ConstraintMode::PositivityAndEntropy;
    c.sigma_min = 0.01 * P * std::pow(rho, -gas.gamma());
    out.nodal.push_back(std::move(nodal));
    out.constraints.push_back(c);
  }
  return out;
}

namespace {

bool feasible_after_filter(const std::vector<ConservedState>& nodal, const ReferenceElement& re, double f,
                           const ConstraintSet& c, const GasModel& g) {
  const int N = re.num_nodes;
  Eigen::MatrixXd U(N, kNumFields);
  for (int i = 0; i < N; ++i) {
    for (int q = 0; q < kNumFields; ++q) U(i, q) = nodal[i][q];
  }
  Eigen::MatrixXd modal = re.inv_vandermonde * U;
  for (int m = 0; m < N; ++m) modal.row(m) *= std::pow(f, re.mode_order[m] * re.mode_order[m]);
  const Eigen::MatrixXd filtered = re.vandermonde * modal;
  for (int i = 0; i < N; ++i) {
    ConservedState s;
    for (int q = 0; q < kNumFields; ++q) s[q] = filtered(i, q);
    // the recomputed state differs from the solver's by round-off, which is
    // amplified by the pressure recovery from E (and by rho^-gamma for sigma)
    double scale = std::max(std::abs(s.rho()), (g.gamma() - 1.0) * std::abs(s.energy()));
    if (c.mode == ConstraintMode::PositivityAndEntropy && s.rho() > 0.0) scale *= std::max(1.0, std::pow(s.rho(), -g.gamma()));
    if (!(evaluate_constraints(s, c, g) >= -64.0 * std::numeric_limits<double>::epsilon() * scale)) return false;
  }
  return true;
}

}  // namespace

FilterBenchReport bench_filter(int p, int n_elements, double violation_rate, int repeats, unsigned seed) {
  if (p < 1) throw std::invalid_argument("bench_filter needs p >= 1");
  const GasModel gas(5.0 / 3.0);
  const ReferenceElement re = build_reference_element(p, 2);
  const ModeGroupOperators ops = build_mode_groups(re);
  const FilterSettings settings;
  const SyntheticElements syn = make_synthetic_elements(p, n_elements, violation_rate, seed);
  const int ne = static_cast<int>(syn.nodal.size());

  std::vector<double> f_naive(static_cast<std::size_t>(ne)), f_opt(static_cast<std::size_t>(ne));
  using clock = std::chrono::steady_clock;
  double best_naive = std::numeric_limits<double>::infinity();
  double best_opt = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    auto t0 = clock::now();
    for (int e = 0; e < ne; ++e) {
      f_naive[e] = naive_filter_solve(syn.nodal[e], ops, syn.constraints[e], gas, settings.tol, settings.max_iter).factor;
    }
    auto t1 = clock::now();
    for (int e = 0; e < ne; ++e) {
      const auto& nodal = syn.nodal[e];
      const ConstraintSet& c = syn.constraints[e];
      bool ok = true;
      for (const auto& x : nodal) {
        if (!(evaluate_constraints(x, c, gas) > 0.0)) {
          ok = false;
          break;
        }
      }
      f_opt[e] = ok ? 1.0
                    : solve_filter_factor(decompose_modes(nodal, ops), c, gas, settings.tol, settings.max_iter).factor;
    }
    auto t2 = clock::now();
    best_naive = std::min(best_naive, std::chrono::duration<double>(t1 - t0).count());
    best_opt = std::min(best_opt, std::chrono::duration<double>(t2 - t1).count());
  }

  FilterBenchReport rep;
  rep.order = p;
  rep.elements = ne;
  rep.violation_rate = violation_rate;
  rep.violating = syn.violating;
  rep.naive_seconds = best_naive;
  rep.optimized_seconds = best_opt;
  rep.ratio = best_naive > 0.0 ? best_opt / best_naive : 0.0;
  rep.naive_feasible = true;
  rep.optimized_feasible = true;
  for (int e = 0; e < ne; ++e) {
    rep.naive_feasible = rep.naive_feasible && feasible_after_filter(syn.nodal[e], re, f_naive[e], syn.constraints[e], gas);
    rep.optimized_feasible = rep.optimized_feasible && feasible_after_filter(syn.nodal[e], re, f_opt[e], syn.constraints[e], gas);
  }
  return rep;
}

}  // namespace efmhd
