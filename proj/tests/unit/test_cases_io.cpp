#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "efmhd/config.hpp"
#include "efmhd/driver.hpp"
#include "efmhd/io.hpp"
#include "oracles.hpp"

using namespace efmhd;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("efmhd_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ConfigFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("vortex preset") {
  const auto c = preset_vortex(20, 2);
  CHECK(c.lower[0] == -10.0);
  CHECK(c.upper[1] == 10.0);
  CHECK(c.gamma == Approx(5.0 / 3.0));
  CHECK(c.mu == 5.38948938512);
  CHECK(c.dt == 1e-4);
  CHECK(c.t_end == 0.05);

  const auto far = vortex_state(9.9, -9.9, 0.0, c.mu);
  CHECK(far.rho == 1.0);
  CHECK(far.v.x == Approx(1.0).epsilon(1e-12));
  CHECK(far.v.y == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(far.B.x) < 1e-12);
  CHECK(far.P == Approx(1.0).epsilon(1e-12));

  // on the unit circle phi = 1, so dP = -2 mu^2 / (8 pi^2)
  const auto ring = vortex_state(1.0, 0.0, 0.0, c.mu);
  CHECK(ring.P - 1.0 == Approx(-2.0 * c.mu * c.mu / (8 * kPi * kPi)).epsilon(1e-13));

  // minimum pressure over a fine radial scan sits at the centre, near 2e-8
  double pmin = 1.0;
  for (int i = 0; i <= 2000; ++i) pmin = std::min(pmin, vortex_state(i * 1e-3, 0.0, 0.0, c.mu).P);
  CHECK(pmin == Approx(2e-8).epsilon(0.05));

  // advected with unit speed in both directions and periodic wrap
  const auto moved = vortex_state(0.3 + 20.0, -0.2, 20.0, c.mu);
  const auto base = vortex_state(0.3, -0.2 - 20.0 + 20.0, 0.0, c.mu);
  CHECK(moved.P == Approx(base.P));
}

TEST_CASE("Brio-Wu preset") {
  const auto c = preset_briowu(200, 3);
  CHECK(c.gamma == 2.0);
  CHECK(c.dt == Approx(2e-4));
  CHECK(c.t_end == 0.1);
  CHECK(std::lround(c.t_end / c.dt) == 500);
  CHECK(c.left == PrimitiveState{1.0, {0, 0, 0}, {0.75, 1.0, 0.0}, 1.0});
  CHECK(c.right == PrimitiveState{0.125, {0, 0, 0}, {0.75, -1.0, 0.0}, 0.1});
  CHECK(c.left.B.x == c.right.B.x);
  CHECK(c.bcs.sides[0].kind == BoundaryKind::Dirichlet);
  CHECK(c.bcs.sides[1].kind == BoundaryKind::Dirichlet);
  CHECK(initial_state(c, 0.25, 0).rho == 1.0);
  CHECK(initial_state(c, 0.75, 0).rho == 0.125);
}

TEST_CASE("Orszag-Tang preset") {
  const auto c = preset_otv(64, 3);
  CHECK(c.dt == Approx(4e-4));
  CHECK(c.t_end == 0.5);
  const auto o = initial_state(c, 0.0, 0.0);
  CHECK(o.v == Vec3{-0.0, 0.0, 0.0});
  CHECK(std::abs(o.B.x) + std::abs(o.B.y) == 0.0);
  CHECK(o.rho == Approx(25.0 / (36.0 * kPi)));
  CHECK(o.P == Approx(5.0 / (12.0 * kPi)));
  const auto q = initial_state(c, 0.125, 0.25);
  CHECK(q.v.x == Approx(-1.0));
  CHECK(q.B.x == Approx(1.0 / std::sqrt(4.0 * kPi)));
  CHECK(q.B.y == Approx(-1.0 / std::sqrt(4.0 * kPi)));

  // the discrete divergence of the interpolated field is small and reported
  Simulation sim(preset_otv(16, 3));
  const double d = sim.initial_row().divb_l1;
  MESSAGE("initial OTV divB L1 at 16^2 P3: " << d);
  CHECK(d < 1e-2);
}

TEST_CASE("blast preset") {
  const auto c = preset_blast(100, 4);
  CHECK(c.riemann == RiemannSolver::Hll);
  CHECK(c.dt == 2e-7);
  CHECK(c.t_end == 1e-3);
  CHECK(c.p_inside / c.p_outside == Approx(1e5));
  CHECK(c.b0 == Approx(1000.0 / std::sqrt(4.0 * kPi)));
  CHECK(initial_state(c, 0.0, 0.05).P == 1e4);
  CHECK(initial_state(c, 0.3, 0.0).P == 0.1);
  CHECK(initial_state(c, 0.3, 0.0).rho == 1.0);
}

TEST_CASE("case names and validation") {
  CHECK(parse_case_kind("briowu") == CaseKind::Riemann);
  CHECK(parse_case_kind("otv") == CaseKind::OrszagTang);
  CHECK_THROWS_AS(parse_case_kind("kelvin"), ConfigError);
  auto c = preset_uniform(4, 1);
  c.dt = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = preset_uniform(4, 1);
  c.t_end = -1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("configuration files") {
  const auto cf = parse(R"(
[case]
name = vortex
mu = 5.0

[mesh]
cells = 12 12

[discretization]
order = 3
riemann = rusanov

[time]
dt = 2e-4
t_end = 0.01

[filter]
eps = 1e-9
max_iter = 30

[output]
directory = out
prefix = v
vtk = false

[convergence]
orders = 2 3 4
resolutions = 10 20
)");
  CHECK(cf.run.kind == CaseKind::Vortex);
  CHECK(cf.run.mu == 5.0);
  CHECK(cf.run.cells == std::array<int, 2>{12, 12});
  CHECK(cf.run.order == 3);
  CHECK(cf.run.riemann == RiemannSolver::Rusanov);
  CHECK(cf.run.dt == 2e-4);
  CHECK(cf.run.filter.eps == 1e-9);
  CHECK(cf.run.filter.max_iter == 30);
  CHECK(cf.run.output.prefix == "v");
  CHECK_FALSE(cf.run.output.vtk);
  CHECK(cf.convergence.orders == std::vector<int>{2, 3, 4});
  CHECK(cf.convergence.resolutions == std::vector<int>{10, 20});
  CHECK(cf.run.lower[0] == -10.0);  // preset value kept

  const auto bw = parse("[case]\nname = briowu\n[mesh]\ncells = 100\n");
  CHECK(bw.run.cells[0] == 100);
  CHECK(bw.run.dt == Approx(4e-4));

  const auto custom = parse(
      "[case]\nname = riemann\n[physics]\ngamma = 1.4\n[boundary]\nx_lower = neumann\nx_upper = reflecting\n");
  CHECK(custom.run.gamma == 1.4);
  CHECK(custom.run.bcs.sides[1].kind == BoundaryKind::Reflecting);

  CHECK_THROWS_AS(parse("[case]\nname = vortex\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("[bogus]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[case]\nname = vortex\n[time]\ndt = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("[case]\nname = vortex\n[time]\ndt = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[case]\nname = vortex\n[discretization]\nriemann = roe\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/efmhd.ini"), ConfigError);
}

TEST_CASE("snapshot CSV round trip is exact") {
  auto cfg = preset_otv(5, 2);
  cfg.t_end = 3 * cfg.dt;
  Simulation sim(cfg);
  sim.run();
  const Snapshot s = sim.snapshot();
  std::stringstream buf;
  write_snapshot_csv(buf, s);
  const Snapshot r = read_snapshot_csv(buf);
  CHECK(r.case_name == s.case_name);
  CHECK(r.time == s.time);
  CHECK(r.order == 2);
  CHECK(r.cells == s.cells);
  CHECK(r.gamma == s.gamma);
  CHECK(r.field == s.field);

  std::stringstream bad("# case = x\nnot,a,header\n");
  CHECK_THROWS(read_snapshot_csv(bad));
}

TEST_CASE("runs write diagnostics and snapshots") {
  const auto dir = scratch_dir("run");
  auto cfg = preset_otv(8, 2);
  cfg.t_end = 6 * cfg.dt;
  cfg.output.directory = dir.string();
  cfg.output.prefix = "otv";
  cfg.output.snapshot_every = 3;
  Simulation sim(cfg);
  const auto res = sim.run();
  CHECK(res.completed);
  CHECK(res.steps == 6);
  CHECK(sim.time() == Approx(cfg.t_end).epsilon(1e-14));
  for (const char* f : {"otv_diagnostics.csv", "otv_000000.csv", "otv_000000.vtk", "otv_000003.csv", "otv_final.csv",
                        "otv_final.vtk"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  std::ifstream in(dir / "otv_diagnostics.csv");
  const auto rows = read_diagnostics_csv(in);
  REQUIRE(rows.size() == 7);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].time > rows[i - 1].time);
    CHECK(rows[i].total_mass == Approx(rows[0].total_mass).epsilon(1e-10));
  }
  const auto snap = read_snapshot_csv(dir / "otv_final.csv");
  CHECK(snap.field == sim.state());
}

TEST_CASE("a constant state stays put with the filter idle") {
  auto cfg = preset_uniform(6, 3, {1.2, {0.3, -0.1, 0.2}, {0.4, 0.1, -0.3}, 0.9});
  cfg.t_end = 10 * cfg.dt;
  Simulation sim(cfg);
  const Field u0 = sim.state();
  const auto res = sim.run();
  CHECK(res.completed);
  for (const auto& r : res.diagnostics) {
    CHECK(r.max_limiting == 0.0);
    CHECK(r.divb_l1 < 1e-12);
  }
  for (std::size_t i = 0; i < u0.size(); ++i) {
    for (int c = 0; c < kNumFields; ++c) CHECK(sim.state().data()[i][c] == Approx(u0.data()[i][c]).epsilon(1e-12));
  }
}

TEST_CASE("failed runs flush the last good state") {
  const auto dir = scratch_dir("fail");
  auto cfg = preset_blast(12, 3);
  cfg.filters_enabled = false;
  cfg.output.directory = dir.string();
  cfg.output.vtk = false;
  Simulation sim(cfg);
  const auto res = sim.run();
  CHECK_FALSE(res.completed);
  CHECK_FALSE(res.unrecoverable);
  CHECK(res.steps < 100);
  CHECK(fs::exists(dir / "run_lastgood.csv"));
  CHECK(read_snapshot_csv(dir / "run_lastgood.csv").field == sim.state());
}

TEST_CASE("line sampling evaluates the polynomial") {
  auto cfg = preset_uniform(4, 3);
  Simulation sim(cfg);
  // overwrite density with a global polynomial of degree 3 along x
  Field& u = sim.state();
  for (int e = 0; e < u.num_elements(); ++e) {
    for (int k = 0; k < sim.reference().num_nodes; ++k) {
      const auto [x, y] = sim.mesh().map_point(e, sim.reference().nodes[k][0], sim.reference().nodes[k][1]);
      u.at(e, k)[kRho] = 1.0 + x * x * x + 0.5 * y;
    }
  }
  const auto snap = sim.snapshot();
  const auto line = sample_line(snap, 'y', 0.3, 5);
  CHECK(line.size() == 20);
  for (const auto& s : line) {
    CHECK(s.y == 0.3);
    CHECK(s.u.rho() == Approx(1.0 + s.x * s.x * s.x + 0.15).epsilon(1e-12));
  }
  const auto at = evaluate_at(snap.field, sim.reference(), sim.mesh(), 0.37, 0.81);
  CHECK(at.rho() == Approx(1.0 + 0.37 * 0.37 * 0.37 + 0.405).epsilon(1e-12));
}

TEST_CASE("vortex error") {
  auto cfg = preset_vortex(20, 2);
  Simulation sim(cfg);
  const double e0 = vortex_error(sim.state(), sim.reference(), sim.mesh(), 0.0, cfg.mu);
  CHECK(e0 > 0.0);
  CHECK(e0 < 2.29e-4 * 10);

  // an exact translation of the data gives zero error at the matching time
  Snapshot s = sim.snapshot();
  CHECK(vortex_error(s) == Approx(e0));
  s.case_name = "orszag_tang";
  CHECK_THROWS_AS(vortex_error(s), std::invalid_argument);
}

TEST_CASE("convergence rates") {
  CHECK(convergence_rate({10, 20, 40}, {1e-2, 1.25e-3, 1.5625e-4}) == Approx(3.0));
  CHECK_THROWS_AS(convergence_rate({10}, {1e-3}), ConfigError);
  CHECK_THROWS_AS(convergence_rate({10, 10}, {1e-3, 2e-3}), ConfigError);
  CHECK_THROWS_AS(convergence_study(preset_vortex(4, 1), {1}, {8}), ConfigError);
}

TEST_CASE("P0 reference of a constant state is exact") {
  auto cfg = preset_briowu(50, 3);
  cfg.left = cfg.right = PrimitiveState{0.5, {0.2, 0, 0}, {0.75, 0.3, 0}, 0.4};
  cfg.bcs.sides[0].dirichlet = cfg.bcs.sides[1].dirichlet = cfg.left;
  cfg.t_end = 0.01;
  const auto snap = p0_reference(cfg, 200);
  CHECK(snap.order == 0);
  CHECK(snap.cells[0] == 200);
  const auto u0 = prim_to_cons(cfg.left, GasModel(cfg.gamma));
  for (const auto& x : snap.field.data()) {
    for (int c = 0; c < kNumFields; ++c) CHECK(x[c] == Approx(u0[c]).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("P0 Sod profile stays within the data bounds") {
  auto cfg = preset_briowu(50, 3);
  cfg.gamma = 1.4;
  cfg.left = {1.0, {}, {}, 1.0};
  cfg.right = {0.125, {}, {}, 0.1};
  cfg.bcs.sides[0].dirichlet = cfg.left;
  cfg.bcs.sides[1].dirichlet = cfg.right;
  cfg.t_end = 0.1;
  const auto snap = p0_reference(cfg, 400, 1e-4);
  const auto line = sample_line(snap, 'y', 0.0, 1);
  REQUIRE(line.size() == 400);
  // first-order Godunov is not strictly TVD for systems; small wiggles at the
  // contact are allowed but the variation stays close to the jump
  double tv = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    CHECK(line[i].u.rho() >= 0.125 - 1e-12);
    CHECK(line[i].u.rho() <= 1.0 + 1e-12);
    if (i > 0) tv += std::abs(line[i].u.rho() - line[i - 1].u.rho());
  }
  CHECK(tv <= 0.875 * 1.01);
  CHECK(line.front().u.rho() == Approx(1.0));
  CHECK(line.back().u.rho() == Approx(0.125));
}

TEST_CASE("synthetic benchmark inputs") {
  const auto s = make_synthetic_elements(3, 100, 0.3);
  CHECK(s.violating == 30);
  CHECK(s.nodal.size() == 100);
  const auto again = make_synthetic_elements(3, 100, 0.3);
  CHECK(again.nodal == s.nodal);

  const auto rep = bench_filter(3, 200, 0.0, 1);
  CHECK(rep.violating == 0);
  CHECK(rep.naive_feasible);
  CHECK(rep.optimized_feasible);
  const auto hot = bench_filter(3, 200, 1.0, 1);
  CHECK(hot.violating == 200);
  CHECK(hot.naive_feasible);
  CHECK(hot.optimized_feasible);
}
