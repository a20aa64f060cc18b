#include "properties.hpp"

#include <algorithm>
#include <cmath>

#include "efmhd/driver.hpp"
#include "efmhd/parallel.hpp"
#include "efmhd/polynomial.hpp"
#include "efmhd/riemann.hpp"
#include "efmhd/spatial_rhs.hpp"
#include "oracles.hpp"

namespace props {

using namespace efmhd;

namespace {

Result finish(std::string name, double worst, double tol) { return {std::move(name), worst <= tol, worst, tol}; }

double rel_diff(const ConservedState& a, const ConservedState& b) {
  double scale = 1.0, d = 0.0;
  for (int i = 0; i < kNumFields; ++i) {
    scale = std::max(scale, std::abs(a[i]));
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d / scale;
}

Vec3 random_unit(oracle::Rng& rng) {
  for (;;) {
    const Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double n = norm(v);
    if (n > 0.1 && n <= 1.0) return (1.0 / n) * v;
  }
}

}  // namespace

Result eos_round_trip(std::uint64_t seed, int samples) {
  oracle::Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const GasModel g(rng.uniform(1.1, 2.5));
    const ConservedState u = oracle::to_conserved(oracle::random_primitive(rng), g.gamma());
    worst = std::max(worst, rel_diff(prim_to_cons(cons_to_prim(u, g), g), u));
  }
  return finish("EOS round trip prim_to_cons(cons_to_prim(u)) = u", worst, 1e-13);
}

Result partition_of_identity(int max_order) {
  oracle::Rng rng(11);
  double worst = 0.0;
  for (int p = 0; p <= max_order; ++p) {
    for (int dim : {1, 2}) {
      const auto re = build_reference_element(p, dim);
      for (int t = 0; t < 50; ++t) {
        const auto l = poly::lagrange_weights(re.nodes_1d, rng.uniform(-1, 1));
        double s = 0.0;
        for (double v : l) s += v;
        worst = std::max(worst, std::abs(s - 1.0));
      }
      const auto ops = build_mode_groups(re);
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(re.num_nodes, re.num_nodes);
      for (const auto& pk : ops.projectors) sum += pk;
      worst = std::max(worst, (sum - Eigen::MatrixXd::Identity(re.num_nodes, re.num_nodes)).cwiseAbs().maxCoeff());
      worst = std::max(worst, (re.vandermonde * re.inv_vandermonde - Eigen::MatrixXd::Identity(re.num_nodes, re.num_nodes))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
  }
  return finish("partition of identity (Lagrange sum, sum of mode projectors, V V^-1)", worst, 1e-12);
}

Result differentiation_exactness(int max_order) {
  double worst = 0.0;
  for (int p = 1; p <= max_order; ++p) {
    const auto re = build_reference_element(p, 2);
    for (int a = 0; a <= p; ++a) {
      for (int b = 0; b <= p; ++b) {
        Eigen::VectorXd f(re.num_nodes), dx(re.num_nodes), dy(re.num_nodes);
        for (int k = 0; k < re.num_nodes; ++k) {
          const double x = re.nodes[k][0], y = re.nodes[k][1];
          f(k) = std::pow(x, a) * std::pow(y, b);
          dx(k) = a == 0 ? 0.0 : a * std::pow(x, a - 1) * std::pow(y, b);
          dy(k) = b == 0 ? 0.0 : b * std::pow(x, a) * std::pow(y, b - 1);
        }
        worst = std::max(worst, (re.diff[0] * f - dx).cwiseAbs().maxCoeff() / std::max(1.0, 1.0 * p * p));
        worst = std::max(worst, (re.diff[1] * f - dy).cwiseAbs().maxCoeff() / std::max(1.0, 1.0 * p * p));
      }
    }
  }
  return finish("differentiation exact for tensor polynomials of degree <= p", worst, 1e-12);
}

Result riemann_consistency(std::uint64_t seed, int samples) {
  oracle::Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const GasModel g(rng.uniform(1.1, 2.5));
    const ConservedState u = oracle::to_conserved(oracle::random_primitive(rng), g.gamma());
    const Vec3 n = random_unit(rng);
    const ConservedState exact = normal_flux(u, n, g);
    for (auto solver : {RiemannSolver::Rusanov, RiemannSolver::Hll, RiemannSolver::Hllc}) {
      worst = std::max(worst, rel_diff(numerical_flux(solver, {u, u, n}, g), exact));
    }
  }
  return finish("Riemann consistency flux(u, u, n) = F(u) n", worst, 1e-12);
}

Result riemann_antisymmetry(std::uint64_t seed, int samples) {
  oracle::Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const GasModel g(rng.uniform(1.1, 2.5));
    const ConservedState ul = oracle::to_conserved(oracle::random_primitive(rng), g.gamma());
    const ConservedState ur = oracle::to_conserved(oracle::random_primitive(rng), g.gamma());
    const Vec3 n = random_unit(rng);
    for (auto solver : {RiemannSolver::Rusanov, RiemannSolver::Hll, RiemannSolver::Hllc}) {
      const ConservedState a = numerical_flux(solver, {ul, ur, n}, g);
      const ConservedState b = numerical_flux(solver, {ur, ul, -n}, g);
      worst = std::max(worst, rel_diff(a, -1.0 * b));
    }
  }
  return finish("Riemann antisymmetry flux(uL, uR, n) = -flux(uR, uL, -n)", worst, 1e-12);
}

Result filter_mean_conservation(std::uint64_t seed, int elements) {
  oracle::Rng rng(seed);
  double worst = 0.0;
  for (int e = 0; e < elements; ++e) {
    const int p = rng.integer(1, 5);
    const int dim = rng.integer(1, 2);
    const auto re = build_reference_element(p, dim);
    const auto ops = build_mode_groups(re);
    std::vector<ConservedState> nodal(re.num_nodes);
    for (auto& u : nodal) {
      for (int c = 0; c < kNumFields; ++c) u[c] = rng.uniform(-3, 3);
    }
    const auto ws = decompose_modes(nodal, ops);
    const auto filtered = filtered_eval(ws, rng.uniform(0, 1));
    for (int c = 0; c < kNumFields; ++c) {
      std::vector<double> a(re.num_nodes), b(re.num_nodes);
      for (int k = 0; k < re.num_nodes; ++k) {
        a[k] = nodal[k][c];
        b[k] = filtered[k][c];
      }
      worst = std::max(worst, std::abs(element_mean(re, a) - element_mean(re, b)));
    }
  }
  return finish("filter conserves element means for any f", worst, 1e-13);
}

Result filter_equivalence(std::uint64_t seed, int elements) {
  oracle::Rng rng(seed);
  double worst = 0.0;
  for (int e = 0; e < elements; ++e) {
    const int p = rng.integer(1, 5);
    const auto re = build_reference_element(p, rng.integer(1, 2));
    const auto ops = build_mode_groups(re);
    std::vector<ConservedState> nodal(re.num_nodes);
    for (auto& u : nodal) {
      for (int c = 0; c < kNumFields; ++c) u[c] = rng.uniform(-3, 3);
    }
    const double f = rng.uniform(0, 1);
    const auto fast = filtered_eval(decompose_modes(nodal, ops), f);
    const auto ref = oracle::filter_matvec(re, nodal, f);
    for (int k = 0; k < re.num_nodes; ++k) worst = std::max(worst, rel_diff(fast[k], ref[k]));
  }
  return finish("mode decomposition matches V Lambda V^-1 u", worst, 1e-12);
}

Result free_stream(std::uint64_t seed) {
  oracle::Rng rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const int p = 1 + trial % 4;
    const int dim = trial < 3 ? 2 : 1;
    const GasModel g(5.0 / 3.0);
    const auto re = build_reference_element(p, dim);
    const auto mesh = build_mesh(dim, {5, dim == 2 ? 4 : 1}, {-1.0, 0.0}, {2.0, 1.5}, BoundarySpec::all_periodic());
    const ConservedState u0 = oracle::to_conserved(oracle::random_primitive(rng), g.gamma());
    Field u(mesh.num_elements(), re.num_nodes);
    for (auto& s : u.data()) s = u0;
    for (auto solver : {RiemannSolver::Rusanov, RiemannSolver::Hll, RiemannSolver::Hllc}) {
      const SpatialOperator op(re, mesh, g, solver);
      Field rhs;
      std::vector<double> divB;
      op.compute_L1_and_divB(u, rhs, divB);
      for (const auto& r : rhs.data()) {
        for (int c = 0; c < kNumFields; ++c) worst = std::max(worst, std::abs(r[c]));
      }
      for (double d : divB) worst = std::max(worst, std::abs(d));
    }
  }
  return finish("free-stream: constant periodic state has zero L1 and divB", worst, 1e-11);
}

Result divergence_analytic(int max_order) {
  // B = curl(psi) + grad(phi) with polynomial potentials, so the continuous
  // field is a polynomial of degree <= p and divB = laplacian(phi).
  double worst = 0.0;
  for (int p = 2; p <= max_order; ++p) {
    const GasModel g(1.4);
    const auto re = build_reference_element(p, 2);
    BoundarySpec bcs;
    for (auto& s : bcs.sides) s.kind = BoundaryKind::Neumann;
    const auto mesh = build_mesh(2, {3, 4}, {-0.5, 0.0}, {1.0, 2.0}, bcs);
    const SpatialOperator op(re, mesh, g, RiemannSolver::Hll);
    Field u(mesh.num_elements(), re.num_nodes);
    std::vector<double> exact(u.size());
    for (int e = 0; e < mesh.num_elements(); ++e) {
      for (int k = 0; k < re.num_nodes; ++k) {
        const auto [x, y] = mesh.map_point(e, re.nodes[k][0], re.nodes[k][1]);
        // psi = x^2 y^(p-1); phi = x^p/p + x y
        const double bx_curl = (p - 1) * x * x * std::pow(y, p - 2);
        const double by_curl = -2.0 * x * std::pow(y, p - 1);
        const double bx = bx_curl + std::pow(x, p - 1) + y;
        const double by = by_curl + x;
        u.at(e, k) = oracle::to_conserved({1.0, {0.1, 0.2, 0.0}, {bx, by, 0.3}, 1.0}, g.gamma());
        exact[static_cast<std::size_t>(e * re.num_nodes + k)] = (p - 1) * std::pow(x, p - 2);
      }
    }
    std::vector<double> divB;
    op.compute_global_divB(u, divB);
    for (std::size_t i = 0; i < divB.size(); ++i) worst = std::max(worst, std::abs(divB[i] - exact[i]));
  }
  return finish("global divB exact for polynomial B of degree <= p", worst, 1e-10);
}

Result thread_determinism(int threads) {
  const int before = max_threads();
  auto run = [](int n) {
    set_num_threads(n);
    CaseConfig cfg = preset_otv(12, 3);
    cfg.t_end = 10 * cfg.dt;
    Simulation sim(cfg);
    sim.run();
    return sim.state();
  };
  const Field a = run(1);
  const Field b = run(threads);
  set_num_threads(before);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int c = 0; c < kNumFields; ++c) worst = std::max(worst, std::abs(a.data()[i][c] - b.data()[i][c]));
  }
  const bool identical = a == b;
  return {"bit-identical results for 1 and " + std::to_string(threads) + " threads", identical, worst, 0.0};
}

std::vector<Result> all() {
  return {eos_round_trip(),        partition_of_identity(), differentiation_exactness(), riemann_consistency(),
          riemann_antisymmetry(),  filter_mean_conservation(), filter_equivalence(),     free_stream(),
          divergence_analytic(),   thread_determinism()};
}

}  // namespace props
