#include <doctest.h>

#include <cmath>
#include <numbers>

#include "efmhd/spatial_rhs.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace efmhd;
using doctest::Approx;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Field smooth_periodic_field(const ReferenceElement& re, const StructuredMesh& mesh, const GasModel& g, double phase) {
  Field u(mesh.num_elements(), re.num_nodes);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int k = 0; k < re.num_nodes; ++k) {
      const auto [x, y] = mesh.map_point(e, re.nodes[k][0], re.nodes[k][1]);
      const double s = std::sin(kTwoPi * x + phase), c = std::cos(kTwoPi * y - phase);
      const PrimitiveState q{1.0 + 0.3 * s * c, {0.5 * c, -0.4 * s, 0.1}, {0.3 + 0.2 * s, 0.4 * c, 0.2 * s * c},
                             1.0 + 0.2 * c};
      u.at(e, k) = prim_to_cons(q, g);
    }
  }
  return u;
}

}  // namespace

TEST_CASE("free-stream preservation") {
  const auto r = props::free_stream();
  INFO(r.name << " worst " << r.worst);
  CHECK(r.passed);
}

TEST_CASE("divergence of polynomial fields is exact") {
  const auto r = props::divergence_analytic(6);
  INFO(r.name << " worst " << r.worst);
  CHECK(r.passed);
}

TEST_CASE("L1 is exact for polynomial advection fluxes") {
  // v and P constant, B = 0 and rho a global polynomial of degree <= p: every
  // flux component is then a polynomial of the same degree.
  const GasModel g(1.4);
  const double vx = 0.7, vy = -0.3, P = 2.0;
  for (int p = 1; p <= 5; ++p) {
    const auto re = build_reference_element(p, 2);
    BoundarySpec bcs;
    for (auto& s : bcs.sides) s.kind = BoundaryKind::Neumann;
    const auto mesh = build_mesh(2, {3, 2}, {0, 0}, {1.5, 1.0}, bcs);
    Field u(mesh.num_elements(), re.num_nodes);
    std::vector<double> drho(u.size());
    for (int e = 0; e < mesh.num_elements(); ++e) {
      for (int k = 0; k < re.num_nodes; ++k) {
        const auto [x, y] = mesh.map_point(e, re.nodes[k][0], re.nodes[k][1]);
        const double rho = 2.0 + 0.3 * std::pow(x, p) - 0.2 * std::pow(y, p) + 0.1 * x * y;
        const double rx = 0.3 * p * std::pow(x, p - 1) + 0.1 * y;
        const double ry = -0.2 * p * std::pow(y, p - 1) + 0.1 * x;
        u.at(e, k) = prim_to_cons({rho, {vx, vy, 0}, {}, P}, g);
        drho[static_cast<std::size_t>(e * re.num_nodes + k)] = vx * rx + vy * ry;
      }
    }
    for (auto solver : {RiemannSolver::Rusanov, RiemannSolver::Hll, RiemannSolver::Hllc}) {
      const SpatialOperator op(re, mesh, g, solver);
      Field rhs;
      op.compute_L1(u, rhs);
      const double ke = 0.5 * (vx * vx + vy * vy);
      for (std::size_t i = 0; i < u.size(); ++i) {
        const auto& r = rhs.data()[i];
        CHECK(r[kRho] == Approx(-drho[i]).epsilon(1e-10).scale(1.0));
        CHECK(r[kMomX] == Approx(-vx * drho[i]).epsilon(1e-10).scale(1.0));
        CHECK(r[kMomY] == Approx(-vy * drho[i]).epsilon(1e-10).scale(1.0));
        CHECK(r[kEnergy] == Approx(-ke * drho[i]).epsilon(1e-10).scale(1.0));
        CHECK(std::abs(r[kBx]) + std::abs(r[kBy]) < 1e-12);
      }
    }
  }
}

TEST_CASE("L1 conserves every field on periodic meshes") {
  const GasModel g(5.0 / 3.0);
  for (int p : {1, 2, 3}) {
    for (auto solver : {RiemannSolver::Rusanov, RiemannSolver::Hll, RiemannSolver::Hllc}) {
      const auto re = build_reference_element(p, 2);
      const auto mesh = build_mesh(2, {5, 4}, {0, 0}, {1, 1}, {});
      const SpatialOperator op(re, mesh, g, solver);
      const Field u = smooth_periodic_field(re, mesh, g, 0.3 * p);
      Field rhs;
      op.compute_L1(u, rhs);
      for (int c = 0; c < kNumFields; ++c) {
        double total = 0.0, scale = 0.0;
        for (int e = 0; e < mesh.num_elements(); ++e) {
          for (int k = 0; k < re.num_nodes; ++k) {
            total += re.weights[k] * rhs.at(e, k)[c];
            scale += re.weights[k] * std::abs(rhs.at(e, k)[c]);
          }
        }
        CHECK(std::abs(total) <= 1e-10 * std::max(scale, 1.0));
      }
    }
  }
}

TEST_CASE("L2 never touches mass") {
  const GasModel g(5.0 / 3.0);
  const auto re = build_reference_element(3, 2);
  const auto mesh = build_mesh(2, {4, 4}, {0, 0}, {1, 1}, {});
  const SpatialOperator op(re, mesh, g, RiemannSolver::Hllc);
  const Field u = smooth_periodic_field(re, mesh, g, 0.1);
  std::vector<double> divB;
  op.compute_global_divB(u, divB);
  Field src;
  compute_L2(u, divB, src);
  double biggest = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(src.data()[i][kRho] == 0.0);
    CHECK(src.data()[i] == powell_source(u.data()[i], divB[i]));
    biggest = std::max(biggest, std::abs(divB[i]));
  }
  CHECK(biggest > 0.1);  // the test field is not solenoidal
}

TEST_CASE("global divB is linear in B") {
  const GasModel g(5.0 / 3.0);
  const auto re = build_reference_element(3, 2);
  const auto mesh = build_mesh(2, {4, 3}, {0, 0}, {1, 1}, {});
  const SpatialOperator op(re, mesh, g, RiemannSolver::Hllc);
  Field a = smooth_periodic_field(re, mesh, g, 0.2);
  Field b = smooth_periodic_field(re, mesh, g, 1.7);
  const double alpha = 0.7, beta = -1.3;
  Field c = a;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (int m : {kBx, kBy, kBz}) c.data()[i][m] = alpha * a.data()[i][m] + beta * b.data()[i][m];
  }
  std::vector<double> da, db, dc;
  op.compute_global_divB(a, da);
  op.compute_global_divB(b, db);
  op.compute_global_divB(c, dc);
  for (std::size_t i = 0; i < dc.size(); ++i) CHECK(dc[i] == Approx(alpha * da[i] + beta * db[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("combined and separate operator evaluations agree") {
  const GasModel g(5.0 / 3.0);
  const auto re = build_reference_element(2, 2);
  const auto mesh = build_mesh(2, {3, 3}, {0, 0}, {1, 1}, {});
  const SpatialOperator op(re, mesh, g, RiemannSolver::Hllc);
  const Field u = smooth_periodic_field(re, mesh, g, 0.5);
  Field r1, r2;
  std::vector<double> d1, d2;
  op.compute_L1(u, r1);
  op.compute_global_divB(u, d1);
  op.compute_L1_and_divB(u, r2, d2);
  CHECK(r1 == r2);
  CHECK(d1 == d2);

  std::vector<double> ones(u.size(), -2.0);
  CHECK(op.divB_l1_norm(ones) == Approx(2.0));
}

TEST_CASE("L1 converges for a smooth field") {
  // Only a sanity check of the assembled operator: the error against the
  // analytic divergence must drop by roughly 2^p when h halves.
  const GasModel g(1.4);
  const int p = 3;
  double prev = 0.0;
  for (int n : {4, 8, 16}) {
    const auto re = build_reference_element(p, 1);
    const auto mesh = build_mesh(1, {n, 1}, {0, 0}, {1, 1}, {});
    const SpatialOperator op(re, mesh, g, RiemannSolver::Hllc);
    Field u(n, re.num_nodes);
    std::vector<double> exact(u.size());
    for (int e = 0; e < n; ++e) {
      for (int k = 0; k < re.num_nodes; ++k) {
        const double x = mesh.map_point(e, re.nodes[k][0], 0)[0];
        u.at(e, k) = prim_to_cons({1.0 + 0.5 * std::sin(kTwoPi * x), {1.0, 0, 0}, {}, 1.0}, g);
        exact[static_cast<std::size_t>(e * re.num_nodes + k)] = -0.5 * kTwoPi * std::cos(kTwoPi * x);
      }
    }
    Field rhs;
    op.compute_L1(u, rhs);
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(rhs.data()[i][kRho] - exact[i]));
    if (prev > 0.0) CHECK(std::log2(prev / err) > p - 0.5);
    prev = err;
  }
}
