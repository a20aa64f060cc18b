#include "efmhd/cases.hpp"

#include <cmath>

namespace efmhd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVortexHalfWidth = 10.0;
constexpr double kInwardPull = 1.0 - 1e-12;

double wrap(double x, double lo, double hi) {
  const double L = hi - lo;
  double r = std::fmod(x - lo, L);
  if (r < 0.0) r += L;
  return lo + r;
}

}  // namespace

CaseKind parse_case_kind(std::string_view name) {
  if (name == "uniform") return CaseKind::Uniform;
  if (name == "vortex") return CaseKind::Vortex;
  if (name == "riemann" || name == "briowu") return CaseKind::Riemann;
  if (name == "orszag_tang" || name == "otv") return CaseKind::OrszagTang;
  if (name == "blast") return CaseKind::Blast;
  throw ConfigError("unknown case '" + std::string(name) + "'");
}

std::string_view to_string(CaseKind k) {
  switch (k) {
    case CaseKind::Uniform: return "uniform";
    case CaseKind::Vortex: return "vortex";
    case CaseKind::Riemann: return "riemann";
    case CaseKind::OrszagTang: return "orszag_tang";
    case CaseKind::Blast: return "blast";
  }
  return "?";
}

CaseConfig preset_uniform(int cells_per_side, int p, PrimitiveState state) {
  CaseConfig c;
  c.name = "uniform";
  c.kind = CaseKind::Uniform;
  c.cells = {cells_per_side, cells_per_side};
  c.order = p;
  c.uniform = state;
  return c;
}

CaseConfig preset_vortex(int cells_per_side, int p, double mu) {
  CaseConfig c;
  c.name = "vortex";
  c.kind = CaseKind::Vortex;
  c.gamma = 5.0 / 3.0;
  c.dim = 2;
  c.cells = {cells_per_side, cells_per_side};
  c.lower = {-kVortexHalfWidth, -kVortexHalfWidth};
  c.upper = {kVortexHalfWidth, kVortexHalfWidth};
  c.order = p;
  c.riemann = RiemannSolver::Hllc;
  c.dt = 1e-4;
  c.t_end = 0.05;
  c.mu = mu;
  return c;
}

CaseConfig preset_briowu(int cells, int p) {
  CaseConfig c;
  c.name = "briowu";
  c.kind = CaseKind::Riemann;
  c.gamma = 2.0;
  c.dim = 1;
  c.cells = {cells, 1};
  c.lower = {0.0, 0.0};
  c.upper = {1.0, 1.0};
  c.order = p;
  c.riemann = RiemannSolver::Hllc;
  c.dt = 2e-4 * 200.0 / cells;
  c.t_end = 0.1;
  c.left = {1.0, {}, {0.75, 1.0, 0.0}, 1.0};
  c.right = {0.125, {}, {0.75, -1.0, 0.0}, 0.1};
  c.split = 0.5;
  c.bcs.sides[0] = {BoundaryKind::Dirichlet, c.left};
  c.bcs.sides[1] = {BoundaryKind::Dirichlet, c.right};
  return c;
}

CaseConfig preset_otv(int cells_per_side, int p) {
  CaseConfig c;
  c.name = "orszag_tang";
  c.kind = CaseKind::OrszagTang;
  c.gamma = 5.0 / 3.0;
  c.dim = 2;
  c.cells = {cells_per_side, cells_per_side};
  c.lower = {0.0, 0.0};
  c.upper = {1.0, 1.0};
  c.order = p;
  c.riemann = RiemannSolver::Hllc;
  c.dt = 4e-4 * 64.0 / cells_per_side;
  c.t_end = 0.5;
  return c;
}

CaseConfig preset_blast(int cells_per_side, int p) {
  CaseConfig c;
  c.name = "blast";
  c.kind = CaseKind::Blast;
  c.gamma = 5.0 / 3.0;
  c.dim = 2;
  c.cells = {cells_per_side, cells_per_side};
  c.lower = {-0.5, -0.5};
  c.upper = {0.5, 0.5};
  c.order = p;
  c.riemann = RiemannSolver::Hll;
  c.dt = 2e-7;
  c.t_end = 1e-3;
  return c;
}

CaseConfig preset_by_name(std::string_view name) {
  switch (parse_case_kind(name)) {
    case CaseKind::Uniform: return preset_uniform(8, 2);
    case CaseKind::Vortex: return preset_vortex(20, 2);
    case CaseKind::Riemann: return preset_briowu(200, 3);
    case CaseKind::OrszagTang: return preset_otv(64, 3);
    case CaseKind::Blast: return preset_blast(100, 4);
  }
  throw ConfigError("unknown case");
}

void validate(const CaseConfig& cfg) {
  if (!(cfg.gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("dim must be 1 or 2");
  if (cfg.cells[0] < 1 || (cfg.dim == 2 && cfg.cells[1] < 1)) throw ConfigError("cell counts must be positive");
  if (cfg.order < 0) throw ConfigError("order must be non-negative");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(cfg.filter.eps > 0.0) || !(cfg.filter.tol > 0.0) || cfg.filter.max_iter < 1) {
    throw ConfigError("filter eps, tol and max_iter must be positive");
  }
  if (cfg.output.diagnostics_every < 1 || cfg.output.snapshot_every < 0) {
    throw ConfigError("output cadence must be positive");
  }
  if (cfg.kind == CaseKind::Vortex && cfg.dim != 2) throw ConfigError("vortex case needs a 2D mesh");
  if (cfg.kind == CaseKind::Blast && cfg.dim != 2) throw ConfigError("blast case needs a 2D mesh");
  if (cfg.kind == CaseKind::OrszagTang && cfg.dim != 2) throw ConfigError("orszag_tang case needs a 2D mesh");
}

PrimitiveState vortex_state(double x, double y, double t, double mu) {
  x = wrap(x - t, -kVortexHalfWidth, kVortexHalfWidth);
  y = wrap(y - t, -kVortexHalfWidth, kVortexHalfWidth);
  const double r2 = x * x + y * y;
  // Magnetized vortex in equilibrium: the pressure deficit balances the
  // centrifugal and magnetic tension terms for phi = exp((1 - r^2) / 2).
  const double phi = std::exp(0.5 * (1.0 - r2));
  const double du = mu / (std::sqrt(2.0) * kPi) * phi;
  const double dB = mu / (2.0 * kPi) * phi;
  const double dP = -mu * mu * (1.0 + r2) / (8.0 * kPi * kPi) * phi * phi;
  PrimitiveState q;
  q.rho = 1.0;
  q.v = {1.0 - y * du, 1.0 + x * du, 0.0};
  q.B = {-y * dB, x * dB, 0.0};
  q.P = 1.0 + dP;
  return q;
}

PrimitiveState initial_state(const CaseConfig& cfg, double x, double y) {
  switch (cfg.kind) {
    case CaseKind::Uniform:
      return cfg.uniform;
    case CaseKind::Vortex:
      return vortex_state(x, y, 0.0, cfg.mu);
    case CaseKind::Riemann:
      return x <= cfg.split ? cfg.left : cfg.right;
    case CaseKind::OrszagTang: {
      const double s = 1.0 / std::sqrt(4.0 * kPi);
      PrimitiveState q;
      q.rho = 25.0 / (36.0 * kPi);
      q.P = 5.0 / (12.0 * kPi);
      q.v = {-std::sin(2.0 * kPi * y), std::sin(2.0 * kPi * x), 0.0};
      q.B = {s * std::sin(2.0 * kPi * y), -s * std::sin(4.0 * kPi * x), 0.0};
      return q;
    }
    case CaseKind::Blast: {
      PrimitiveState q;
      q.rho = cfg.blast_rho;
      q.B = {cfg.b0, 0.0, 0.0};
      q.P = std::sqrt(x * x + y * y) <= cfg.blast_radius ? cfg.p_inside : cfg.p_outside;
      return q;
    }
  }
  return {};
}

StructuredMesh make_mesh(const CaseConfig& cfg) {
  std::array<int, 2> cells = cfg.cells;
  if (cfg.dim == 1) cells[1] = 1;
  return build_mesh(cfg.dim, cells, cfg.lower, cfg.upper, cfg.bcs);
}

Field initial_field(const CaseConfig& cfg, const ReferenceElement& re, const StructuredMesh& mesh) {
  const GasModel gas(cfg.gamma);
  Field u(mesh.num_elements(), re.num_nodes);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int k = 0; k < re.num_nodes; ++k) {
      const auto [xi, eta] = re.nodes[k];
      const auto x = mesh.map_point(e, kInwardPull * xi, kInwardPull * eta);
      u.at(e, k) = prim_to_cons(initial_state(cfg, x[0], x[1]), gas);
    }
  }
  return u;
}

}  // namespace efmhd
