#include "efmhd/entropy_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "efmhd/parallel.hpp"

namespace efmhd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxSweeps = 3;

struct BracketResult {
  double feasible = 0.0;
  int iterations = 0;
  bool converged = true;
};

// Illinois (modified regula falsi) on margin(f) over [lo, hi] with
// margin(lo) > 0 and margin(hi) <= 0. Returns the feasible end of the final
// bracket. Non-finite margins fall back to bisection steps.
template <class Margin>
BracketResult illinois(Margin&& margin, double lo, double g_lo, double hi, double g_hi, double tol, int max_iter) {
  BracketResult r;
  int side = 0;
  while (hi - lo >= tol) {
    if (r.iterations >= max_iter) {
      r.converged = false;
      break;
    }
    double c = 0.5 * (lo + hi);
    if (std::isfinite(g_lo) && std::isfinite(g_hi) && g_hi != g_lo) {
      const double rf = hi - g_hi * (hi - lo) / (g_hi - g_lo);
      if (rf > lo && rf < hi) c = rf;
    }
    const double g_c = margin(c);
    ++r.iterations;
    if (g_c > 0.0) {
      lo = c;
      g_lo = g_c;
      if (side == +1) g_hi *= 0.5;
      side = +1;
    } else {
      hi = c;
      g_hi = g_c;
      if (side == -1) g_lo *= 0.5;
      side = -1;
    }
  }
  r.feasible = lo;
  return r;
}

void fill_coefficients(double f, int num_groups, double* coef) {
  coef[0] = 1.0;
  double fk = 1.0;  // f^(2k-1) increments: f^(k^2) = f^((k-1)^2) * f^(2k-1)
  for (int k = 1; k < num_groups; ++k) {
    double step = 1.0;
    for (int i = 0; i < 2 * k - 1; ++i) step *= f;
    fk *= step;
    coef[k] = fk;
  }
}

ConservedState eval_node(const FilterWorkspace& ws, const double* coef, int node) {
  ConservedState s = ws.component(0, node);
  for (int k = 1; k < ws.num_groups; ++k) {
    const ConservedState& ck = ws.component(k, node);
    const double a = coef[k];
    for (int c = 0; c < kNumFields; ++c) s[c] += a * ck[c];
  }
  return s;
}

ConservedState quadrature_mean(std::span<const ConservedState> nodal, const ReferenceElement& re) {
  ConservedState m;
  for (std::size_t i = 0; i < nodal.size(); ++i) m += re.weights[i] * nodal[i];
  return (1.0 / re.reference_volume()) * m;
}

std::string margin_detail(const ConservedState& u, const ConstraintSet& c, const GasModel& g) {
  std::ostringstream os;
  os.precision(10);
  os << "rho-eps=" << u.rho() - c.eps;
  if (u.rho() > 0.0) {
    const double p = pressure(u, g);
    os << " P-eps=" << p - c.eps;
    if (c.mode == ConstraintMode::PositivityAndEntropy && p > 0.0) {
      os << " sigma-sigma_min-eps=" << p * std::pow(u.rho(), -g.gamma()) - c.sigma_min - c.eps;
    }
  }
  return os.str();
}

}  // namespace

UnrecoverableElementError::UnrecoverableElementError(int element, const ConservedState& mean, double margin,
                                                     const std::string& detail)
    : std::runtime_error("element " + std::to_string(element) + ": mean state " + describe(mean) +
                         " violates the admissibility constraints (" + detail + ")"),
      element_(element),
      mean_(mean),
      margin_(margin) {}

double evaluate_constraints(const ConservedState& u, const ConstraintSet& c, const GasModel& g) {
  for (double v : u.q) {
    if (!std::isfinite(v)) return kNegInf;
  }
  const double rho = u.rho();
  double m = rho - c.eps;
  if (!(rho > 0.0)) return m;
  const double p = pressure(u, g);
  m = std::min(m, p - c.eps);
  if (c.mode == ConstraintMode::PositivityAndEntropy && p > 0.0) {
    m = std::min(m, p * std::pow(rho, -g.gamma()) - c.sigma_min - c.eps);
  }
  return std::isnan(m) ? kNegInf : m;
}

FilterWorkspace decompose_modes(std::span<const ConservedState> nodal, const ModeGroupOperators& ops) {
  const int N = ops.num_nodes;
  if (static_cast<int>(nodal.size()) != N) throw std::invalid_argument("decompose_modes: node count mismatch");
  FilterWorkspace ws;
  ws.num_groups = ops.num_groups;
  ws.num_nodes = N;
  ws.components.assign(static_cast<std::size_t>(ops.num_groups * N), ConservedState{});

  thread_local std::vector<ConservedState> modal;
  modal.assign(static_cast<std::size_t>(N), ConservedState{});
  for (int m = 0; m < N; ++m) {
    const double* row = ops.Vinv.data() + static_cast<std::ptrdiff_t>(m) * N;
    ConservedState& out = modal[m];
    for (int i = 0; i < N; ++i) {
      const double w = row[i];
      for (int c = 0; c < kNumFields; ++c) out[c] += w * nodal[i][c];
    }
  }
  for (int k = 0; k < ops.num_groups; ++k) {
    for (int i = 0; i < N; ++i) {
      ConservedState& out = ws.components[static_cast<std::size_t>(k * N + i)];
      const double* row = ops.V.data() + static_cast<std::ptrdiff_t>(i) * N;
      for (int m : ops.group_modes[k]) {
        const double w = row[m];
        for (int c = 0; c < kNumFields; ++c) out[c] += w * modal[m][c];
      }
    }
  }
  return ws;
}

std::vector<double> filter_coefficients(double f, int num_groups) {
  std::vector<double> coef(static_cast<std::size_t>(num_groups));
  fill_coefficients(f, num_groups, coef.data());
  return coef;
}

ConservedState filtered_eval(const FilterWorkspace& ws, double f, int node) {
  const auto coef = filter_coefficients(f, ws.num_groups);
  return eval_node(ws, coef.data(), node);
}

std::vector<ConservedState> filtered_eval(const FilterWorkspace& ws, double f) {
  const auto coef = filter_coefficients(f, ws.num_groups);
  std::vector<ConservedState> out(static_cast<std::size_t>(ws.num_nodes));
  for (int i = 0; i < ws.num_nodes; ++i) out[i] = eval_node(ws, coef.data(), i);
  return out;
}

FilterResult solve_filter_factor(const FilterWorkspace& ws, const ConstraintSet& c, const GasModel& g, double tol,
                                 int max_iter) {
  const int N = ws.num_nodes;
  double mean_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < N; ++i) mean_margin = std::min(mean_margin, evaluate_constraints(ws.component(0, i), c, g));
  if (!(mean_margin > 0.0)) {
    throw UnrecoverableElementError(-1, ws.component(0, 0), mean_margin, margin_detail(ws.component(0, 0), c, g));
  }

  FilterResult result;
  std::vector<double> coef(static_cast<std::size_t>(ws.num_groups));
  double f = 1.0;
  fill_coefficients(f, ws.num_groups, coef.data());

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (int i = 0; i < N; ++i) {
      const double g_hi = evaluate_constraints(eval_node(ws, coef.data(), i), c, g);
      if (g_hi > 0.0) continue;
      result.report.activated = true;
      std::vector<double> trial(coef.size());
      auto margin = [&](double x) {
        fill_coefficients(x, ws.num_groups, trial.data());
        return evaluate_constraints(eval_node(ws, trial.data(), i), c, g);
      };
      const double g_lo = evaluate_constraints(ws.component(0, i), c, g);
      const BracketResult br = illinois(margin, 0.0, g_lo, f, g_hi, tol, max_iter);
      result.report.iterations += br.iterations;
      result.report.converged = result.report.converged && br.converged;
      f = br.feasible;
      fill_coefficients(f, ws.num_groups, coef.data());
    }
    // Earlier nodes were feasible at a larger f; confirm they still are.
    bool feasible = true;
    for (int i = 0; i < N && feasible; ++i) feasible = evaluate_constraints(eval_node(ws, coef.data(), i), c, g) > 0.0;
    if (feasible) break;
    if (sweep == kMaxSweeps - 1) {
      f = 0.0;
      result.report.converged = false;
    }
  }
  result.factor = f;
  result.report.limiting_factor = 1.0 - f;
  return result;
}

FilterResult naive_filter_solve(std::span<const ConservedState> nodal, const ModeGroupOperators& ops,
                                const ConstraintSet& c, const GasModel& g, double tol, int max_iter) {
  const int N = ops.num_nodes;
  std::vector<ConservedState> modal(static_cast<std::size_t>(N));
  std::vector<ConservedState> filtered(static_cast<std::size_t>(N));
  std::vector<double> lambda(static_cast<std::size_t>(N));

  auto element_margin = [&](double f) {
    for (int m = 0; m < N; ++m) lambda[m] = std::pow(f, ops.mode_order[m] * ops.mode_order[m]);
    for (int m = 0; m < N; ++m) {
      ConservedState s;
      const double* row = ops.Vinv.data() + static_cast<std::ptrdiff_t>(m) * N;
      for (int i = 0; i < N; ++i) {
        for (int q = 0; q < kNumFields; ++q) s[q] += row[i] * nodal[i][q];
      }
      modal[m] = lambda[m] * s;
    }
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
      ConservedState s;
      const double* row = ops.V.data() + static_cast<std::ptrdiff_t>(i) * N;
      for (int m = 0; m < N; ++m) {
        for (int q = 0; q < kNumFields; ++q) s[q] += row[m] * modal[m][q];
      }
      filtered[i] = s;
      margin = std::min(margin, evaluate_constraints(s, c, g));
    }
    return margin;
  };

  FilterResult result;
  const double g_one = element_margin(1.0);
  if (g_one > 0.0) return result;
  const double g_zero = element_margin(0.0);
  if (!(g_zero > 0.0)) {
    throw UnrecoverableElementError(-1, filtered[0], g_zero, margin_detail(filtered[0], c, g));
  }
  const BracketResult br = illinois(element_margin, 0.0, g_zero, 1.0, g_one, tol, max_iter);
  result.factor = br.feasible;
  result.report.activated = true;
  result.report.iterations = br.iterations;
  result.report.converged = br.converged;
  result.report.limiting_factor = 1.0 - br.feasible;
  return result;
}

double compute_sigma_min(std::span<const ConservedState> element,
                         std::span<const std::span<const ConservedState>> neighbors, const GasModel& g) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& u : element) s = std::min(s, specific_entropy(u, g));
  for (const auto& nb : neighbors) {
    for (const auto& u : nb) s = std::min(s, specific_entropy(u, g));
  }
  return s;
}

std::vector<double> compute_sigma_min(const Field& u, const StructuredMesh& mesh, const ReferenceElement& re,
                                      const GasModel& g) {
  const int ne = u.num_elements();
  const double gamma = g.gamma();
  std::vector<double> own(static_cast<std::size_t>(ne));
  parallel_for(ne, [&](int e) {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& x : u.element(e)) {
      if (x.rho() > 0.0) s = std::min(s, pressure(x, g) * std::pow(x.rho(), -gamma));
    }
    own[e] = s;
  });

  std::vector<double> out(static_cast<std::size_t>(ne));
  parallel_for(ne, [&](int e) {
    double s = own[e];
    for (int f = 0; f < 2 * mesh.dim; ++f) {
      const FaceNeighbor nb = mesh.connectivity[e][f];
      if (!nb.is_boundary()) {
        s = std::min(s, own[nb.element]);
        continue;
      }
      const BoundaryCondition& bc = mesh.bcs.sides[nb.boundary_side];
      const Vec3 normal = axis_normal(f / 2, f % 2 == 0 ? -1.0 : 1.0);
      for (int node : re.face_nodes[f]) {
        const ConservedState ghost = ghost_state(u.at(e, node), bc, normal, g);
        if (ghost.rho() > 0.0) s = std::min(s, pressure(ghost, g) * std::pow(ghost.rho(), -gamma));
      }
    }
    out[e] = s;
  });
  return out;
}

FilterReport filter_element(std::span<ConservedState> nodal, int element_id, const ConstraintSet& c,
                            const ReferenceElement& re, const ModeGroupOperators& ops, const FilterSettings& s,
                            const GasModel& g) {
  bool ok = true;
  for (const auto& x : nodal) {
    if (!(evaluate_constraints(x, c, g) > 0.0)) {
      ok = false;
      break;
    }
  }
  if (ok) return {};

  const FilterWorkspace ws = decompose_modes(nodal, ops);
  FilterResult r;
  try {
    r = solve_filter_factor(ws, c, g, s.tol, s.max_iter);
  } catch (const UnrecoverableElementError& err) {
    const ConservedState mean = quadrature_mean(nodal, re);
    throw UnrecoverableElementError(element_id, mean, err.margin(), margin_detail(mean, c, g));
  }
  const auto coef = filter_coefficients(r.factor, ws.num_groups);
  for (int i = 0; i < ws.num_nodes; ++i) nodal[i] = eval_node(ws, coef.data(), i);
  r.report.activated = true;
  return r.report;
}

namespace {

FilterSummary summarize(const std::vector<FilterReport>& reports) {
  FilterSummary sum;
  for (const auto& r : reports) {
    if (!r.activated) continue;
    ++sum.activations;
    sum.max_limiting = std::max(sum.max_limiting, r.limiting_factor);
    sum.max_iterations = std::max(sum.max_iterations, r.iterations);
    if (!r.converged) ++sum.nonconverged;
  }
  return sum;
}

}  // namespace

FilterSummary apply_He(Field& u, std::span<const double> sigma_min, const ReferenceElement& re,
                       const ModeGroupOperators& ops, const FilterSettings& s, const GasModel& g,
                       std::vector<FilterReport>* reports) {
  const int ne = u.num_elements();
  std::vector<FilterReport> local(static_cast<std::size_t>(ne));
  std::vector<double> entropy_margin(static_cast<std::size_t>(ne));
  parallel_for(ne, [&](int e) {
    auto nodal = u.element(e);
    ConstraintSet c{s.eps, sigma_min[e], ConstraintMode::PositivityAndEntropy};
    // A mean that already sits at the stencil minimum would make the bound
    // unattainable by eps; cap the bound so the mean keeps a margin of eps.
    const ConservedState mean = quadrature_mean(nodal, re);
    if (mean.rho() > 0.0) {
      const double p = pressure(mean, g);
      if (p > 0.0) c.sigma_min = std::min(c.sigma_min, p * std::pow(mean.rho(), -g.gamma()) - 2.0 * s.eps);
    }
    // Single pass over the nodes for both the check and the diagnostic.
    const double gamma = g.gamma();
    bool ok = true;
    double m = std::numeric_limits<double>::infinity();
    for (const auto& x : nodal) {
      const double rho = x.rho();
      const double p = rho > 0.0 ? pressure(x, g) : -1.0;
      if (!(rho - c.eps > 0.0) || !(p - c.eps > 0.0)) {
        ok = false;
        continue;
      }
      const double sigma = p * std::pow(rho, -gamma);
      if (!(sigma - c.sigma_min - c.eps > 0.0)) ok = false;
      m = std::min(m, sigma - sigma_min[e]);
    }
    if (!ok) {
      local[e] = filter_element(nodal, e, c, re, ops, s, g);
      m = std::numeric_limits<double>::infinity();
      for (const auto& x : nodal) {
        if (x.rho() > 0.0) m = std::min(m, pressure(x, g) * std::pow(x.rho(), -gamma) - sigma_min[e]);
      }
    }
    entropy_margin[e] = m;
  });
  FilterSummary sum = summarize(local);
  sum.min_entropy_margin = *std::min_element(entropy_margin.begin(), entropy_margin.end());
  if (reports) *reports = std::move(local);
  return sum;
}

FilterSummary apply_Hp(Field& u, const ReferenceElement& re, const ModeGroupOperators& ops, const FilterSettings& s,
                       const GasModel& g, std::vector<FilterReport>* reports) {
  const int ne = u.num_elements();
  std::vector<FilterReport> local(static_cast<std::size_t>(ne));
  const ConstraintSet c{s.eps, 0.0, ConstraintMode::Positivity};
  parallel_for(ne, [&](int e) { local[e] = filter_element(u.element(e), e, c, re, ops, s, g); });
  FilterSummary sum = summarize(local);
  if (reports) *reports = std::move(local);
  return sum;
}

}  // namespace efmhd
