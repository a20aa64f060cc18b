#include "efmhd/time_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "efmhd/parallel.hpp"

namespace efmhd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Extremes {
  double min_rho = kInf;
  double min_pressure = kInf;
  int first_bad = -1;
};

Extremes scan_admissibility(const Field& u, const GasModel& g) {
  const int ne = u.num_elements();
  std::vector<double> rho(static_cast<std::size_t>(ne)), prs(static_cast<std::size_t>(ne));
  std::vector<char> bad(static_cast<std::size_t>(ne));
  parallel_for(ne, [&](int e) {
    double r = kInf, p = kInf;
    bool b = false;
    for (const auto& x : u.element(e)) {
      const double pe = pressure(x, g);
      if (!(x.rho() > 0.0) || !(pe > 0.0) || !std::isfinite(x.energy())) b = true;
      r = std::min(r, x.rho());
      p = std::min(p, pe);
      if (std::isnan(x.rho())) r = -kInf;
      if (std::isnan(pe)) p = -kInf;
    }
    rho[e] = r;
    prs[e] = p;
    bad[e] = b;
  });
  Extremes ex;
  for (int e = 0; e < ne; ++e) {
    ex.min_rho = std::min(ex.min_rho, rho[e]);
    ex.min_pressure = std::min(ex.min_pressure, prs[e]);
    if (bad[e] && ex.first_bad < 0) ex.first_bad = e;
  }
  return ex;
}

void mark(std::vector<char>& flags, const std::vector<FilterReport>& reports) {
  for (std::size_t e = 0; e < reports.size(); ++e) {
    if (reports[e].activated) flags[e] = 1;
  }
}

}  // namespace

Stepper::Stepper(const SpatialOperator& op, const StepConfig& cfg)
    : op_(op), cfg_(cfg), groups_(build_mode_groups(op.reference())) {}

SubstepDiagnostics Stepper::forward_euler_split_substep(const Field& u_n, const Field& u_s, double w_n, double w_s,
                                                        double dt_eff, Field& out, int stage) {
  const GasModel& g = op_.gas();
  const ReferenceElement& re = op_.reference();
  const int ne = u_s.num_elements();
  SubstepDiagnostics diag;
  diag.filtered.assign(static_cast<std::size_t>(ne), 0);

  try {
    op_.compute_L1_and_divB(u_s, rhs_, divB_);
  } catch (const InvalidStateError& err) {
    throw StepFailure("stage " + std::to_string(stage) + ": " + err.what(), stage, -1, false);
  }
  compute_L2(u_s, divB_, source_);

  if (out.size() != u_s.size()) out = Field(ne, u_s.nodes_per_element());
  {
    auto& o = out.data();
    const auto& s = u_s.data();
    const auto& r = rhs_.data();
    parallel_for(ne, [&](int e) {
      const std::size_t N = static_cast<std::size_t>(u_s.nodes_per_element());
      for (std::size_t k = e * N; k < (e + 1) * N; ++k) {
        ConservedState v = w_s * s[k] + dt_eff * r[k];
        if (w_n != 0.0) v += w_n * u_n.data()[k];
        o[k] = v;
      }
    });
  }

  std::vector<FilterReport> reports;
  try {
    if (cfg_.filters_enabled) {
      const auto sigma_min = compute_sigma_min(u_s, op_.mesh(), re, g);
      diag.he = apply_He(out, sigma_min, re, groups_, cfg_.filter, g, &reports);
      mark(diag.filtered, reports);
    }
    {
      auto& o = out.data();
      const auto& src = source_.data();
      parallel_for(ne, [&](int e) {
        const std::size_t N = static_cast<std::size_t>(u_s.nodes_per_element());
        for (std::size_t k = e * N; k < (e + 1) * N; ++k) o[k] += dt_eff * src[k];
      });
    }
    if (cfg_.filters_enabled) {
      diag.hp = apply_Hp(out, re, groups_, cfg_.filter, g, &reports);
      mark(diag.filtered, reports);
    }
  } catch (const UnrecoverableElementError& err) {
    throw StepFailure("stage " + std::to_string(stage) + ": " + err.what(), stage, err.element(), true);
  }

  const Extremes ex = scan_admissibility(out, g);
  diag.min_rho = ex.min_rho;
  diag.min_pressure = ex.min_pressure;
  if (ex.first_bad >= 0) {
    throw StepFailure("stage " + std::to_string(stage) + ": element " + std::to_string(ex.first_bad) +
                          " left admissibility (min rho " + std::to_string(ex.min_rho) + ", min P " +
                          std::to_string(ex.min_pressure) + ")",
                      stage, ex.first_bad, false);
  }
  return diag;
}

StepDiagnostics Stepper::ssprk3_step(Field& u, double dt) {
  StepDiagnostics sd;
  sd.min_rho = kInf;
  sd.min_pressure = kInf;
  sd.min_entropy_margin = kInf;
  std::vector<char> filtered(static_cast<std::size_t>(u.num_elements()), 0);

  auto absorb = [&](const SubstepDiagnostics& d) {
    sd.max_limiting = std::max({sd.max_limiting, d.he.max_limiting, d.hp.max_limiting});
    sd.he_activations += d.he.activations;
    sd.hp_activations += d.hp.activations;
    sd.max_iterations = std::max({sd.max_iterations, d.he.max_iterations, d.hp.max_iterations});
    sd.nonconverged += d.he.nonconverged + d.hp.nonconverged;
    if (cfg_.filters_enabled) sd.min_entropy_margin = std::min(sd.min_entropy_margin, d.he.min_entropy_margin);
    sd.min_rho = std::min(sd.min_rho, d.min_rho);
    sd.min_pressure = std::min(sd.min_pressure, d.min_pressure);
    for (std::size_t e = 0; e < filtered.size(); ++e) filtered[e] |= d.filtered[e];
  };

  const auto& w = kSspRk3Weights;
  absorb(forward_euler_split_substep(u, u, w[0][0], w[0][1], w[0][2] * dt, stage1_, 1));
  sd.divb_l1 = op_.divB_l1_norm(divB_);
  absorb(forward_euler_split_substep(u, stage1_, w[1][0], w[1][1], w[1][2] * dt, stage2_, 2));
  absorb(forward_euler_split_substep(u, stage2_, w[2][0], w[2][1], w[2][2] * dt, stage1_, 3));
  std::swap(u, stage1_);

  sd.filtered_elements = static_cast<int>(std::count(filtered.begin(), filtered.end(), 1));
  if (!cfg_.filters_enabled) sd.min_entropy_margin = 0.0;
  return sd;
}

double Stepper::divb_l1(const Field& u) const {
  std::vector<double> d;
  op_.compute_global_divB(u, d);
  return op_.divB_l1_norm(d);
}

double estimate_cfl(const Field& u, const SpatialOperator& op, double dt) {
  const auto& mesh = op.mesh();
  const double scale = 2.0 * op.reference().order + 1.0;
  double m = 0.0;
  for (const auto& x : u.data()) {
    if (!is_admissible(x, op.gas())) return kInf;
    double s = 0.0;
    for (int a = 0; a < mesh.dim; ++a) {
      const double cf = fast_magnetosonic_speed(x, axis_normal(a), op.gas());
      s += (std::abs(x[kMomX + a] / x.rho()) + cf) / mesh.h[a];
    }
    m = std::max(m, s);
  }
  return dt * m * scale;
}

double total_mass(const Field& u, const ReferenceElement& re, const StructuredMesh& mesh) {
  const double jac = mesh.volume() / re.reference_volume();
  double total = 0.0;
  for (int e = 0; e < u.num_elements(); ++e) {
    double s = 0.0;
    const auto ue = u.element(e);
    for (int k = 0; k < re.num_nodes; ++k) s += re.weights[k] * ue[k].rho();
    total += s;
  }
  return total * jac;
}

}  // namespace efmhd
