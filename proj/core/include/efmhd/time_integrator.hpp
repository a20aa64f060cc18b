/// \file time_integrator.hpp
/// \brief Operator-split SSP-RK3. Each stage is a forward-Euler substep
///
///     u_out = H_p[ H_e[ w_n u_n + w_s u_s + dt_eff L1(u_s) ] + dt_eff L2(u_s) ]
///
/// with the entropy bound of H_e taken from the stage input u_s.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "efmhd/entropy_filter.hpp"
#include "efmhd/spatial_rhs.hpp"

namespace efmhd {

struct StepConfig {
  double dt = 0.0;
  double t_end = 0.0;
  bool filters_enabled = true;
  FilterSettings filter;
};

/// (w_n, w_s, dt factor) for the three stages.
inline constexpr std::array<std::array<double, 3>, 3> kSspRk3Weights{{
    {0.0, 1.0, 1.0},
    {0.75, 0.25, 0.25},
    {1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0},
}};

struct SubstepDiagnostics {
  FilterSummary he;
  FilterSummary hp;
  double min_rho = 0.0;
  double min_pressure = 0.0;
  std::vector<char> filtered;  // per element: touched by H_e or H_p
};

struct StepDiagnostics {
  double max_limiting = 0.0;
  int he_activations = 0;
  int hp_activations = 0;
  int max_iterations = 0;
  int nonconverged = 0;
  int filtered_elements = 0;  // elements touched in any stage
  double min_entropy_margin = 0.0;
  double min_rho = 0.0;
  double min_pressure = 0.0;
  double divb_l1 = 0.0;  // of the step input
};

/// A substep failed. `unrecoverable` marks a filter failure (element mean
/// inadmissible); otherwise an unfiltered state lost admissibility.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& what, int stage, int element, bool unrecoverable)
      : std::runtime_error(what), stage_(stage), element_(element), unrecoverable_(unrecoverable) {}

  int stage() const { return stage_; }
  int element() const { return element_; }
  bool unrecoverable() const { return unrecoverable_; }

 private:
  int stage_;
  int element_;
  bool unrecoverable_;
};

class Stepper {
 public:
  Stepper(const SpatialOperator& op, const StepConfig& cfg);

  const SpatialOperator& op() const { return op_; }
  const ModeGroupOperators& mode_groups() const { return groups_; }
  const StepConfig& config() const { return cfg_; }

  /// One split substep; u_n is ignored when w_n == 0.
  SubstepDiagnostics forward_euler_split_substep(const Field& u_n, const Field& u_s, double w_n, double w_s,
                                                 double dt_eff, Field& out, int stage = 0);

  /// Advances u by dt in place.
  StepDiagnostics ssprk3_step(Field& u, double dt);

  /// Global divergence of B and its L1 norm for u.
  double divb_l1(const Field& u) const;

 private:
  const SpatialOperator& op_;
  StepConfig cfg_;
  ModeGroupOperators groups_;
  Field rhs_;
  Field source_;
  Field stage1_;
  Field stage2_;
  std::vector<double> divB_;
};

/// dt (2p + 1) times the max over nodes of sum_a (|v_a| + c_f) / h_a. Diagnostic only.
double estimate_cfl(const Field& u, const SpatialOperator& op, double dt);

/// Domain integral of density.
double total_mass(const Field& u, const ReferenceElement& re, const StructuredMesh& mesh);

}  // namespace efmhd
