/// \file entropy_filter.hpp
/// \brief Positivity-preserving entropy filter.
///
/// The filtered element solution is
///
///     u~(f) = sum_k f^(k^2) u^(k),     u^(k) = V I^(k) V^-1 u,
///
/// with f = exp(-zeta) in [0, 1]. f = 1 leaves the solution untouched and
/// f = 0 collapses it to the element mean. The filter picks the largest f for
/// which the admissibility constraints hold at every solution node:
///
///     rho - eps > 0,   P - eps > 0,   sigma - sigma_min - eps > 0
///
/// where the entropy bound applies only to the restrictive filter (H_e).
/// The per-node Illinois solve sweeps nodes in ascending order and uses the
/// running minimum of f as the upper bracket for the next node.
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "efmhd/field.hpp"
#include "efmhd/mesh.hpp"
#include "efmhd/reference_element.hpp"

namespace efmhd {

enum class ConstraintMode { Positivity, PositivityAndEntropy };

struct ConstraintSet {
  double eps = 1e-8;
  double sigma_min = 0.0;
  ConstraintMode mode = ConstraintMode::Positivity;
};

/// min(rho - eps, P - eps [, sigma - sigma_min - eps]). Positive iff every
/// constraint holds. Non-finite states give -infinity.
double evaluate_constraints(const ConservedState& u, const ConstraintSet& c, const GasModel& g);

struct FilterSettings {
  double eps = 1e-8;
  double tol = 1e-8;
  int max_iter = 20;
};

/// Per-order nodal components of one element.
struct FilterWorkspace {
  int num_groups = 0;
  int num_nodes = 0;
  std::vector<ConservedState> components;  // group-major: components[k * num_nodes + i]
  double factor = 1.0;

  const ConservedState& component(int k, int i) const {
    return components[static_cast<std::size_t>(k * num_nodes + i)];
  }
};

struct FilterReport {
  double limiting_factor = 0.0;  // 1 - f
  int iterations = 0;
  bool activated = false;
  bool converged = true;
};

struct FilterResult {
  double factor = 1.0;
  FilterReport report;
};

/// Raised when an element mean violates the constraints, so no filter
/// strength can restore admissibility.
class UnrecoverableElementError : public std::runtime_error {
 public:
  UnrecoverableElementError(int element, const ConservedState& mean, double margin, const std::string& detail);

  int element() const { return element_; }
  const ConservedState& mean() const { return mean_; }
  double margin() const { return margin_; }

 private:
  int element_;
  ConservedState mean_;
  double margin_;
};

FilterWorkspace decompose_modes(std::span<const ConservedState> nodal, const ModeGroupOperators& ops);

/// f^(k^2) for k = 0 .. num_groups-1, with 0^0 = 1.
std::vector<double> filter_coefficients(double f, int num_groups);

ConservedState filtered_eval(const FilterWorkspace& ws, double f, int node);
std::vector<ConservedState> filtered_eval(const FilterWorkspace& ws, double f);

/// Optimized sequential per-node solve. Expects the element mean
/// (component 0) to satisfy the constraints; throws otherwise.
FilterResult solve_filter_factor(const FilterWorkspace& ws, const ConstraintSet& c, const GasModel& g,
                                 double tol = 1e-8, int max_iter = 20);

/// Baseline: Illinois on the element-wide minimum margin, rebuilding
/// V Lambda(f) V^-1 u for the whole element on every evaluation.
FilterResult naive_filter_solve(std::span<const ConservedState> nodal, const ModeGroupOperators& ops,
                                const ConstraintSet& c, const GasModel& g, double tol = 1e-8, int max_iter = 20);

/// Minimum specific entropy over an element and its face neighbours.
double compute_sigma_min(std::span<const ConservedState> element,
                         std::span<const std::span<const ConservedState>> neighbors, const GasModel& g);

/// Per-element entropy bounds over element + face-neighbour stencils,
/// including boundary ghost states.
std::vector<double> compute_sigma_min(const Field& u, const StructuredMesh& mesh, const ReferenceElement& re,
                                      const GasModel& g);

struct FilterSummary {
  double max_limiting = 0.0;
  int activations = 0;
  int max_iterations = 0;
  int nonconverged = 0;
  /// Smallest sigma - sigma_min over filtered output (H_e only).
  double min_entropy_margin = 0.0;
};

/// Restrictive filter: positivity plus local minimum entropy.
FilterSummary apply_He(Field& u, std::span<const double> sigma_min, const ReferenceElement& re,
                       const ModeGroupOperators& ops, const FilterSettings& s, const GasModel& g,
                       std::vector<FilterReport>* reports = nullptr);

/// Relaxed filter: positivity only.
FilterSummary apply_Hp(Field& u, const ReferenceElement& re, const ModeGroupOperators& ops, const FilterSettings& s,
                       const GasModel& g, std::vector<FilterReport>* reports = nullptr);

/// Filters one element in place. Returns the report.
FilterReport filter_element(std::span<ConservedState> nodal, int element_id, const ConstraintSet& c,
                            const ReferenceElement& re, const ModeGroupOperators& ops, const FilterSettings& s,
                            const GasModel& g);

}  // namespace efmhd
