/// \file cases.hpp
/// \brief Problem definitions: presets for the vortex, Brio-Wu, Orszag-Tang
/// and magnetized blast problems, plus uniform and generic Riemann setups.
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "efmhd/entropy_filter.hpp"
#include "efmhd/field.hpp"
#include "efmhd/mesh.hpp"
#include "efmhd/reference_element.hpp"
#include "efmhd/riemann.hpp"

namespace efmhd {

inline constexpr double kVortexMu = 5.38948938512;

enum class CaseKind { Uniform, Vortex, Riemann, OrszagTang, Blast };

CaseKind parse_case_kind(std::string_view name);
std::string_view to_string(CaseKind k);

struct OutputSettings {
  std::string directory;  // empty: no files
  std::string prefix = "run";
  int diagnostics_every = 1;
  int snapshot_every = 0;  // 0: initial and final snapshots only
  bool vtk = true;
};

struct CaseConfig {
  std::string name = "uniform";
  CaseKind kind = CaseKind::Uniform;
  double gamma = 5.0 / 3.0;

  int dim = 2;
  std::array<int, 2> cells{8, 8};
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{1.0, 1.0};
  BoundarySpec bcs;

  int order = 2;
  ModeOrderConvention mode_order = ModeOrderConvention::MaxDegree;
  RiemannSolver riemann = RiemannSolver::Hllc;
  double dt = 1e-3;
  double t_end = 1e-2;

  FilterSettings filter;
  bool filters_enabled = true;

  // Uniform
  PrimitiveState uniform;
  // Vortex
  double mu = kVortexMu;
  // Riemann problem along x
  PrimitiveState left;
  PrimitiveState right;
  double split = 0.5;
  // Blast
  double blast_radius = 0.1;
  double blast_rho = 1.0;
  double p_inside = 1e4;
  double p_outside = 0.1;
  double b0 = 1000.0 / std::sqrt(4.0 * std::numbers::pi);

  OutputSettings output;
  int threads = 0;  // 0: runtime default
};

CaseConfig preset_uniform(int cells_per_side, int p, PrimitiveState state = {});
CaseConfig preset_vortex(int cells_per_side, int p, double mu = kVortexMu);
CaseConfig preset_briowu(int cells, int p);
CaseConfig preset_otv(int cells_per_side, int p);
CaseConfig preset_blast(int cells_per_side, int p);
/// Preset by case name with its default resolution and order.
CaseConfig preset_by_name(std::string_view name);

/// Throws ConfigError on inconsistent settings.
void validate(const CaseConfig& cfg);

/// Vortex state at (x, y) and time t: the initial vortex advected by (t, t)
/// with periodic wrap into [-10, 10]^2.
PrimitiveState vortex_state(double x, double y, double t, double mu);

/// Pointwise initial condition.
PrimitiveState initial_state(const CaseConfig& cfg, double x, double y);

StructuredMesh make_mesh(const CaseConfig& cfg);

/// Nodal interpolation of the initial condition. Discontinuous data is
/// sampled slightly inside each element so that nodes on a jump take the
/// value from their own element's side.
Field initial_field(const CaseConfig& cfg, const ReferenceElement& re, const StructuredMesh& mesh);

}  // namespace efmhd
