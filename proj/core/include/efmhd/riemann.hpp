/// \file riemann.hpp
/// \brief Interface numerical fluxes for ideal MHD (Rusanov, HLL, HLLC) with
/// Davis wavespeed estimates.
#pragma once

#include <atomic>
#include <string_view>

#include "efmhd/physics.hpp"

namespace efmhd {

enum class RiemannSolver { Rusanov, Hll, Hllc };

RiemannSolver parse_riemann_solver(std::string_view name);
std::string_view to_string(RiemannSolver s);

/// Interior (left) and exterior (right) traces; normal points left to right.
struct RiemannInput {
  ConservedState left;
  ConservedState right;
  Vec3 normal{1.0, 0.0, 0.0};
};

struct WaveSpeeds {
  double left = 0.0;
  double right = 0.0;
};

WaveSpeeds davis_wavespeeds(const RiemannInput& in, const GasModel& g);

ConservedState rusanov_flux(const RiemannInput& in, const GasModel& g);
ConservedState hll_flux(const RiemannInput& in, const GasModel& g);

/// HLLC for MHD after Li (2005) and Gurski (2004): star-region magnetic field
/// and tangential velocity from the HLL average. Falls back to HLL when the
/// contact speed sits within 1e-10 (relative) of an outer wave or the star
/// states are inadmissible; fallbacks are counted in hllc_fallback_count().
ConservedState hllc_flux(const RiemannInput& in, const GasModel& g);

ConservedState numerical_flux(RiemannSolver solver, const RiemannInput& in, const GasModel& g);

/// Centered common magnetic field used by the global divergence.
inline Vec3 interface_B_average(const RiemannInput& in) {
  return 0.5 * (in.left.magnetic() + in.right.magnetic());
}

std::atomic<long>& hllc_fallback_count();

}  // namespace efmhd
