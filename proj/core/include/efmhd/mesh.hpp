/// \file mesh.hpp
/// \brief Uniform structured Cartesian meshes in 1D/2D with face pairing and
/// weak boundary conditions through exterior ghost states.
#pragma once

#include <array>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "efmhd/physics.hpp"

namespace efmhd {

enum class BoundaryKind { Periodic, Dirichlet, Neumann, Reflecting };

BoundaryKind parse_boundary_kind(std::string_view name);
std::string_view to_string(BoundaryKind k);

struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::Periodic;
  PrimitiveState dirichlet;  // used only for Dirichlet
};

/// Per-side conditions indexed like element faces: x-, x+, y-, y+.
struct BoundarySpec {
  std::array<BoundaryCondition, 4> sides;

  static BoundarySpec all_periodic() { return {}; }
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neighbour across a face: an element and its face, or a boundary side.
struct FaceNeighbor {
  int element = -1;
  int face = -1;
  int boundary_side = -1;

  bool is_boundary() const { return element < 0; }
};

struct StructuredMesh {
  int dim = 1;
  std::array<int, 2> cells{1, 1};
  std::array<double, 2> lower{0.0, 0.0};
  std::array<double, 2> upper{1.0, 1.0};
  std::array<double, 2> h{1.0, 1.0};
  BoundarySpec bcs;
  std::vector<std::array<FaceNeighbor, 4>> connectivity;

  int num_elements() const { return cells[0] * cells[1]; }
  int element_index(int i, int j) const { return i + cells[0] * j; }
  std::array<int, 2> element_coords(int e) const { return {e % cells[0], e / cells[0]}; }
  double volume() const { return dim == 1 ? h[0] : h[0] * h[1]; }
  /// Physical coordinate of a reference point (xi, eta) in element e.
  std::array<double, 2> map_point(int e, double xi, double eta) const;
};

/// Faces are paired x-/x+ and y-/y+. Periodic sides must come in pairs.
StructuredMesh build_mesh(int dim, std::array<int, 2> cells, std::array<double, 2> lower,
                          std::array<double, 2> upper, const BoundarySpec& bcs);

/// Exterior state seen by the Riemann solver at a domain boundary.
/// `normal` is the outward unit normal of the interior element.
ConservedState ghost_state(const ConservedState& interior, const BoundaryCondition& bc, Vec3 normal,
                           const GasModel& gas);

}  // namespace efmhd
