/// \file spatial_rhs.hpp
/// \brief Semi-discrete operators on the mesh: L1 = -div F (collocated
/// interior divergence plus lifted interface correction) and the Powell
/// source L2 driven by the global divergence of B.
#pragma once

#include <span>
#include <vector>

#include "efmhd/field.hpp"
#include "efmhd/mesh.hpp"
#include "efmhd/reference_element.hpp"
#include "efmhd/riemann.hpp"

namespace efmhd {

/// A mesh face oriented from `left` to `right` along +axis. At a domain
/// boundary one side is -1 and `boundary_side` names the mesh side.
struct InterfaceFace {
  int left = -1;
  int right = -1;
  int axis = 0;
  int boundary_side = -1;
};

/// Per-face traces and resolved common values, face-major with
/// `nodes_per_face` entries per face.
struct TraceBuffer {
  int nodes_per_face = 0;
  std::vector<ConservedState> left;
  std::vector<ConservedState> right;
  std::vector<ConservedState> flux;  // common flux along +axis
  std::vector<Vec3> common_B;
};

class SpatialOperator {
 public:
  SpatialOperator(const ReferenceElement& re, const StructuredMesh& mesh, GasModel gas, RiemannSolver solver);

  const ReferenceElement& reference() const { return re_; }
  const StructuredMesh& mesh() const { return mesh_; }
  const GasModel& gas() const { return gas_; }
  RiemannSolver riemann() const { return solver_; }
  const std::vector<InterfaceFace>& faces() const { return faces_; }
  /// Face id seen by element e through its local face lf.
  int face_of(int e, int lf) const { return elem_faces_[static_cast<std::size_t>(e * 4 + lf)]; }

  /// Gathers traces (ghosts at boundaries), common fluxes and common B.
  void gather_traces(const Field& u, TraceBuffer& tb) const;

  void compute_L1(const Field& u, Field& rhs) const;
  void compute_global_divB(const Field& u, std::vector<double>& divB) const;
  /// Both operators from a single trace gather.
  void compute_L1_and_divB(const Field& u, Field& rhs, std::vector<double>& divB) const;

  /// Element-wise quadrature integral of |divB| over the domain.
  double divB_l1_norm(std::span<const double> divB) const;

 private:
  void assemble(const Field& u, const TraceBuffer& tb, Field* rhs, std::vector<double>* divB) const;

  ReferenceElement re_;
  StructuredMesh mesh_;
  GasModel gas_;
  RiemannSolver solver_;
  std::vector<InterfaceFace> faces_;
  std::vector<int> elem_faces_;
  std::vector<double> diff_;  // row-major 1D differentiation matrix
  mutable TraceBuffer traces_;
};

/// Powell source at every node from the nodal divergence.
void compute_L2(const Field& u, std::span<const double> divB, Field& out);

}  // namespace efmhd
