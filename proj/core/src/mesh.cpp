#include "efmhd/mesh.hpp"

#include <string>

namespace efmhd {

BoundaryKind parse_boundary_kind(std::string_view name) {
  if (name == "periodic") return BoundaryKind::Periodic;
  if (name == "dirichlet") return BoundaryKind::Dirichlet;
  if (name == "neumann") return BoundaryKind::Neumann;
  if (name == "reflecting") return BoundaryKind::Reflecting;
  throw ConfigError("unknown boundary kind '" + std::string(name) + "'");
}

std::string_view to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Periodic: return "periodic";
    case BoundaryKind::Dirichlet: return "dirichlet";
    case BoundaryKind::Neumann: return "neumann";
    case BoundaryKind::Reflecting: return "reflecting";
  }
  return "?";
}

std::array<double, 2> StructuredMesh::map_point(int e, double xi, double eta) const {
  const auto [i, j] = element_coords(e);
  const double x = lower[0] + h[0] * (i + 0.5 * (xi + 1.0));
  const double y = dim == 1 ? 0.0 : lower[1] + h[1] * (j + 0.5 * (eta + 1.0));
  return {x, y};
}

StructuredMesh build_mesh(int dim, std::array<int, 2> cells, std::array<double, 2> lower,
                          std::array<double, 2> upper, const BoundarySpec& bcs) {
  if (dim != 1 && dim != 2) throw ConfigError("build_mesh: dim must be 1 or 2");
  if (dim == 1) cells[1] = 1;
  StructuredMesh mesh;
  mesh.dim = dim;
  mesh.cells = cells;
  mesh.lower = lower;
  mesh.upper = upper;
  mesh.bcs = bcs;
  for (int a = 0; a < dim; ++a) {
    if (cells[a] < 1) throw ConfigError("build_mesh: need at least one element per dimension");
    if (!(upper[a] > lower[a])) throw ConfigError("build_mesh: degenerate extent");
    mesh.h[a] = (upper[a] - lower[a]) / cells[a];
    const bool lo_periodic = bcs.sides[2 * a].kind == BoundaryKind::Periodic;
    const bool hi_periodic = bcs.sides[2 * a + 1].kind == BoundaryKind::Periodic;
    if (lo_periodic != hi_periodic) throw ConfigError("build_mesh: periodic boundary specified on one side only");
  }
  for (int s = 0; s < 2 * dim; ++s) {
    const auto& bc = bcs.sides[s];
    if (bc.kind == BoundaryKind::Dirichlet &&
        !(bc.dirichlet.rho > 0.0 && bc.dirichlet.P > 0.0 && std::isfinite(bc.dirichlet.rho) &&
          std::isfinite(bc.dirichlet.P))) {
      throw ConfigError("build_mesh: Dirichlet state must be admissible");
    }
  }
  const int ne = mesh.num_elements();
  mesh.connectivity.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto c = mesh.element_coords(e);
    for (int a = 0; a < dim; ++a) {
      const int n = cells[a];
      for (int side = 0; side < 2; ++side) {
        const int face = 2 * a + side;
        auto nc = c;
        nc[a] += side == 0 ? -1 : 1;
        FaceNeighbor nb;
        const int idx = nc[a];
        if (idx < 0 || idx >= n) {
          if (bcs.sides[face].kind == BoundaryKind::Periodic) {
            nc[a] = (idx + n) % n;
          } else {
            nb.boundary_side = face;
            mesh.connectivity[e][face] = nb;
            continue;
          }
        }
        nb.element = mesh.element_index(nc[0], nc[1]);
        nb.face = 2 * a + (1 - side);
        mesh.connectivity[e][face] = nb;
      }
    }
  }
  return mesh;
}

ConservedState ghost_state(const ConservedState& interior, const BoundaryCondition& bc, Vec3 normal,
                           const GasModel& gas) {
  switch (bc.kind) {
    case BoundaryKind::Dirichlet: return prim_to_cons(bc.dirichlet, gas);
    case BoundaryKind::Neumann:
    case BoundaryKind::Periodic: return interior;
    case BoundaryKind::Reflecting: {
      ConservedState g = interior;
      const Vec3 m = interior.momentum();
      const Vec3 b = interior.magnetic();
      g.set_momentum(m - 2.0 * dot(m, normal) * normal);
      g.set_magnetic(b - 2.0 * dot(b, normal) * normal);
      return g;
    }
  }
  return interior;
}

}  // namespace efmhd
