/// \file reference_element.hpp
/// \brief Nodal/modal machinery for a tensor-product reference element.
///
/// Solution nodes are tensor-product Gauss-Legendre-Lobatto points, so every
/// interface node is also a solution node. For p = 0 the element holds a
/// single node at the centre and traces are that node's value.
///
/// Node and mode numbering is lexicographic with x fastest:
///   index = i + (p+1) * j.
/// Faces are numbered x-, x+, y-, y+. Face nodes are listed in increasing
/// order of the tangential coordinate, so the two sides of a conforming
/// Cartesian face align node-for-node.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

namespace efmhd {

/// How the filter order p_i of a tensor-product mode (a, b) is assigned.
/// MaxDegree gives exactly p+1 distinct orders in any dimension.
enum class ModeOrderConvention { MaxDegree, TotalDegree };

struct ReferenceElement {
  int order = 0;
  int dim = 1;
  int n1d = 1;
  int num_nodes = 1;
  int nodes_per_face = 1;
  ModeOrderConvention convention = ModeOrderConvention::MaxDegree;

  std::vector<double> nodes_1d;
  std::vector<double> weights_1d;
  /// Derivative of Lagrange basis j at node i.
  Eigen::MatrixXd diff_1d;
  /// Derivatives of the DG-equivalent correction functions at the 1D nodes
  /// for the left (xi = -1) and right (xi = +1) boundary.
  std::vector<double> lift_left_1d;
  std::vector<double> lift_right_1d;

  std::vector<std::array<double, 2>> nodes;
  std::vector<double> weights;

  Eigen::MatrixXd vandermonde;      // V(node, mode)
  Eigen::MatrixXd inv_vandermonde;  // V^-1
  std::vector<std::array<int, 2>> mode_degrees;
  std::vector<int> mode_order;

  /// Full differentiation operators per reference direction (num_nodes^2).
  std::vector<Eigen::MatrixXd> diff;
  /// Per-face lifting operators (num_nodes x nodes_per_face). Applied to the
  /// jump (common flux - interior flux) in the face's axis direction.
  std::vector<Eigen::MatrixXd> lift;
  std::vector<std::vector<int>> face_nodes;

  int num_faces() const { return 2 * dim; }
  int node_index(int i, int j) const { return i + n1d * j; }
  /// Sum of reference weights, i.e. the reference element volume 2^dim.
  double reference_volume() const { return dim == 1 ? 2.0 : 4.0; }
};

ReferenceElement build_reference_element(int order, int dim,
                                         ModeOrderConvention convention = ModeOrderConvention::MaxDegree);

/// Projectors P^(k) = V I^(k) V^-1 onto modes of filter order k.
struct ModeGroupOperators {
  int num_nodes = 0;
  int num_groups = 0;
  std::vector<Eigen::MatrixXd> projectors;
  /// Modes belonging to each group.
  std::vector<std::vector<int>> group_modes;
  std::vector<int> mode_order;
  /// Row-major copies of V and V^-1 for the hot paths.
  std::vector<double> V;
  std::vector<double> Vinv;
};

ModeGroupOperators build_mode_groups(const ReferenceElement& re);

/// Quadrature-weighted element average of nodal values.
double element_mean(const ReferenceElement& re, std::span<const double> nodal);

}  // namespace efmhd
