/// \file polynomial.hpp
/// \brief One-dimensional Legendre machinery and quadrature rules on [-1, 1].
#pragma once

#include <span>
#include <utility>
#include <vector>

namespace efmhd::poly {

/// Legendre polynomial P_n(x) and its derivative.
std::pair<double, double> legendre(int n, double x);

/// Legendre polynomial orthonormal on [-1, 1] with unit weight, and derivative.
std::pair<double, double> orthonormal_legendre(int n, double x);

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Gauss-Legendre-Lobatto rule with n >= 2 points (endpoints included).
QuadratureRule gauss_lobatto(int n);

/// Gauss-Legendre rule with n >= 1 points.
QuadratureRule gauss_legendre(int n);

/// Lagrange basis values l_j(x) for the given nodes.
std::vector<double> lagrange_weights(std::span<const double> nodes, double x);

}  // namespace efmhd::poly
