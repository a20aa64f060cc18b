#include "efmhd/reference_element.hpp"

#include <algorithm>
#include <stdexcept>

#include "efmhd/polynomial.hpp"

namespace efmhd {

namespace {

// DG-equivalent correction functions are the right/left Radau polynomials
//   g_L = (-1)^(p+1)/2 (P_{p+1} - P_p),  g_R = (P_{p+1} + P_p)/2.
void build_lifting(ReferenceElement& re) {
  const int p = re.order;
  const double sign = (p % 2 == 0) ? -1.0 : 1.0;
  re.lift_left_1d.resize(re.n1d);
  re.lift_right_1d.resize(re.n1d);
  for (int i = 0; i < re.n1d; ++i) {
    const double x = re.nodes_1d[i];
    const double dp1 = poly::legendre(p + 1, x).second;
    const double dp0 = poly::legendre(p, x).second;
    re.lift_left_1d[i] = 0.5 * sign * (dp1 - dp0);
    re.lift_right_1d[i] = 0.5 * (dp1 + dp0);
  }
}

}  // namespace

ReferenceElement build_reference_element(int order, int dim, ModeOrderConvention convention) {
  if (order < 0) throw std::invalid_argument("build_reference_element: order must be >= 0");
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_reference_element: dim must be 1 or 2");

  ReferenceElement re;
  re.order = order;
  re.dim = dim;
  re.n1d = order + 1;
  re.num_nodes = dim == 1 ? re.n1d : re.n1d * re.n1d;
  re.nodes_per_face = dim == 1 ? 1 : re.n1d;
  re.convention = convention;

  if (order == 0) {
    re.nodes_1d = {0.0};
    re.weights_1d = {2.0};
  } else {
    auto rule = poly::gauss_lobatto(re.n1d);
    re.nodes_1d = std::move(rule.points);
    re.weights_1d = std::move(rule.weights);
  }

  const int n = re.n1d;
  Eigen::MatrixXd v1(n, n), dv1(n, n);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) {
      const auto [val, der] = poly::orthonormal_legendre(m, re.nodes_1d[i]);
      v1(i, m) = val;
      dv1(i, m) = der;
    }
  }
  re.diff_1d = dv1 * v1.inverse();
  build_lifting(re);

  const int N = re.num_nodes;
  const int ny = dim == 1 ? 1 : n;
  re.nodes.resize(N);
  re.weights.resize(N);
  re.mode_degrees.resize(N);
  re.mode_order.resize(N);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto k = re.node_index(i, j);
      re.nodes[k] = {re.nodes_1d[i], dim == 1 ? 0.0 : re.nodes_1d[j]};
      re.weights[k] = re.weights_1d[i] * (dim == 1 ? 1.0 : re.weights_1d[j]);
      re.mode_degrees[k] = {i, dim == 1 ? 0 : j};
      re.mode_order[k] = convention == ModeOrderConvention::MaxDegree ? std::max(i, dim == 1 ? 0 : j)
                                                                      : i + (dim == 1 ? 0 : j);
    }
  }

  re.vandermonde.resize(N, N);
  for (int k = 0; k < N; ++k) {
    for (int m = 0; m < N; ++m) {
      const auto [a, b] = re.mode_degrees[m];
      const auto [x, y] = re.nodes[k];
      double val = poly::orthonormal_legendre(a, x).first;
      if (dim == 2) val *= poly::orthonormal_legendre(b, y).first;
      re.vandermonde(k, m) = val;
    }
  }
  re.inv_vandermonde = re.vandermonde.inverse();

  // Full operators, face maps.
  re.diff.assign(dim, Eigen::MatrixXd::Zero(N, N));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) {
        re.diff[0](re.node_index(i, j), re.node_index(m, j)) = re.diff_1d(i, m);
        if (dim == 2) re.diff[1](re.node_index(i, j), re.node_index(i, m)) = re.diff_1d(j, m);
      }
    }
  }

  const int nf = re.num_faces();
  re.face_nodes.assign(nf, {});
  re.lift.assign(nf, Eigen::MatrixXd::Zero(N, re.nodes_per_face));
  for (int t = 0; t < re.nodes_per_face; ++t) {
    re.face_nodes[0].push_back(re.node_index(0, t));
    re.face_nodes[1].push_back(re.node_index(n - 1, t));
    if (dim == 2) {
      re.face_nodes[2].push_back(re.node_index(t, 0));
      re.face_nodes[3].push_back(re.node_index(t, n - 1));
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) {
      const int k = re.node_index(i, j);
      const int tx = dim == 1 ? 0 : j;
      re.lift[0](k, tx) = re.lift_left_1d[i];
      re.lift[1](k, tx) = re.lift_right_1d[i];
      if (dim == 2) {
        re.lift[2](k, i) = re.lift_left_1d[j];
        re.lift[3](k, i) = re.lift_right_1d[j];
      }
    }
  }
  return re;
}

ModeGroupOperators build_mode_groups(const ReferenceElement& re) {
  ModeGroupOperators ops;
  const int N = re.num_nodes;
  ops.num_nodes = N;
  ops.mode_order = re.mode_order;
  ops.num_groups = *std::max_element(re.mode_order.begin(), re.mode_order.end()) + 1;
  ops.group_modes.assign(ops.num_groups, {});
  for (int m = 0; m < N; ++m) ops.group_modes[re.mode_order[m]].push_back(m);

  for (int k = 0; k < ops.num_groups; ++k) {
    Eigen::VectorXd sel = Eigen::VectorXd::Zero(N);
    for (int m : ops.group_modes[k]) sel(m) = 1.0;
    ops.projectors.push_back(re.vandermonde * sel.asDiagonal() * re.inv_vandermonde);
  }

  ops.V.resize(N * N);
  ops.Vinv.resize(N * N);
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      ops.V[r * N + c] = re.vandermonde(r, c);
      ops.Vinv[r * N + c] = re.inv_vandermonde(r, c);
    }
  }
  return ops;
}

double element_mean(const ReferenceElement& re, std::span<const double> nodal) {
  if (static_cast<int>(nodal.size()) != re.num_nodes) {
    throw std::invalid_argument("element_mean: nodal length does not match node count");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < nodal.size(); ++i) sum += re.weights[i] * nodal[i];
  return sum / re.reference_volume();
}

}  // namespace efmhd
