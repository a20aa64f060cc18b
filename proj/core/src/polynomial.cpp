#include "efmhd/polynomial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace efmhd::poly {

std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  // P_n' from the three-term identity; the endpoint form avoids 0/0.
  double dp;
  if (std::abs(std::abs(x) - 1.0) < 1e-15) {
    dp = 0.5 * n * (n + 1.0) * (x > 0 ? 1.0 : ((n % 2 == 0) ? -1.0 : 1.0));
  } else {
    dp = n * (x * p - p_prev) / (x * x - 1.0);
  }
  return {p, dp};
}

std::pair<double, double> orthonormal_legendre(int n, double x) {
  const auto [p, dp] = legendre(n, x);
  const double s = std::sqrt((2.0 * n + 1.0) / 2.0);
  return {s * p, s * dp};
}

QuadratureRule gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: need at least 2 points");
  const int p = n - 1;
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.points.front() = -1.0;
  rule.points.back() = 1.0;
  // Interior nodes are the roots of P_p'; Newton from Chebyshev-Lobatto guesses.
  for (int i = 1; i < p; ++i) {
    double x = -std::cos(std::numbers::pi * i / p);
    for (int it = 0; it < 100; ++it) {
      // (1 - x^2) P_p'' = 2x P_p' - p(p+1) P_p
      const auto [pv, dpv] = legendre(p, x);
      const double d2p = (2.0 * x * dpv - p * (p + 1.0) * pv) / (1.0 - x * x);
      const double dx = dpv / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.points[i] = x;
  }
  for (int i = 0; i < n; ++i) {
    const double pv = legendre(p, rule.points[i]).first;
    rule.weights[i] = 2.0 / (p * (p + 1.0) * pv * pv);
  }
  return rule;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least 1 point");
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [pv, dpv] = legendre(n, x);
      dp = dpv;
      const double dx = pv / dpv;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre(n, x).second;
    rule.points[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

std::vector<double> lagrange_weights(std::span<const double> nodes, double x) {
  const std::size_t n = nodes.size();
  std::vector<double> l(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) {
      if (m != j) l[j] *= (x - nodes[m]) / (nodes[j] - nodes[m]);
    }
  }
  return l;
}

}  // namespace efmhd::poly
