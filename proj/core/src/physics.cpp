#include "efmhd/physics.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace efmhd {

bool is_admissible(const ConservedState& u, const GasModel& g) {
  if (!(u.rho() > 0.0) || !std::isfinite(u.rho())) return false;
  const double p = pressure(u, g);
  return p > 0.0 && std::isfinite(p);
}

PrimitiveState cons_to_prim(const ConservedState& u, const GasModel& g) {
  if (!(u.rho() > 0.0)) throw InvalidStateError("cons_to_prim: non-positive density in " + describe(u));
  PrimitiveState q;
  q.rho = u.rho();
  q.v = (1.0 / u.rho()) * u.momentum();
  q.B = u.magnetic();
  q.P = pressure(u, g);
  return q;
}

ConservedState prim_to_cons(const PrimitiveState& q, const GasModel& g) {
  ConservedState u;
  u[kRho] = q.rho;
  u.set_momentum(q.rho * q.v);
  u.set_magnetic(q.B);
  u[kEnergy] = q.P / (g.gamma() - 1.0) + 0.5 * q.rho * dot(q.v, q.v) + 0.5 * dot(q.B, q.B);
  return u;
}

ConservedState axis_flux(const ConservedState& u, int axis, const GasModel& g) {
  const double rho = u.rho();
  const Vec3 m = u.momentum();
  const Vec3 b = u.magnetic();
  const Vec3 v = (1.0 / rho) * m;
  const double bb = dot(b, b);
  const double p = (g.gamma() - 1.0) * (u.energy() - 0.5 * dot(m, v) - 0.5 * bb);
  const double pt = p + 0.5 * bb;
  const double vn = v[axis];
  const double bn = b[axis];

  ConservedState f;
  f[kRho] = m[axis];
  for (int c = 0; c < 3; ++c) {
    f[kMomX + c] = m[c] * vn - b[c] * bn;
    f[kBx + c] = vn * b[c] - bn * v[c];
  }
  f[kMomX + axis] += pt;
  f[kEnergy] = (u.energy() + pt) * vn - bn * dot(v, b);
  return f;
}

ConservedState normal_flux(const ConservedState& u, Vec3 n, const GasModel& g) {
  const double rho = u.rho();
  const Vec3 m = u.momentum();
  const Vec3 b = u.magnetic();
  const Vec3 v = (1.0 / rho) * m;
  const double bb = dot(b, b);
  const double p = (g.gamma() - 1.0) * (u.energy() - 0.5 * dot(m, v) - 0.5 * bb);
  const double pt = p + 0.5 * bb;
  const double vn = dot(v, n);
  const double bn = dot(b, n);

  ConservedState f;
  f[kRho] = rho * vn;
  for (int c = 0; c < 3; ++c) {
    f[kMomX + c] = m[c] * vn - b[c] * bn + pt * n[c];
    f[kBx + c] = vn * b[c] - bn * v[c];
  }
  f[kEnergy] = (u.energy() + pt) * vn - bn * dot(v, b);
  return f;
}

FluxTensor physical_flux(const ConservedState& u, const GasModel& g) {
  return {axis_flux(u, 0, g), axis_flux(u, 1, g), axis_flux(u, 2, g)};
}

double specific_entropy(const ConservedState& u, const GasModel& g) {
  if (!(u.rho() > 0.0)) throw InvalidStateError("specific_entropy: non-positive density in " + describe(u));
  return pressure(u, g) * std::pow(u.rho(), -g.gamma());
}

AuxQuantities aux_quantities(const ConservedState& u, const GasModel& g) {
  const Vec3 b = u.magnetic();
  const double bb = dot(b, b);
  AuxQuantities a;
  a.magnetic_pressure = 0.5 * (g.gamma() - 1.0) * bb;
  a.plasma_beta = bb > 0.0 ? 2.0 * pressure(u, g) / bb : std::numeric_limits<double>::infinity();
  return a;
}

double fast_magnetosonic_speed(const ConservedState& u, Vec3 n, const GasModel& g) {
  if (!is_admissible(u, g)) throw InvalidStateError("fast_magnetosonic_speed: inadmissible state " + describe(u));
  const double rho = u.rho();
  const Vec3 b = u.magnetic();
  const double a2 = g.gamma() * pressure(u, g) / rho;
  const double b2 = dot(b, b) / rho;
  const double bn = dot(b, n);
  const double bn2 = bn * bn / rho;
  const double s = a2 + b2;
  // (a2 + b2)^2 - 4 a2 bn2 >= (a2 - b2)^2 >= 0 since bn2 <= b2
  const double disc = std::max(s * s - 4.0 * a2 * bn2, 0.0);
  return std::sqrt(0.5 * (s + std::sqrt(disc)));
}

ConservedState powell_source(const ConservedState& u, double divB) {
  const Vec3 b = u.magnetic();
  const Vec3 v = (1.0 / u.rho()) * u.momentum();
  ConservedState s;
  s[kRho] = 0.0;
  s.set_momentum(-divB * b);
  s.set_magnetic(-divB * v);
  s[kEnergy] = -divB * dot(v, b);
  return s;
}

std::string describe(const ConservedState& u) {
  std::ostringstream os;
  os.precision(10);
  os << "(";
  for (int i = 0; i < kNumFields; ++i) os << (i ? ", " : "") << u[i];
  os << ")";
  return os.str();
}

}  // namespace efmhd
