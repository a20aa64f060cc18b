/// \file physics.hpp
/// \brief Ideal MHD state algebra: conversions, equation of state, analytic
/// flux, specific entropy, wavespeeds and the eight-wave source term.
///
/// Velocity and magnetic field always carry three components regardless of
/// mesh dimension; fluxes are only requested along mesh axes.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace efmhd {

inline constexpr int kNumFields = 8;

/// Component layout of a conserved state: (rho, rho v, B, E).
enum FieldIndex : int {
  kRho = 0,
  kMomX = 1,
  kMomY = 2,
  kMomZ = 3,
  kBx = 4,
  kBy = 5,
  kBz = 6,
  kEnergy = 7,
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3 a, Vec3 b) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Unit vector along a mesh axis, signed.
constexpr Vec3 axis_normal(int axis, double sign = 1.0) {
  Vec3 n;
  n[axis] = sign;
  return n;
}

/// The 8-component conserved vector u = (rho, rho v, B, E) at one point.
struct ConservedState {
  std::array<double, kNumFields> q{};

  constexpr double operator[](int i) const { return q[static_cast<std::size_t>(i)]; }
  constexpr double& operator[](int i) { return q[static_cast<std::size_t>(i)]; }

  constexpr double rho() const { return q[kRho]; }
  constexpr Vec3 momentum() const { return {q[kMomX], q[kMomY], q[kMomZ]}; }
  constexpr Vec3 magnetic() const { return {q[kBx], q[kBy], q[kBz]}; }
  constexpr double energy() const { return q[kEnergy]; }

  constexpr void set_momentum(Vec3 m) {
    q[kMomX] = m.x;
    q[kMomY] = m.y;
    q[kMomZ] = m.z;
  }
  constexpr void set_magnetic(Vec3 b) {
    q[kBx] = b.x;
    q[kBy] = b.y;
    q[kBz] = b.z;
  }

  constexpr ConservedState& operator+=(const ConservedState& o) {
    for (int i = 0; i < kNumFields; ++i) q[i] += o.q[i];
    return *this;
  }
  constexpr ConservedState& operator-=(const ConservedState& o) {
    for (int i = 0; i < kNumFields; ++i) q[i] -= o.q[i];
    return *this;
  }
  constexpr ConservedState& operator*=(double s) {
    for (auto& v : q) v *= s;
    return *this;
  }
  friend constexpr ConservedState operator+(ConservedState a, const ConservedState& b) { return a += b; }
  friend constexpr ConservedState operator-(ConservedState a, const ConservedState& b) { return a -= b; }
  friend constexpr ConservedState operator*(double s, ConservedState a) { return a *= s; }
  friend constexpr bool operator==(const ConservedState&, const ConservedState&) = default;
};

/// q = (rho, v, B, P).
struct PrimitiveState {
  double rho = 1.0;
  Vec3 v;
  Vec3 B;
  double P = 1.0;

  friend constexpr bool operator==(const PrimitiveState&, const PrimitiveState&) = default;
};

class GasModel {
 public:
  explicit GasModel(double gamma) : gamma_(gamma) {
    if (!(gamma > 1.0)) throw std::invalid_argument("GasModel: gamma must exceed 1");
  }
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

/// Raised when an operation needs an admissible state (rho > 0, P > 0).
class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eight-column flux tensor; column d is F . e_d.
using FluxTensor = std::array<ConservedState, 3>;

/// Thermodynamic pressure; no admissibility checks.
inline double pressure(const ConservedState& u, const GasModel& g) {
  const Vec3 m = u.momentum();
  const Vec3 b = u.magnetic();
  return (g.gamma() - 1.0) * (u.energy() - 0.5 * dot(m, m) / u.rho() - 0.5 * dot(b, b));
}

/// Strict check: rho > 0 and P > 0, both finite.
bool is_admissible(const ConservedState& u, const GasModel& g);

PrimitiveState cons_to_prim(const ConservedState& u, const GasModel& g);
ConservedState prim_to_cons(const PrimitiveState& q, const GasModel& g);

/// Flux along a single mesh axis (0, 1 or 2).
ConservedState axis_flux(const ConservedState& u, int axis, const GasModel& g);
/// F(u) . n for an arbitrary direction.
ConservedState normal_flux(const ConservedState& u, Vec3 n, const GasModel& g);
FluxTensor physical_flux(const ConservedState& u, const GasModel& g);

/// sigma = P rho^-gamma.
double specific_entropy(const ConservedState& u, const GasModel& g);

struct AuxQuantities {
  double magnetic_pressure = 0.0;
  double plasma_beta = 0.0;
};

/// Magnetic pressure is evaluated as (gamma-1)/2 B.B, which differs from the
/// conventional B.B/2 by the factor (gamma-1). Plasma beta is 2P/B.B and is
/// +infinity when B vanishes.
AuxQuantities aux_quantities(const ConservedState& u, const GasModel& g);

double fast_magnetosonic_speed(const ConservedState& u, Vec3 n, const GasModel& g);

/// Powell eight-wave source -(0, B, v, v.B) divB.
ConservedState powell_source(const ConservedState& u, double divB);

std::string describe(const ConservedState& u);

}  // namespace efmhd
