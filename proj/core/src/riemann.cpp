#include "efmhd/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace efmhd {

namespace {

constexpr double kDegenerateTol = 1e-10;

struct Frame {
  Vec3 n, t1, t2;
};

Frame make_frame(Vec3 n) {
  int a = 0;
  for (int c = 1; c < 3; ++c) {
    if (std::abs(n[c]) < std::abs(n[a])) a = c;
  }
  Vec3 t1 = axis_normal(a) - n[a] * n;
  t1 = (1.0 / norm(t1)) * t1;
  return {n, t1, cross(n, t1)};
}

ConservedState to_frame(const ConservedState& u, const Frame& f) {
  ConservedState r = u;
  const Vec3 m = u.momentum();
  const Vec3 b = u.magnetic();
  r.set_momentum({dot(m, f.n), dot(m, f.t1), dot(m, f.t2)});
  r.set_magnetic({dot(b, f.n), dot(b, f.t1), dot(b, f.t2)});
  return r;
}

ConservedState from_frame(const ConservedState& u, const Frame& f) {
  ConservedState r = u;
  const Vec3 m = u.momentum();
  const Vec3 b = u.magnetic();
  r.set_momentum(m.x * f.n + m.y * f.t1 + m.z * f.t2);
  r.set_magnetic(b.x * f.n + b.y * f.t1 + b.z * f.t2);
  return r;
}

void require_admissible(const ConservedState& u, const GasModel& g, const char* who) {
  if (!is_admissible(u, g)) throw InvalidStateError(std::string(who) + ": inadmissible trace " + describe(u));
}

ConservedState hll_from_speeds(const ConservedState& fl, const ConservedState& fr, const ConservedState& ul,
                               const ConservedState& ur, WaveSpeeds s) {
  if (s.left >= 0.0) return fl;
  if (s.right <= 0.0) return fr;
  const double inv = 1.0 / (s.right - s.left);
  ConservedState f;
  for (int i = 0; i < kNumFields; ++i) {
    f[i] = (s.right * fl[i] - s.left * fr[i] + s.left * s.right * (ur[i] - ul[i])) * inv;
  }
  return f;
}

}  // namespace

RiemannSolver parse_riemann_solver(std::string_view name) {
  if (name == "rusanov") return RiemannSolver::Rusanov;
  if (name == "hll") return RiemannSolver::Hll;
  if (name == "hllc") return RiemannSolver::Hllc;
  throw std::invalid_argument("unknown riemann solver '" + std::string(name) + "' (rusanov|hll|hllc)");
}

std::string_view to_string(RiemannSolver s) {
  switch (s) {
    case RiemannSolver::Rusanov: return "rusanov";
    case RiemannSolver::Hll: return "hll";
    case RiemannSolver::Hllc: return "hllc";
  }
  return "?";
}

std::atomic<long>& hllc_fallback_count() {
  static std::atomic<long> count{0};
  return count;
}

WaveSpeeds davis_wavespeeds(const RiemannInput& in, const GasModel& g) {
  const double cl = fast_magnetosonic_speed(in.left, in.normal, g);
  const double cr = fast_magnetosonic_speed(in.right, in.normal, g);
  const double vl = dot(in.left.momentum(), in.normal) / in.left.rho();
  const double vr = dot(in.right.momentum(), in.normal) / in.right.rho();
  return {std::min(vl - cl, vr - cr), std::max(vl + cl, vr + cr)};
}

ConservedState rusanov_flux(const RiemannInput& in, const GasModel& g) {
  const WaveSpeeds s = davis_wavespeeds(in, g);
  const double lambda = std::max(std::abs(s.left), std::abs(s.right));
  const ConservedState fl = normal_flux(in.left, in.normal, g);
  const ConservedState fr = normal_flux(in.right, in.normal, g);
  ConservedState f;
  for (int i = 0; i < kNumFields; ++i) {
    f[i] = 0.5 * (fl[i] + fr[i]) - 0.5 * lambda * (in.right[i] - in.left[i]);
  }
  return f;
}

ConservedState hll_flux(const RiemannInput& in, const GasModel& g) {
  const WaveSpeeds s = davis_wavespeeds(in, g);
  return hll_from_speeds(normal_flux(in.left, in.normal, g), normal_flux(in.right, in.normal, g), in.left,
                         in.right, s);
}

ConservedState hllc_flux(const RiemannInput& in, const GasModel& g) {
  require_admissible(in.left, g, "hllc_flux");
  require_admissible(in.right, g, "hllc_flux");
  const Frame frame = make_frame(in.normal);
  const ConservedState ul = to_frame(in.left, frame);
  const ConservedState ur = to_frame(in.right, frame);
  const Vec3 ex{1.0, 0.0, 0.0};
  const WaveSpeeds s = davis_wavespeeds({ul, ur, ex}, g);
  const ConservedState fl = axis_flux(ul, 0, g);
  const ConservedState fr = axis_flux(ur, 0, g);

  if (s.left >= 0.0) return from_frame(fl, frame);
  if (s.right <= 0.0) return from_frame(fr, frame);

  const double inv = 1.0 / (s.right - s.left);
  ConservedState hll_state;
  for (int i = 0; i < kNumFields; ++i) {
    hll_state[i] = (s.right * ur[i] - s.left * ul[i] - (fr[i] - fl[i])) * inv;
  }
  const ConservedState hll = hll_from_speeds(fl, fr, ul, ur, s);

  const double rl = ul.rho(), rr = ur.rho();
  const double vl = ul[kMomX] / rl, vr = ur[kMomX] / rr;
  const Vec3 bl = ul.magnetic(), br = ur.magnetic();
  const double ptl = pressure(ul, g) + 0.5 * dot(bl, bl);
  const double ptr = pressure(ur, g) + 0.5 * dot(br, br);
  const double al = rl * (s.left - vl);
  const double ar = rr * (s.right - vr);

  const double sm = (ar * vr - al * vl - ptr + ptl + br.x * br.x - bl.x * bl.x) / (ar - al);
  const double scale = std::max(std::abs(s.left), std::abs(s.right));
  if (!std::isfinite(sm) || sm - s.left <= kDegenerateTol * scale || s.right - sm <= kDegenerateTol * scale) {
    ++hllc_fallback_count();
    return from_frame(hll, frame);
  }

  const Vec3 bs = hll_state.magnetic();
  const Vec3 vs = (1.0 / hll_state.rho()) * hll_state.momentum();
  const double vbs = dot(vs, bs);
  const double pts = al * (sm - vl) + ptl - bl.x * bl.x + bs.x * bs.x;

  auto star = [&](const ConservedState& u, double sk, double vk, double ptk) {
    const Vec3 b = u.magnetic();
    const Vec3 v = (1.0 / u.rho()) * u.momentum();
    const double d = 1.0 / (sk - sm);
    ConservedState us;
    us[kRho] = u.rho() * (sk - vk) * d;
    us[kMomX] = us[kRho] * sm;
    us[kMomY] = (u[kMomY] * (sk - vk) - (bs.x * bs.y - b.x * b.y)) * d;
    us[kMomZ] = (u[kMomZ] * (sk - vk) - (bs.x * bs.z - b.x * b.z)) * d;
    us.set_magnetic(bs);
    us[kEnergy] = (u.energy() * (sk - vk) - ptk * vk + pts * sm - (bs.x * vbs - b.x * dot(v, b))) * d;
    return us;
  };

  const bool use_left = sm >= 0.0;
  const ConservedState& uk = use_left ? ul : ur;
  const double sk = use_left ? s.left : s.right;
  const ConservedState us = use_left ? star(ul, s.left, vl, ptl) : star(ur, s.right, vr, ptr);
  if (!(us.rho() > 0.0) || !std::isfinite(us.energy())) {
    ++hllc_fallback_count();
    return from_frame(hll, frame);
  }
  ConservedState f = use_left ? fl : fr;
  for (int i = 0; i < kNumFields; ++i) f[i] += sk * (us[i] - uk[i]);
  return from_frame(f, frame);
}

ConservedState numerical_flux(RiemannSolver solver, const RiemannInput& in, const GasModel& g) {
  switch (solver) {
    case RiemannSolver::Rusanov: return rusanov_flux(in, g);
    case RiemannSolver::Hll: return hll_flux(in, g);
    case RiemannSolver::Hllc: return hllc_flux(in, g);
  }
  throw std::logic_error("numerical_flux: unknown solver");
}

}  // namespace efmhd
