#pragma once

// Traveling-wave reductions as first-order phase-plane systems.
//
// Substituting u(x,t) = u(z), z = x - v t, each PDE becomes a planar ODE
// in (u, p), p = du/dz:
//
//   KdV         u'' = v u - (A/2) u^2      Hamiltonian,
//                                          H = (p^2 - v u^2 + A u^3 / 3) / 2
//   sine-Gordon u'' = -sin(u) / (v^2 - 1)  Hamiltonian,
//                                          H = p^2 / 2 - cos(u) / (v^2 - 1)
//   Fisher-KPP  D u'' + v u' + k u(1-u) = 0   (dissipative)
//   Burgers     D u'' = (u - v) u'            (dissipative)
//
// The solitary waves live on the saddle connections of these systems: a
// homoclinic loop for KdV, saddle-to-saddle and saddle-to-node halfloops
// for the others. trace_separatrix shoots from a saddle along its
// unstable eigenvector (delta = 1e-8 offset) and integrates until the
// trajectory re-enters a small ball around the target equilibrium.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "solact/models.hpp"
#include "solact/ode.hpp"

namespace solact {

struct PhasePoint {
  double u = 0.0;
  double p = 0.0;
};

/// Sampled phase-plane trajectory, z strictly increasing.
struct Orbit {
  std::vector<double> z;
  std::vector<PhasePoint> pts;
  bool closed = false;            ///< first and last sample coincide
  std::optional<double> energy;   ///< H at the start (Hamiltonian models)
  bool escaped = false;           ///< truncated by the blow-up guard

  std::size_t size() const { return z.size(); }
};

enum class EquilibriumKind { saddle, center, sink, source };

inline std::string equilibrium_kind_name(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::saddle: return "saddle";
    case EquilibriumKind::center: return "center";
    case EquilibriumKind::sink: return "stable-node/focus";
    case EquilibriumKind::source: return "unstable-node/focus";
  }
  return "?";
}

struct Equilibrium {
  PhasePoint point;  // p == 0
  EquilibriumKind kind = EquilibriumKind::center;
  std::array<std::complex<double>, 2> eigenvalues{};
};

// ---------------------------------------------------------------------------
// Vector field

/// Right-hand side (du/dz, dp/dz) of the reduction at s.
inline std::pair<double, double> tw_ode_rhs(const ModelSpec& m, double v,
                                            PhasePoint s) {
  if (const auto* kdv = std::get_if<KdV>(&m))
    return {s.p, v * s.u - 0.5 * kdv->A * s.u * s.u};
  if (std::holds_alternative<SineGordon>(m)) {
    if (v * v == 1.0)
      throw validation_error("singular reduction: sine-Gordon requires v^2 < 1");
    return {s.p, -std::sin(s.u) / (v * v - 1.0)};
  }
  if (const auto* kpp = std::get_if<FisherKPP>(&m))
    return {s.p, -(v * s.p + kpp->k * s.u * (1.0 - s.u)) / kpp->D};
  const auto& bu = std::get<Burgers>(m);
  return {s.p, (s.u - v) * s.p / bu.D};
}

inline bool is_hamiltonian(const ModelSpec& m) {
  return std::holds_alternative<KdV>(m) || std::holds_alternative<SineGordon>(m);
}

/// Conserved energy of the KdV / sine-Gordon reductions; the dissipative
/// reductions (Fisher-KPP, Burgers) carry first-derivative terms and are
/// rejected.
inline double hamiltonian(const ModelSpec& m, double v, PhasePoint s) {
  if (const auto* kdv = std::get_if<KdV>(&m))
    return 0.5 * (s.p * s.p - v * s.u * s.u + kdv->A * s.u * s.u * s.u / 3.0);
  if (std::holds_alternative<SineGordon>(m)) {
    if (v * v == 1.0)
      throw validation_error("singular reduction: sine-Gordon requires v^2 < 1");
    return 0.5 * s.p * s.p - std::cos(s.u) / (v * v - 1.0);
  }
  throw validation_error("not Hamiltonian: " + model_name(m) +
                         " reduction is dissipative");
}

// ---------------------------------------------------------------------------
// Equilibria

namespace detail {

// Classifies the linearization [[0, 1], [ju, jp]] at an equilibrium.
inline Equilibrium classify(double u, double ju, double jp) {
  Equilibrium eq;
  eq.point = {u, 0.0};
  const std::complex<double> disc =
      std::sqrt(std::complex<double>(jp * jp + 4.0 * ju, 0.0));
  eq.eigenvalues[0] = 0.5 * (std::complex<double>(jp, 0.0) - disc);
  eq.eigenvalues[1] = 0.5 * (std::complex<double>(jp, 0.0) + disc);
  const auto l0 = eq.eigenvalues[0];
  const auto l1 = eq.eigenvalues[1];
  const double scale = std::max({std::abs(l0), std::abs(l1), 1.0});
  const bool real = std::abs(l0.imag()) <= 1e-12 * scale;
  if (real) {
    if (l0.real() * l1.real() < 0.0)
      eq.kind = EquilibriumKind::saddle;
    else if (std::min(l0.real(), l1.real()) >= 0.0 &&
             std::max(l0.real(), l1.real()) > 0.0)
      eq.kind = EquilibriumKind::source;
    else
      eq.kind = EquilibriumKind::sink;
  } else {
    // Roundoff-tolerant center detection for the conservative reductions.
    const double re = 0.5 * (l0.real() + l1.real());
    if (std::abs(re) < 1e-10)
      eq.kind = EquilibriumKind::center;
    else
      eq.kind = re < 0.0 ? EquilibriumKind::sink : EquilibriumKind::source;
  }
  return eq;
}

}  // namespace detail

/// All p = 0 equilibria with u in [u_lo, u_hi], classified by the
/// eigenvalues of the linearization. The equilibrium structure is known in
/// closed form for every model, so the roots are enumerated analytically.
/// For Burgers every (u, 0) is degenerate-equilibrium; the two boundary
/// states u1, u2 (the front endpoints) are reported.
inline std::vector<Equilibrium> equilibria(const ModelSpec& m, double v,
                                           double u_lo, double u_hi) {
  v = admissible_speed(m, v);
  if (!(u_lo <= u_hi) || !std::isfinite(u_lo) || !std::isfinite(u_hi))
    throw validation_error("equilibria window must be finite with u_lo <= u_hi");
  std::vector<Equilibrium> out;
  const auto add = [&](double u, double ju, double jp) {
    if (u >= u_lo && u <= u_hi) out.push_back(detail::classify(u, ju, jp));
  };
  if (const auto* kdv = std::get_if<KdV>(&m)) {
    // f(u) = v u - (A/2) u^2, f'(u) = v - A u.
    add(0.0, v, 0.0);
    add(2.0 * v / kdv->A, -v, 0.0);
  } else if (std::holds_alternative<SineGordon>(m)) {
    sg_gamma(v);  // admissibility
    const double g2 = 1.0 / (1.0 - v * v);
    const long n_lo = static_cast<long>(std::ceil(u_lo / pi));
    const long n_hi = static_cast<long>(std::floor(u_hi / pi));
    for (long n = n_lo; n <= n_hi; ++n) {
      const double u = static_cast<double>(n) * pi;
      // f'(u) = cos(u) / (1 - v^2): saddle at even multiples, center at odd.
      add(u, (n % 2 == 0) ? g2 : -g2, 0.0);
    }
  } else if (const auto* kpp = std::get_if<FisherKPP>(&m)) {
    add(0.0, -kpp->k / kpp->D, -v / kpp->D);
    add(1.0, kpp->k / kpp->D, -v / kpp->D);
  } else {
    const auto& bu = std::get<Burgers>(m);
    add(bu.u1, 0.0, (bu.u1 - v) / bu.D);
    add(bu.u2, 0.0, (bu.u2 - v) / bu.D);
  }
  std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
    return a.point.u < b.point.u;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Orbit integration

struct IntegrateOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
  double blowup = 0.0;      ///< 0: auto, 1e6 x amplitude scale of the system
  double sample_dz = 0.0;   ///< 0: keep accepted integrator steps
  std::size_t max_steps = 50'000'000;
};

namespace detail {

inline double blowup_bound(const ModelSpec& m, double v, double requested) {
  if (requested > 0.0) return requested;
  double scale = 1.0;
  if (const auto* kdv = std::get_if<KdV>(&m))
    scale = std::max(1.0, std::abs(3.0 * v / kdv->A));
  else if (std::holds_alternative<SineGordon>(m))
    scale = 2.0 * pi;
  else if (std::holds_alternative<Burgers>(m)) {
    const auto& bu = std::get<Burgers>(m);
    scale = std::max({1.0, std::abs(bu.u1), std::abs(bu.u2)});
  }
  return 1e6 * scale;
}

inline auto rhs_for(const ModelSpec& m, double v) {
  return [m, v](const State2& y) -> State2 {
    const auto [du, dp] = tw_ode_rhs(m, v, {y[0], y[1]});
    return {du, dp};
  };
}

}  // namespace detail

/// Integrates the reduction from `start` over [z_begin, z_end] (either
/// direction). Samples are the accepted steps, or a uniform grid when
/// sample_dz > 0. If |u| or |p| exceeds the blow-up bound the orbit is
/// truncated and flagged `escaped`. Energy is recorded for Hamiltonian
/// models.
inline Orbit integrate_orbit(const ModelSpec& m, double v, PhasePoint start,
                             double z_begin, double z_end,
                             const IntegrateOptions& opts = {}) {
  v = admissible_speed(m, v);
  if (!std::isfinite(start.u) || !std::isfinite(start.p))
    throw validation_error("start point must be finite");
  if (!std::isfinite(z_begin) || !std::isfinite(z_end) || z_begin == z_end)
    throw validation_error("z span must be finite and nonempty");

  const double bound = detail::blowup_bound(m, v, opts.blowup);
  const double dir = z_end > z_begin ? 1.0 : -1.0;

  OdeOptions ode;
  ode.rtol = opts.rtol;
  ode.atol = opts.atol;
  ode.max_step = opts.max_step;
  ode.max_steps = opts.max_steps;
  // Cubic Hermite dense output is a fourth-order interpolant; cap the step
  // size when resampling so interpolated values keep full accuracy.
  if (opts.sample_dz > 0.0)
    ode.max_step = std::min(ode.max_step, 8.0 * opts.sample_dz);

  Orbit orbit;
  if (is_hamiltonian(m)) orbit.energy = hamiltonian(m, v, start);
  orbit.z.push_back(z_begin);
  orbit.pts.push_back(start);

  detail::Dopri5 stepper(detail::rhs_for(m, v), z_begin,
                         State2{start.u, start.p}, dir, ode);
  double next_sample = z_begin + dir * opts.sample_dz;
  while (dir * (z_end - stepper.z()) > 0.0) {
    stepper.clamp_next(z_end - stepper.z());
    stepper.step();
    const auto& st = stepper.current();
    const double z_stop = dir * (st.z1 - z_end) > 0.0 ? z_end : st.z1;
    if (opts.sample_dz > 0.0) {
      while (dir * (z_stop - next_sample) >= 0.0) {
        const State2 y = st.eval(next_sample);
        orbit.z.push_back(next_sample);
        orbit.pts.push_back({y[0], y[1]});
        next_sample += dir * opts.sample_dz;
      }
      if (z_stop == z_end && orbit.z.back() != z_end) {
        const State2 y = st.eval(z_end);
        orbit.z.push_back(z_end);
        orbit.pts.push_back({y[0], y[1]});
      }
    } else {
      const State2 y = z_stop == st.z1 ? st.y1 : st.eval(z_stop);
      orbit.z.push_back(z_stop);
      orbit.pts.push_back({y[0], y[1]});
    }
    const PhasePoint& last = orbit.pts.back();
    if (!std::isfinite(last.u) || !std::isfinite(last.p) ||
        std::abs(last.u) > bound || std::abs(last.p) > bound) {
      orbit.escaped = true;
      break;
    }
  }
  if (dir < 0.0) {  // report with z increasing
    std::reverse(orbit.z.begin(), orbit.z.end());
    std::reverse(orbit.pts.begin(), orbit.pts.end());
  }
  return orbit;
}

// ---------------------------------------------------------------------------
// Closed orbits

struct ClosedOrbitOptions {
  std::size_t n_samples = 20'001;  ///< uniform samples over one period
  double rtol = 1e-11;
  double atol = 1e-13;
  double closure_tol = 1e-6;       ///< scaled by max(1, |u|) of the orbit
  double max_span = 1e5;
};

/// Integrates one full period of a closed orbit starting from the turning
/// point (u_start, 0). The period is located by detecting the second
/// return of p to zero (each crossing is a turning point of the
/// oscillation). The orbit is resampled uniformly in z and marked closed.
inline Orbit integrate_closed_orbit(const ModelSpec& m, double v,
                                    double u_start,
                                    const ClosedOrbitOptions& opts = {}) {
  v = admissible_speed(m, v);
  const auto [du0, dp0] = tw_ode_rhs(m, v, {u_start, 0.0});
  if (dp0 == 0.0)
    throw validation_error("start is an equilibrium, orbit degenerate");

  auto rhs = detail::rhs_for(m, v);
  const auto momentum = [](const State2& y) { return y[1]; };

  // Period = z of the second return of p to zero (the turning points of
  // the oscillation). A rough uncapped pass estimates the period, then a
  // capped pass relocates the crossings with accurate dense output.
  const auto find_period = [&](double max_step) {
    OdeOptions ode;
    ode.rtol = opts.rtol;
    ode.atol = opts.atol;
    ode.max_step = max_step;
    detail::Dopri5 stepper(rhs, 0.0, State2{u_start, 0.0}, +1.0, ode);
    int crossings = 0;
    for (;;) {
      stepper.step();
      const auto& st = stepper.current();
      if (st.z1 > opts.max_span)
        throw numeric_error("orbit does not close within the span budget");
      if (st.y0[1] != 0.0 && (st.y0[1] < 0.0) != (st.y1[1] < 0.0)) {
        const double zc = detail::locate_event(st, momentum, st.z0, st.z1);
        if (++crossings == 2) return zc;
      }
    }
  };
  const double rough = find_period(std::numeric_limits<double>::infinity());
  const double period = find_period(rough / 256.0);

  // Resample one period uniformly; dense sampling feeds the action
  // quadrature downstream.
  IntegrateOptions iopts;
  iopts.rtol = opts.rtol;
  iopts.atol = opts.atol;
  iopts.sample_dz = period / static_cast<double>(opts.n_samples - 1);
  Orbit orbit = integrate_orbit(m, v, {u_start, 0.0}, 0.0, period, iopts);

  const PhasePoint& first = orbit.pts.front();
  const PhasePoint& last = orbit.pts.back();
  const double scale = std::max(1.0, std::abs(u_start));
  const double gap = std::hypot(last.u - first.u, last.p - first.p);
  if (gap > opts.closure_tol * scale)
    throw numeric_error("orbit failed to close: endpoint gap " +
                        std::to_string(gap));
  orbit.closed = true;
  return orbit;
}

// ---------------------------------------------------------------------------
// Separatrix tracing

struct SeparatrixOptions {
  double delta = 1e-8;              ///< seed offset scale along the eigenvector
  double reconnect_radius = 1e-5;   ///< target-entry ball radius
  double z_budget_decay_lengths = 200.0;
  double sample_dz = 0.0;           ///< 0: auto, 0.002 / decay rate
  double rtol = 1e-11;
  double atol = 1e-13;
};

namespace detail {

struct SeparatrixPlan {
  PhasePoint saddle;
  PhasePoint target;
  State2 direction;     // unit eigenvector direction to shoot along
  double rate = 1.0;    // decay rate, sets the z budget and sampling
  bool backward = false;  // integrate against z and reverse afterwards
  bool closed = false;    // homoclinic loop (target == saddle)
};

inline SeparatrixPlan separatrix_plan(const ModelSpec& m, double v,
                                      Branch branch) {
  SeparatrixPlan plan;
  if (const auto* kdv = std::get_if<KdV>(&m)) {
    const double lam = std::sqrt(v);
    const double sgn = kdv->A > 0.0 ? 1.0 : -1.0;  // loop opens toward 3v/A
    plan.saddle = {0.0, 0.0};
    plan.target = plan.saddle;
    plan.direction = {sgn, sgn * lam};
    plan.rate = lam;
    plan.closed = true;
  } else if (std::holds_alternative<SineGordon>(m)) {
    const double g = sg_gamma(v);
    if (branch == Branch::kink_up) {
      plan.saddle = {0.0, 0.0};
      plan.target = {2.0 * pi, 0.0};
      plan.direction = {1.0, g};
    } else {
      plan.saddle = {2.0 * pi, 0.0};
      plan.target = {0.0, 0.0};
      plan.direction = {-1.0, -g};
    }
    plan.rate = g;
  } else if (const auto* kpp = std::get_if<FisherKPP>(&m)) {
    const double a = kpp_alpha(*kpp, v);
    const double disc = std::sqrt(v * v / (kpp->D * kpp->D) + 4.0 * kpp->k / kpp->D);
    plan.saddle = {1.0, 0.0};
    plan.target = {0.0, 0.0};
    plan.rate = std::abs(a);
    if (v > 0.0) {
      // unstable eigenvalue of the saddle; shoot forward into 0 < u < 1
      const double lam = 0.5 * (-v / kpp->D + disc);
      plan.direction = {-1.0, -lam};
    } else {
      // front entering the saddle: shoot backward along its stable direction
      const double lam = 0.5 * (-v / kpp->D - disc);
      plan.direction = {-1.0, -lam};
      plan.backward = true;
    }
  } else {
    const auto& bu = std::get<Burgers>(m);
    const double lam = (bu.u2 - v) / bu.D;  // = (u2 - u1) / (2 D)
    plan.saddle = {bu.u2, 0.0};
    plan.target = {bu.u1, 0.0};
    plan.direction = {-1.0, -lam};
    plan.rate = lam;
  }
  const double norm = std::hypot(plan.direction[0], plan.direction[1]);
  plan.direction = {plan.direction[0] / norm, plan.direction[1] / norm};
  return plan;
}

}  // namespace detail

/// Traces the separatrix orbit carrying the solitary wave: the KdV
/// homoclinic loop or the kink/front heteroclinic halfloop. Seeded at
/// saddle + delta along the unstable unit eigenvector and integrated until
/// the trajectory enters the reconnection ball around the target
/// equilibrium. The returned samples are uniform in z (dense enough for
/// action quadrature); z starts at 0 and increases along the wave.
inline Orbit trace_separatrix(const ModelSpec& m, double v,
                              std::optional<Branch> branch = {},
                              const SeparatrixOptions& opts = {}) {
  v = admissible_speed(m, v);
  const Branch br = branch ? *branch : default_branch(m, v);
  validate_branch(m, v, br);
  const auto plan = detail::separatrix_plan(m, v, br);

  const double delta = opts.delta * std::max(1.0, std::abs(plan.saddle.u));
  const State2 y0{plan.saddle.u + delta * plan.direction[0],
                  plan.saddle.p + delta * plan.direction[1]};
  const double budget = opts.z_budget_decay_lengths / plan.rate;
  const double dz = opts.sample_dz > 0.0 ? opts.sample_dz : 0.002 / plan.rate;
  const double dir = plan.backward ? -1.0 : 1.0;

  OdeOptions ode;
  ode.rtol = opts.rtol;
  ode.atol = opts.atol;
  ode.max_step = 8.0 * dz;

  // The saddle connection is the H = H(saddle) level set; for the
  // Hamiltonian models each accepted step is projected back onto it
  // (one Newton step along grad H), so the return pass at the saddle is
  // not pushed outside the reconnection ball by accumulated drift.
  const bool project = is_hamiltonian(m);
  const double h_level =
      project ? hamiltonian(m, v, plan.saddle) : 0.0;

  Orbit orbit;
  if (is_hamiltonian(m))
    orbit.energy = hamiltonian(m, v, {y0[0], y0[1]});
  orbit.z.push_back(0.0);
  orbit.pts.push_back({y0[0], y0[1]});

  detail::Dopri5 stepper(detail::rhs_for(m, v), 0.0, y0, dir, ode);
  const double arm_radius = 1000.0 * opts.reconnect_radius;
  bool armed = std::hypot(y0[0] - plan.target.u, y0[1] - plan.target.p) >
               arm_radius;
  bool reconnected = false;
  double next_sample = dir * dz;
  double closest = std::numeric_limits<double>::infinity();

  while (std::abs(stepper.z()) < budget && !reconnected) {
    stepper.step();
    const auto& st = stepper.current();
    double zq = next_sample;
    while (dir * (st.z1 - zq) >= 0.0 && !reconnected) {
      const State2 y = st.eval(zq);
      orbit.z.push_back(zq);
      orbit.pts.push_back({y[0], y[1]});
      next_sample = zq + dir * dz;
      zq = next_sample;
      const double dist =
          std::hypot(y[0] - plan.target.u, y[1] - plan.target.p);
      closest = std::min(closest, dist);
      if (!armed && dist > arm_radius) armed = true;
      if (armed && dist <= opts.reconnect_radius) reconnected = true;
    }
    if (project && !reconnected) {
      State2 y = st.y1;
      for (int it = 0; it < 2; ++it) {
        const double dH = hamiltonian(m, v, {y[0], y[1]}) - h_level;
        // grad H = (-p', u') by Hamilton's equations
        const auto [du, dp] = tw_ode_rhs(m, v, {y[0], y[1]});
        const double g2 = dp * dp + du * du;
        if (g2 < 1e-30 || dH == 0.0) break;
        y[0] += dH * dp / g2;
        y[1] -= dH * du / g2;
      }
      stepper.reset(st.z1, y);
    }
  }
  if (!reconnected)
    throw numeric_error(
        "separatrix not closed: no return to the target equilibrium within "
        "z budget " +
        std::to_string(budget) + " (closest approach " +
        std::to_string(closest) + ")");

  if (plan.backward) {
    std::reverse(orbit.pts.begin(), orbit.pts.end());
    std::reverse(orbit.z.begin(), orbit.z.end());
    const double z_shift = orbit.z.front();
    for (double& zz : orbit.z) zz -= z_shift;
  }
  orbit.closed = plan.closed;
  return orbit;
}

}  // namespace solact
