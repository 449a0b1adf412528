#pragma once

// Action and angle variables for solitary waves and closed orbits.
//
// For a closed phase-plane orbit the action is the loop integral
// I = (1/2pi) oint p dq, equal to the enclosed area over 2pi. The
// solitary waves live on separatrix orbits, where the same quantity
// becomes the profile integral
//
//     I = (1/2pi) integral (du/dz)^2 dz   over the whole line,
//
// since p dq = (du/dz)^2 dz along the trajectory. Closed forms for the
// four models:
//
//     KdV       I = (12 / 5pi) v^(5/2) / A^2
//     sG kink   I = 4 / (pi sqrt(1 - v^2))
//     KPP front I = |a| / (10 pi),         a = v / (5 D)
//     Burgers   I = (u2 - u1)^3 / (24 pi D)
//
// The conjugate angle advances linearly with the wave coordinate,
// dTheta/dz = v, with dI/dz = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "solact/models.hpp"
#include "solact/quadrature.hpp"
#include "solact/reduction.hpp"

namespace solact {

/// Action-angle state along the wave coordinate: I constant, theta linear.
struct ActionAngle {
  double I = 0.0;
  double theta = 0.0;
  double rate = 0.0;  ///< dTheta/dz = v
};

/// Result of the profile-action quadrature.
struct QuadratureEstimate {
  double value = 0.0;
  double abs_error_estimate = 0.0;  ///< discretization + truncation parts
  double half_width = 0.0;          ///< truncation L: integral taken on [-L, L]
  std::size_t nodes = 0;
};

struct ActionOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-11;
  double tail_rel = 1e-12;  ///< tail bound kept below this fraction of I
  std::size_t max_panels = 4096;
};

namespace detail {

// Bound on the neglected tails of integral (u')^2 dz beyond [-L, L]:
// both tails decay at least as fast as exp(-2 kappa |z|), so each is
// bounded by (u'(+-L))^2 / (2 kappa) times an O(1) constant.
inline double action_tail_bound(const TravelingWave& w, double half_width) {
  const double kappa = decay_rate(w);
  const double dl = eval_profile(w, w.z0 - half_width).second;
  const double dr = eval_profile(w, w.z0 + half_width).second;
  return 4.0 * (dl * dl + dr * dr) / (2.0 * kappa);
}

}  // namespace detail

/// Numerical action of a solitary-wave profile: adaptive quadrature of
/// (1/2pi) (du/dz)^2 over [-L, L], with L grown until the analytic tail
/// bound drops below tail_rel of the running value.
inline QuadratureEstimate action_profile(const TravelingWave& w,
                                         const ActionOptions& opts = {}) {
  const double kappa = decay_rate(w);
  const auto integrand = [&w](double z) {
    const double du = eval_profile(w, z).second;
    return du * du;
  };

  double half = 20.0 / kappa;
  // Coarse estimate used by the truncation rule.
  QuadratureResult coarse = integrate_adaptive(
      integrand, w.z0 - half, w.z0 + half, 1e-6, 1e-6, opts.max_panels);
  std::size_t nodes = coarse.nodes;
  double tail = detail::action_tail_bound(w, half);
  while (tail > opts.tail_rel * std::max(coarse.value, 1e-300)) {
    half *= 1.25;
    tail = detail::action_tail_bound(w, half);
    if (half > 1e6 / kappa)
      throw numeric_error("action_profile: truncation width not found");
  }

  QuadratureResult fine =
      integrate_adaptive(integrand, w.z0 - half, w.z0 + half,
                         2.0 * pi * opts.abs_tol, opts.rel_tol, opts.max_panels);
  QuadratureEstimate est;
  est.value = fine.value / (2.0 * pi);
  est.abs_error_estimate = (fine.abs_error + tail) / (2.0 * pi);
  est.half_width = half;
  est.nodes = nodes + fine.nodes;
  return est;
}

/// Closed-form action of the solitary wave of (model, v).
inline double action_reference(const ModelSpec& m, double v) {
  v = admissible_speed(m, v);
  if (const auto* kdv = std::get_if<KdV>(&m))
    return 12.0 / (5.0 * pi) * std::pow(v, 2.5) / (kdv->A * kdv->A);
  if (std::holds_alternative<SineGordon>(m))
    return 4.0 / pi * sg_gamma(v);
  if (const auto* kpp = std::get_if<FisherKPP>(&m))
    return std::abs(kpp_alpha(*kpp, v)) / (10.0 * pi);
  const auto& bu = std::get<Burgers>(m);
  const double jump = bu.u2 - bu.u1;
  return jump * jump * jump / (24.0 * pi * bu.D);
}

/// Action of a closed orbit, computed two independent ways.
struct ClosedOrbitAction {
  double I = 0.0;            ///< line integral (1/2pi) oint p du
  double area_action = 0.0;  ///< (1/2pi) x shoelace enclosed area
  double discrepancy = 0.0;  ///< |line - area|
  double period = 0.0;       ///< z extent of one circuit
  double omega0 = 0.0;       ///< 2pi / period (0 for a degenerate orbit)
};

/// Computes I = (1/2pi) oint p du along a closed orbit. The line integral
/// is evaluated as integral p^2 dz in the orbit parameter (du = p dz on a
/// trajectory); the independent geometric route is the shoelace area of
/// the sample polygon. Rejects orbits that are not closed and sample
/// polygons that wind inconsistently (self-intersect) around the centroid.
inline ClosedOrbitAction action_closed_orbit(const Orbit& orbit) {
  if (!orbit.closed)
    throw validation_error("action_closed_orbit requires a closed orbit");
  const std::size_t n = orbit.size();
  if (n < 2) throw validation_error("orbit must contain at least 2 samples");

  ClosedOrbitAction res;
  res.period = orbit.z.back() - orbit.z.front();

  double umin = orbit.pts[0].u, umax = umin;
  double pmin = orbit.pts[0].p, pmax = pmin;
  for (const auto& s : orbit.pts) {
    umin = std::min(umin, s.u);
    umax = std::max(umax, s.u);
    pmin = std::min(pmin, s.p);
    pmax = std::max(pmax, s.p);
  }
  const double extent = std::max(umax - umin, pmax - pmin);
  if (extent == 0.0) return res;  // degenerate orbit: I = 0

  // Line integral: trapezoid of p^2 over z (spectrally accurate on the
  // uniform periodic samples produced by integrate_closed_orbit).
  double line = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double f0 = orbit.pts[i].p * orbit.pts[i].p;
    const double f1 = orbit.pts[i + 1].p * orbit.pts[i + 1].p;
    line += 0.5 * (f0 + f1) * (orbit.z[i + 1] - orbit.z[i]);
  }

  // Enclosed area via the shoelace formula on the closed polygon.
  double uc = 0.0, pc = 0.0;
  for (const auto& s : orbit.pts) {
    uc += s.u;
    pc += s.p;
  }
  uc /= static_cast<double>(n);
  pc /= static_cast<double>(n);
  double area2 = 0.0;
  int orientation = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& a = orbit.pts[i];
    const auto& b = orbit.pts[i + 1];
    area2 += a.u * b.p - b.u * a.p;
    const double cross =
        (a.u - uc) * (b.p - pc) - (b.u - uc) * (a.p - pc);
    if (cross > 1e-12 * extent * extent) {
      if (orientation < 0)
        throw numeric_error("orbit sample polygon is self-intersecting");
      orientation = 1;
    } else if (cross < -1e-12 * extent * extent) {
      if (orientation > 0)
        throw numeric_error("orbit sample polygon is self-intersecting");
      orientation = -1;
    }
  }
  // Closing edge (last sample back to the first).
  area2 += orbit.pts[n - 1].u * orbit.pts[0].p -
           orbit.pts[0].u * orbit.pts[n - 1].p;

  res.I = line / (2.0 * pi);
  res.area_action = std::abs(area2) / (4.0 * pi);
  res.discrepancy = std::abs(res.I - res.area_action);
  res.omega0 = res.period > 0.0 ? 2.0 * pi / res.period : 0.0;
  return res;
}

/// Linear action-angle flow along the wave coordinate: I is transported
/// unchanged and theta(z) = v (z - z0).
inline ActionAngle action_angle_flow(double I, double v, double z0, double z) {
  if (!(I >= 0.0) || !std::isfinite(I))
    throw validation_error("action must be finite and >= 0");
  if (!std::isfinite(v) || !std::isfinite(z0) || !std::isfinite(z))
    throw validation_error("action_angle_flow requires finite inputs");
  return {I, v * (z - z0), v};
}

}  // namespace solact
