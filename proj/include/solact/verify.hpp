#pragma once

// End-to-end verification run: sample the closed-form wave, evolve the
// full PDE, and check the two claims the toolkit exists to test —
// rigid translation at the admissible speed and constancy of the action
// I(t) along the run. A residual sweep of the closed form over random
// space-time points guards against a mis-specified speed.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "solact/action.hpp"
#include "solact/pde.hpp"

namespace solact {

struct VerifyOptions {
  double dx = 0.05;
  double dt = 0.0;               ///< 0: auto from the stability rule
  double travel_decay_lengths = 5.0;
  std::optional<double> T;       ///< override the horizon
  std::optional<double> domain_lo, domain_hi;
  std::size_t snapshots = 21;
  std::optional<double> force_v;  ///< claim a different speed (diagnostic)
  double speed_tol = 0.01;
  double drift_tol = 0.01;
  double residual_tol = 1e-9;
  std::size_t residual_points = 1000;
  std::uint64_t seed = 0x5eed5eedULL;
  double edge_clearance_decay_lengths = 10.0;
  double edge_value_tol = 1e-8;
};

struct VerifyReport {
  std::string model;
  double v_claimed = 0.0;
  double v_measured = 0.0;
  double speed_error = 0.0;      ///< |v_measured - v_claimed| / |v_claimed|
  double action_drift = 0.0;
  double residual_max = 0.0;
  bool pass_speed = false;
  bool pass_drift = false;
  bool pass_residual = false;
  bool pass = false;
  SpeedMeasurement speed{};
  ActionSeries actions{};
  double dx = 0.0, dt = 0.0, T = 0.0;
  double domain_lo = 0.0, domain_hi = 0.0;
  std::size_t steps = 0;
  std::vector<Field1D> snapshots;
};

/// Runs the full verification for one wave. The domain is built so the
/// wave core (tails within edge_value_tol of the limits) keeps the
/// configured clearance from any edge for the whole run.
inline VerifyReport run_verification(const TravelingWave& wave,
                                     const VerifyOptions& opts = {}) {
  if (wave.v == 0.0)
    throw validation_error(
        "verification needs a moving wave (v != 0) to measure a speed");

  const double kappa = decay_rate(wave);
  const double travel_signed =
      (wave.v > 0.0 ? 1.0 : -1.0) * opts.travel_decay_lengths / kappa;
  const double T =
      opts.T ? *opts.T : std::abs(travel_signed) / std::abs(wave.v);
  if (!(T > 0.0)) throw validation_error("verification horizon must be positive");

  const double core = tail_extent(wave, opts.edge_value_tol);
  const double clearance = opts.edge_clearance_decay_lengths / kappa;
  const double travel = wave.v * T;
  double lo = opts.domain_lo
                  ? *opts.domain_lo
                  : wave.z0 - core - clearance + std::min(0.0, travel);
  double hi = opts.domain_hi
                  ? *opts.domain_hi
                  : wave.z0 + core + clearance + std::max(0.0, travel);
  if (!(hi > lo)) throw validation_error("empty verification domain");

  const bool periodic = std::holds_alternative<KdV>(wave.model);
  std::size_t n;
  if (periodic) {
    n = static_cast<std::size_t>(std::ceil((hi - lo) / opts.dx));
    hi = lo + static_cast<double>(n) * opts.dx;
  } else {
    n = static_cast<std::size_t>(std::ceil((hi - lo) / opts.dx)) + 1;
    hi = lo + static_cast<double>(n - 1) * opts.dx;
  }

  const Field1D init = sample_wave(
      wave, lo, opts.dx, n, 0.0,
      periodic ? BoundaryKind::periodic : BoundaryKind::clamped);

  EvolveOptions eopts;
  eopts.snapshots = opts.snapshots;
  const Evolution evo = evolve(wave.model, init, opts.dt, T, eopts);

  VerifyReport rep;
  rep.model = model_name(wave.model);
  rep.v_claimed = opts.force_v.value_or(wave.v);
  rep.dx = opts.dx;
  rep.dt = evo.dt;
  rep.T = T;
  rep.domain_lo = lo;
  rep.domain_hi = hi;
  rep.steps = evo.steps;

  rep.speed = measure_speed(evo.snapshots, wave);
  rep.v_measured = rep.speed.v_measured;
  rep.speed_error =
      std::abs(rep.v_measured - rep.v_claimed) / std::abs(rep.v_claimed);

  rep.actions = action_timeseries(evo.snapshots);
  rep.action_drift = rep.actions.drift;

  // residual of the claimed traveling wave at random space-time points
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> xdist(lo, hi);
  std::uniform_real_distribution<double> tdist(0.0, T);
  double worst = 0.0;
  for (std::size_t i = 0; i < opts.residual_points; ++i) {
    const double r =
        pde_residual(wave, xdist(rng), tdist(rng), rep.v_claimed);
    worst = std::max(worst, std::abs(r));
  }
  rep.residual_max = worst;

  rep.pass_speed = rep.speed_error <= opts.speed_tol;
  rep.pass_drift = rep.action_drift <= opts.drift_tol;
  rep.pass_residual = rep.residual_max <= opts.residual_tol;
  rep.pass = rep.pass_speed && rep.pass_drift && rep.pass_residual;
  rep.snapshots = evo.snapshots;
  return rep;
}

}  // namespace solact
