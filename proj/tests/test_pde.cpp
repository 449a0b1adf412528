#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "solact/pde.hpp"
#include "solact/verify.hpp"

using namespace solact;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("closed forms satisfy their PDEs to roundoff") {
  const auto waves = {
      closed_form_profile(make_kdv(1.0), 1.0),
      closed_form_profile(make_sine_gordon(), 0.5),
      closed_form_profile(make_fisher_kpp(1.0, 6.0)),
      closed_form_profile(make_burgers(1.0, 0.0, 2.0)),
  };
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> xd(-20.0, 20.0), td(0.0, 5.0);
  for (const auto& w : waves) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
      worst = std::max(worst, std::abs(pde_residual(w, xd(rng), td(rng))));
    INFO("model " << model_name(w.model));
    REQUIRE(worst <= 1e-9);
  }
}

TEST_CASE("residual exposes a mis-specified speed") {
  // KPP shape solves the PDE only at v = 5; translating it at v = 4
  // leaves a residual of exactly u', an O(1) mismatch.
  const auto w = closed_form_profile(make_fisher_kpp(1.0, 6.0));
  ResidualGrid grid;
  grid.x_lo = -10.0;
  grid.x_hi = 10.0;
  const double r = residual_check(w, grid, 4.0);
  REQUIRE(r > 0.1);
  REQUIRE(residual_check(w, grid) <= 1e-9);
}

TEST_CASE("field sampling and validation") {
  const auto w = closed_form_profile(make_burgers(1.0, 0.0, 1.0));
  SECTION("narrow clamped domains are rejected") {
    REQUIRE_THROWS_WITH(
        sample_wave(w, -3.0, 0.1, 61, 0.0, BoundaryKind::clamped),
        ContainsSubstring("widen the domain"));
  }
  SECTION("sine-Gordon fields carry u_t = -v u'") {
    const auto sg = closed_form_profile(make_sine_gordon(), 0.5);
    const auto f = sample_wave(sg, -40.0, 0.1, 801, 0.0, BoundaryKind::clamped);
    const std::size_t mid = 400;
    const auto [u, du] = eval_profile(sg, f.x(mid));
    REQUIRE(f.ut[mid] == -0.5 * du);
    REQUIRE(f.u[mid] == u);
  }
  SECTION("too-small grids are rejected") {
    Field1D f;
    f.u.assign(8, 0.0);
    REQUIRE_THROWS_AS(validate_field(f), validation_error);
  }
}

TEST_CASE("KdV soliton verification run") {
  // periodic domain of length 80, dx = 0.05, T = 5: the soliton must
  // come back translated by 5 with conserved action and mass
  const auto w = closed_form_profile(make_kdv(1.0), 1.0);
  // computed once and shared across the sections below
  static const auto rep = [&] {
    VerifyOptions opts;
    opts.domain_lo = -40.0;
    opts.domain_hi = 40.0;
    opts.T = 5.0;
    return run_verification(w, opts);
  }();

  SECTION("translates rigidly within 1e-2 of the peak amplitude") {
    const auto& fin = rep.snapshots.back();
    double worst = 0.0;
    for (std::size_t i = 0; i < fin.n(); ++i) {
      const double exact = eval_profile(w, fin.x(i) - w.v * fin.t).first;
      worst = std::max(worst, std::abs(fin.u[i] - exact));
    }
    REQUIRE(worst <= 1e-2 * 3.0);
  }
  SECTION("measured speed and action drift meet the thresholds") {
    REQUIRE(rep.speed.method == SpeedMethod::energy_centroid);
    REQUIRE_THAT(rep.v_measured, WithinAbs(1.0, 0.01));
    REQUIRE(rep.action_drift <= 0.01);
    REQUIRE(rep.pass);
  }
  SECTION("discrete mass is conserved by the flux form") {
    const double m0 = field_mass(rep.snapshots.front());
    const double m1 = field_mass(rep.snapshots.back());
    REQUIRE_THAT(m1, WithinRel(m0, 1e-6));
  }
  SECTION("snapshot cadence covers the run") {
    REQUIRE(rep.snapshots.size() == 21);
    REQUIRE(rep.snapshots.front().t == 0.0);
    REQUIRE_THAT(rep.snapshots.back().t, WithinRel(5.0, 1e-12));
  }
}

TEST_CASE("Burgers front verification run") {
  const auto w = closed_form_profile(make_burgers(1.0, 0.0, 1.0));
  VerifyOptions opts;
  opts.T = 10.0;  // translation by v T = 5
  const auto rep = run_verification(w, opts);
  const auto& fin = rep.snapshots.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < fin.n(); ++i) {
    const double exact = eval_profile(w, fin.x(i) - w.v * fin.t).first;
    worst = std::max(worst, std::abs(fin.u[i] - exact));
  }
  REQUIRE(worst <= 0.01);  // 1% of the unit jump
  REQUIRE_THAT(rep.v_measured, WithinRel(0.5, 0.01));
  REQUIRE(rep.speed.method == SpeedMethod::level_crossing);
  REQUIRE(rep.pass);
}

TEST_CASE("equilibrium fields stay put") {
  SECTION("zero KdV field remains identically zero") {
    Field1D f;
    f.u.assign(128, 0.0);
    f.dx = 0.1;
    f.x0 = 0.0;
    f.bc = BoundaryKind::periodic;
    const auto evo = evolve(make_kdv(1.0), f, 0.0, 1.0);
    for (double v : evo.snapshots.back().u) REQUIRE(v == 0.0);
  }
  SECTION("constant fields have zero action, reported absolutely") {
    Field1D f;
    f.u.assign(64, 0.7);
    f.dx = 0.1;
    f.bc = BoundaryKind::clamped;
    const auto series = action_timeseries({f, f, f});
    REQUIRE(series.drift_is_absolute);
    REQUIRE(series.drift == 0.0);
    for (const auto& [t, i] : series.series) REQUIRE(i == 0.0);
  }
}

TEST_CASE("evolution guards") {
  SECTION("explicit dt above the stability limit is rejected") {
    const auto w = closed_form_profile(make_kdv(1.0), 1.0);
    const auto f = sample_wave(w, -40.0, 0.05, 1600, 0.0, BoundaryKind::periodic);
    REQUIRE_THROWS_WITH(evolve(make_kdv(1.0), f, 0.1, 1.0),
                        ContainsSubstring("CFL violation"));
  }
  SECTION("a run blowing up is aborted with diagnostics") {
    Field1D f;
    f.u.assign(64, -1.0);
    f.dx = 0.1;
    f.bc = BoundaryKind::clamped;
    REQUIRE_THROWS_WITH(evolve(make_fisher_kpp(1.0, 6.0), f, 0.0, 10.0),
                        ContainsSubstring("unstable"));
  }
  SECTION("boundary kinds are matched to models") {
    Field1D f;
    f.u.assign(64, 0.0);
    f.dx = 0.1;
    f.bc = BoundaryKind::clamped;
    REQUIRE_THROWS_AS(evolve(make_kdv(1.0), f, 0.0, 1.0), validation_error);
  }
}

TEST_CASE("speed measurement guards") {
  const auto w = closed_form_profile(make_kdv(1.0), 1.0);
  const auto f = sample_wave(w, -40.0, 0.05, 1600, 0.0, BoundaryKind::periodic);
  SECTION("needs at least 3 snapshots") {
    REQUIRE_THROWS_AS(measure_speed({f, f}, w), validation_error);
  }
  SECTION("flat fields are not trackable") {
    Field1D flat = f;
    for (auto& u : flat.u) u = 0.0;
    REQUIRE_THROWS_WITH(measure_speed({flat, flat, flat}, w),
                        ContainsSubstring("not trackable"));
  }
  SECTION("a static feature is not trackable") {
    REQUIRE_THROWS_WITH(measure_speed({f, f, f}, w),
                        ContainsSubstring("not trackable"));
  }
}
