#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "solact/reduction.hpp"

using namespace solact;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("phase-plane right-hand sides") {
  SECTION("KdV equilibria of f(u) = v u - (A/2) u^2") {
    auto r = tw_ode_rhs(make_kdv(1.0), 1.0, {0.0, 0.0});
    REQUIRE(r == std::pair{0.0, 0.0});
    // second root of the quadratic: u = 2 v / A
    r = tw_ode_rhs(make_kdv(1.0), 1.0, {2.0, 0.0});
    REQUIRE(r == std::pair{0.0, 0.0});
  }
  SECTION("du/dz always equals p") {
    for (const auto& m : {make_kdv(2.0), make_sine_gordon(),
                          make_fisher_kpp(1.0, 6.0), make_burgers(1.0, 0.0, 1.0)}) {
      const double v = admissible_speed(
          m, std::holds_alternative<KdV>(m) || std::holds_alternative<SineGordon>(m)
                 ? std::optional<double>(0.5)
                 : std::nullopt);
      REQUIRE(tw_ode_rhs(m, v, {0.3, -1.7}).first == -1.7);
    }
  }
  SECTION("KPP reduction is consistent with the closed-form front") {
    const auto w = closed_form_profile(make_fisher_kpp(1.0, 6.0));
    const auto [u, du] = eval_profile(w, 0.0);
    const auto [_, dp] = tw_ode_rhs(w.model, w.v, {u, du});
    // oracle: finite-difference second derivative of the closed form
    // (centered difference of the analytic slope keeps roundoff ~1e-10)
    const double h = 1e-6;
    const double fd2 =
        (eval_profile(w, h).second - eval_profile(w, -h).second) / (2.0 * h);
    REQUIRE_THAT(dp, WithinAbs(fd2, 1e-9));
  }
  SECTION("sine-Gordon at |v| = 1 is singular") {
    REQUIRE_THROWS_WITH(tw_ode_rhs(make_sine_gordon(), 1.0, {1.0, 0.0}),
                        ContainsSubstring("singular reduction"));
  }
}

TEST_CASE("Hamiltonians") {
  const auto kdv = make_kdv(1.0);
  REQUIRE(hamiltonian(kdv, 1.0, {0.0, 0.0}) == 0.0);
  // the soliton crest (3v/A, 0) lies on the zero-energy separatrix:
  // H = (-v 9 + A 27/3) / 2 = 0
  REQUIRE_THAT(hamiltonian(kdv, 1.0, {3.0, 0.0}), WithinAbs(0.0, 1e-15));

  // sine-Gordon: H = p^2/2 - cos(u)/(v^2 - 1); saddle value is gamma^2
  const double g2 = 1.0 / (1.0 - 0.25);
  REQUIRE_THAT(hamiltonian(make_sine_gordon(), 0.5, {0.0, 0.0}),
               WithinRel(g2, 1e-14));

  REQUIRE_THROWS_WITH(hamiltonian(make_burgers(1.0, 0.0, 1.0), 0.5, {0.5, 0.1}),
                      ContainsSubstring("not Hamiltonian"));
  REQUIRE_THROWS_WITH(hamiltonian(make_fisher_kpp(1.0, 6.0), 5.0, {0.5, 0.1}),
                      ContainsSubstring("not Hamiltonian"));
}

TEST_CASE("equilibria enumeration and classification") {
  SECTION("KdV: saddle at the origin, center at 2v/A") {
    const auto eqs = equilibria(make_kdv(1.0), 1.0, -1.0, 4.0);
    REQUIRE(eqs.size() == 2);
    REQUIRE(eqs[0].point.u == 0.0);
    REQUIRE(eqs[0].kind == EquilibriumKind::saddle);
    // analytic Jacobian [[0,1],[v - A u, 0]] gives eigenvalues +-sqrt(v)
    REQUIRE_THAT(eqs[0].eigenvalues[0].real(), WithinAbs(-1.0, 1e-14));
    REQUIRE_THAT(eqs[0].eigenvalues[1].real(), WithinAbs(1.0, 1e-14));
    REQUIRE(eqs[1].point.u == 2.0);
    REQUIRE(eqs[1].kind == EquilibriumKind::center);
    REQUIRE_THAT(eqs[1].eigenvalues[1].imag(), WithinAbs(1.0, 1e-14));
  }
  SECTION("sine-Gordon at v = 0: saddles at 0 and 2pi, center at pi") {
    const auto eqs = equilibria(make_sine_gordon(), 0.0, -1.0, 7.0);
    REQUIRE(eqs.size() == 3);
    REQUIRE(eqs[0].kind == EquilibriumKind::saddle);
    REQUIRE(eqs[1].kind == EquilibriumKind::center);
    REQUIRE(eqs[2].kind == EquilibriumKind::saddle);
    REQUIRE_THAT(eqs[1].point.u, WithinRel(pi, 1e-15));
    REQUIRE_THAT(eqs[2].point.u, WithinRel(2.0 * pi, 1e-15));
  }
  SECTION("KPP at v = 5: stable node at 0, saddle at 1") {
    const auto eqs = equilibria(make_fisher_kpp(1.0, 6.0), 5.0, -0.5, 1.5);
    REQUIRE(eqs.size() == 2);
    REQUIRE(eqs[0].point.u == 0.0);
    REQUIRE(eqs[0].kind == EquilibriumKind::sink);
    // analytic eigenvalues of [[0,1],[-k(1-2u)/D, -v/D]]: -2, -3 at u=0
    REQUIRE_THAT(eqs[0].eigenvalues[0].real(), WithinAbs(-3.0, 1e-12));
    REQUIRE_THAT(eqs[0].eigenvalues[1].real(), WithinAbs(-2.0, 1e-12));
    REQUIRE(eqs[1].point.u == 1.0);
    REQUIRE(eqs[1].kind == EquilibriumKind::saddle);
    REQUIRE_THAT(eqs[1].eigenvalues[0].real(), WithinAbs(-6.0, 1e-12));
    REQUIRE_THAT(eqs[1].eigenvalues[1].real(), WithinAbs(1.0, 1e-12));
  }
  SECTION("Burgers: degenerate rest states at u1 and u2") {
    const auto eqs = equilibria(make_burgers(1.0, 0.0, 1.0), 0.5, -1.0, 2.0);
    REQUIRE(eqs.size() == 2);
    REQUIRE(eqs[0].point.u == 0.0);
    REQUIRE(eqs[0].kind == EquilibriumKind::sink);
    REQUIRE(eqs[1].point.u == 1.0);
    REQUIRE(eqs[1].kind == EquilibriumKind::source);
  }
  SECTION("vector field vanishes at every reported equilibrium") {
    const auto check = [](const ModelSpec& m, double v) {
      for (const auto& eq : equilibria(m, v, -10.0, 10.0)) {
        const auto [du, dp] = tw_ode_rhs(m, v, eq.point);
        REQUIRE_THAT(du, WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(dp, WithinAbs(0.0, 1e-12));
      }
    };
    check(make_kdv(1.0), 1.0);
    check(make_kdv(-2.0), 0.5);
    check(make_sine_gordon(), 0.6);
    check(make_fisher_kpp(1.0, 6.0), 5.0);
    check(make_burgers(1.0, 0.0, 2.0), 1.0);
  }
  SECTION("window filtering") {
    REQUIRE(equilibria(make_kdv(1.0), 1.0, 0.5, 1.5).empty());
    REQUIRE(equilibria(make_sine_gordon(), 0.0, 0.5, 3.5).size() == 1);
  }
}

TEST_CASE("orbit integration") {
  SECTION("seed on the unstable eigenvector rises to the soliton crest") {
    const double d = 1e-8 / std::sqrt(2.0);
    IntegrateOptions opts;
    opts.sample_dz = 0.001;
    const auto orbit =
        integrate_orbit(make_kdv(1.0), 1.0, {d, d}, 0.0, 45.0, opts);
    double umax = 0.0;
    for (const auto& s : orbit.pts) umax = std::max(umax, s.u);
    REQUIRE_THAT(umax, WithinAbs(3.0, 1e-4));
  }
  SECTION("center equilibrium is a fixed point") {
    const auto orbit =
        integrate_orbit(make_kdv(1.0), 1.0, {2.0, 0.0}, 0.0, 40.0);
    for (const auto& s : orbit.pts) {
      REQUIRE_THAT(s.u, WithinAbs(2.0, 1e-10));
      REQUIRE_THAT(s.p, WithinAbs(0.0, 1e-10));
    }
  }
  SECTION("energy is conserved to 1e-8 over span 100") {
    struct Case {
      ModelSpec m;
      double v;
      PhasePoint start;
    };
    const Case cases[] = {
        {make_kdv(1.0), 1.0, {1.0, 0.0}},
        {make_kdv(2.0), 0.5, {0.4, 0.1}},
        {make_sine_gordon(), 0.5, {2.0, 0.0}},
        {make_sine_gordon(), 0.0, {pi - 1.0, 0.3}},
    };
    for (const auto& c : cases) {
      const auto orbit = integrate_orbit(c.m, c.v, c.start, 0.0, 100.0);
      REQUIRE(orbit.energy.has_value());
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        const double h = hamiltonian(c.m, c.v, orbit.pts[i]);
        REQUIRE_THAT(h, WithinAbs(*orbit.energy, 1e-8));
      }
    }
  }
  SECTION("reversibility: forward then backward returns to the start") {
    const auto fwd =
        integrate_orbit(make_kdv(1.0), 1.0, {1.0, 0.0}, 0.0, 20.0);
    const auto end = fwd.pts.back();
    const auto bwd = integrate_orbit(make_kdv(1.0), 1.0, end, 20.0, 0.0);
    // backward orbits are reported with z increasing: front() is z = 0
    REQUIRE_THAT(bwd.pts.front().u, WithinAbs(1.0, 1e-8));
    REQUIRE_THAT(bwd.pts.front().p, WithinAbs(0.0, 1e-8));

    const auto sg_fwd =
        integrate_orbit(make_sine_gordon(), 0.5, {2.0, 0.0}, 0.0, 20.0);
    const auto sg_bwd = integrate_orbit(make_sine_gordon(), 0.5,
                                        sg_fwd.pts.back(), 20.0, 0.0);
    REQUIRE_THAT(sg_bwd.pts.front().u, WithinAbs(2.0, 1e-8));
    REQUIRE_THAT(sg_bwd.pts.front().p, WithinAbs(0.0, 1e-8));
  }
  SECTION("blow-up truncates the orbit and flags escape") {
    const auto orbit =
        integrate_orbit(make_kdv(1.0), 1.0, {-0.5, 0.0}, 0.0, 100.0);
    REQUIRE(orbit.escaped);
    REQUIRE(orbit.z.back() < 100.0);
  }
}

TEST_CASE("closed-form profiles solve their reductions") {
  // (u, u') sampled from the models module must satisfy dp/dz = u''
  // of the closed form, all four models.
  const auto waves = {
      closed_form_profile(make_kdv(1.0), 1.0),
      closed_form_profile(make_sine_gordon(), 0.5),
      closed_form_profile(make_fisher_kpp(1.0, 6.0)),
      closed_form_profile(make_burgers(1.0, 0.0, 1.0)),
  };
  const double h = 1e-4;
  for (const auto& w : waves) {
    for (double z = -10.0; z <= 10.0; z += 0.5) {
      const auto [u, du] = eval_profile(w, z);
      const auto [_, dp] = tw_ode_rhs(w.model, w.v, {u, du});
      const double fd2 =
          (eval_profile(w, z + h).first - 2.0 * u + eval_profile(w, z - h).first) /
          (h * h);
      REQUIRE_THAT(dp, WithinAbs(fd2, 1e-6));
    }
  }
}

TEST_CASE("separatrix tracing") {
  SECTION("KdV homoclinic loop reaches the crest 3v/A") {
    for (double v : {0.5, 1.0, 2.0}) {
      const auto orbit = trace_separatrix(make_kdv(1.0), v);
      REQUIRE(orbit.closed);
      double umax = 0.0;
      for (const auto& s : orbit.pts) umax = std::max(umax, s.u);
      REQUIRE_THAT(umax, WithinRel(3.0 * v, 1e-3));
    }
  }
  SECTION("negative A opens the loop toward negative u") {
    const auto orbit = trace_separatrix(make_kdv(-1.0), 1.0);
    double umin = 0.0;
    for (const auto& s : orbit.pts) umin = std::min(umin, s.u);
    REQUIRE_THAT(umin, WithinRel(-3.0, 1e-3));
  }
  SECTION("KdV separatrix stays on the saddle energy level") {
    const auto orbit = trace_separatrix(make_kdv(1.0), 1.0);
    REQUIRE(orbit.energy.has_value());
    const double h_saddle = hamiltonian(make_kdv(1.0), 1.0, {0.0, 0.0});
    for (const auto& s : orbit.pts)
      REQUIRE_THAT(hamiltonian(make_kdv(1.0), 1.0, s),
                   WithinAbs(h_saddle, 1e-6));
  }
  SECTION("sine-Gordon halfloop peaks at p = 2/sqrt(1 - v^2)") {
    for (double v : {0.0, 0.5}) {
      const auto orbit = trace_separatrix(make_sine_gordon(), v);
      REQUIRE_FALSE(orbit.closed);
      double pmax = 0.0;
      for (const auto& s : orbit.pts) pmax = std::max(pmax, s.p);
      REQUIRE_THAT(pmax, WithinRel(2.0 / std::sqrt(1.0 - v * v), 1e-3));
      // heteroclinic endpoints 0 -> 2 pi
      REQUIRE_THAT(orbit.pts.front().u, WithinAbs(0.0, 1e-4));
      REQUIRE_THAT(orbit.pts.back().u, WithinAbs(2.0 * pi, 1e-4));
      const double h_saddle = hamiltonian(make_sine_gordon(), v, {0.0, 0.0});
      for (const auto& s : orbit.pts)
        REQUIRE_THAT(hamiltonian(make_sine_gordon(), v, s),
                     WithinAbs(h_saddle, 1e-6));
    }
  }
  SECTION("antikink halfloop descends from 2 pi") {
    const auto orbit =
        trace_separatrix(make_sine_gordon(), 0.0, Branch::kink_down);
    REQUIRE_THAT(orbit.pts.front().u, WithinAbs(2.0 * pi, 1e-4));
    REQUIRE_THAT(orbit.pts.back().u, WithinAbs(0.0, 1e-4));
    for (const auto& s : orbit.pts) REQUIRE(s.p <= 1e-12);
  }
  SECTION("KPP halfloop runs from (1,0) to (0,0) inside 0 <= u <= 1") {
    const auto orbit = trace_separatrix(make_fisher_kpp(1.0, 6.0), 5.0);
    REQUIRE_THAT(orbit.pts.front().u, WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(orbit.pts.back().u, WithinAbs(0.0, 1e-5));
    for (const auto& s : orbit.pts) {
      REQUIRE(s.u >= -1e-8);
      REQUIRE(s.u <= 1.0 + 1e-8);
    }
  }
  SECTION("rising KPP front is the mirror halfloop, traversed upward") {
    const auto orbit = trace_separatrix(make_fisher_kpp(1.0, 6.0), -5.0,
                                        Branch::front_rising);
    REQUIRE(orbit.z.front() == 0.0);
    REQUIRE_THAT(orbit.pts.front().u, WithinAbs(0.0, 1e-5));
    REQUIRE_THAT(orbit.pts.back().u, WithinAbs(1.0, 1e-6));
    for (std::size_t i = 1; i < orbit.size(); ++i)
      REQUIRE(orbit.z[i] > orbit.z[i - 1]);
  }
  SECTION("an inadmissible speed is rejected up front") {
    REQUIRE_THROWS_AS(trace_separatrix(make_burgers(1.0, 0.0, 1.0), 0.0),
                      validation_error);
    REQUIRE_THROWS_AS(integrate_orbit(make_kdv(1.0), -1.0, {1.0, 0.0}, 0.0, 10.0),
                      validation_error);
  }
  SECTION("Burgers front connects the rest states") {
    const auto orbit = trace_separatrix(make_burgers(1.0, 0.0, 1.0), 0.5);
    REQUIRE_THAT(orbit.pts.front().u, WithinAbs(1.0, 1e-6));
    REQUIRE_THAT(orbit.pts.back().u, WithinAbs(0.0, 1e-5));
    for (const auto& s : orbit.pts) REQUIRE(s.p <= 1e-12);
  }
  SECTION("sampled densely enough for action quadrature") {
    REQUIRE(trace_separatrix(make_kdv(1.0), 1.0).size() >= 10'000);
    REQUIRE(trace_separatrix(make_sine_gordon(), 0.0).size() >= 10'000);
  }
}

TEST_CASE("closed orbits around the KdV center") {
  const auto m = make_kdv(1.0);
  SECTION("orbit closes on itself") {
    const auto orbit = integrate_closed_orbit(m, 1.0, 2.5);
    REQUIRE(orbit.closed);
    const auto& a = orbit.pts.front();
    const auto& b = orbit.pts.back();
    REQUIRE_THAT(std::hypot(b.u - a.u, b.p - a.p), WithinAbs(0.0, 1e-7));
  }
  SECTION("small orbits have the harmonic period 2 pi / sqrt(v)") {
    const auto orbit = integrate_closed_orbit(m, 1.0, 2.0 + 1e-3);
    const double period = orbit.z.back() - orbit.z.front();
    REQUIRE_THAT(period, WithinRel(2.0 * pi, 1e-4));
  }
  SECTION("starting at the center is rejected as degenerate") {
    REQUIRE_THROWS_AS(integrate_closed_orbit(m, 1.0, 2.0), validation_error);
  }
}
