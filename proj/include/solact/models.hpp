#pragma once

// Solitary traveling-wave models.
//
// Four nonlinear wave equations, each with a closed-form traveling-wave
// solution u(x,t) = u(z), z = x - v t:
//
//   KdV        u_t + A u u_x + u_xxx = 0          u = (3v/A) sech^2(sqrt(v) z / 2)
//   sine-Gordon u_tt + sin u = u_xx               u = 4 atan(exp(z / sqrt(1 - v^2)))
//   Fisher-KPP u_t = D u_xx + k u (1 - u)         u = (1 + exp(a z))^-2,
//                                                   a = +-sqrt(k / (6 D)), v = 5 a D
//   Burgers    u_t + u u_x = D u_xx               u = u1 + (u2 - u1) /
//                                                   (1 + exp((u2 - u1) z / (2 D))),
//                                                   v = (u1 + u2) / 2
//
// KdV and sine-Gordon leave the speed free (v > 0, v^2 < 1 respectively);
// Fisher-KPP and Burgers force it from the equation parameters. All profile
// evaluation goes through numerically stable half-range forms so the tails
// saturate to the boundary limits instead of overflowing.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "solact/errors.hpp"

namespace solact {

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Model parameter sets

/// u_t + A u u_x + u_xxx = 0
struct KdV {
  double A = 1.0;  ///< nonlinearity coefficient, A != 0
};

/// u_tt + sin u = u_xx
struct SineGordon {};

/// u_t = D u_xx + k u (1 - u)
struct FisherKPP {
  double D = 1.0;  ///< diffusion coefficient, > 0
  double k = 1.0;  ///< growth rate, > 0
};

/// u_t + u u_x = D u_xx
struct Burgers {
  double D = 1.0;   ///< viscosity, > 0
  double u1 = 0.0;  ///< right state (z -> +inf)
  double u2 = 1.0;  ///< left state (z -> -inf), u1 < u2
};

using ModelSpec = std::variant<KdV, SineGordon, FisherKPP, Burgers>;

inline void validate(const ModelSpec& m) {
  if (const auto* kdv = std::get_if<KdV>(&m)) {
    if (!std::isfinite(kdv->A) || kdv->A == 0.0)
      throw validation_error("A must be nonzero");
  } else if (const auto* kpp = std::get_if<FisherKPP>(&m)) {
    if (!std::isfinite(kpp->D) || kpp->D <= 0.0)
      throw validation_error("D must be > 0");
    if (!std::isfinite(kpp->k) || kpp->k <= 0.0)
      throw validation_error("k must be > 0");
  } else if (const auto* bu = std::get_if<Burgers>(&m)) {
    if (!std::isfinite(bu->D) || bu->D <= 0.0)
      throw validation_error("D must be > 0");
    if (!std::isfinite(bu->u1) || !std::isfinite(bu->u2) || bu->u1 >= bu->u2)
      throw validation_error("u1 must be < u2");
  }
}

inline ModelSpec make_kdv(double A) {
  ModelSpec m = KdV{A};
  validate(m);
  return m;
}

inline ModelSpec make_sine_gordon() { return SineGordon{}; }

inline ModelSpec make_fisher_kpp(double D, double k) {
  ModelSpec m = FisherKPP{D, k};
  validate(m);
  return m;
}

inline ModelSpec make_burgers(double D, double u1, double u2) {
  ModelSpec m = Burgers{D, u1, u2};
  validate(m);
  return m;
}

inline std::string model_name(const ModelSpec& m) {
  if (std::holds_alternative<KdV>(m)) return "kdv";
  if (std::holds_alternative<SineGordon>(m)) return "sg";
  if (std::holds_alternative<FisherKPP>(m)) return "kpp";
  return "burgers";
}

// ---------------------------------------------------------------------------
// Admissible speeds

/// Kink decay constant 1/sqrt(1 - v^2); throws when v^2 >= 1.
inline double sg_gamma(double v) {
  if (v * v >= 1.0)
    throw validation_error("singular reduction: sine-Gordon requires v^2 < 1");
  return 1.0 / std::sqrt(1.0 - v * v);
}

/// Fisher-KPP front steepness a = v / (5 D); |a| = sqrt(k / (6 D)).
inline double kpp_alpha(const FisherKPP& m, double v) { return v / (5.0 * m.D); }

/// Magnitude of the Fisher-KPP forced speed, sqrt(25 k D / 6).
inline double kpp_forced_speed(const FisherKPP& m) {
  return std::sqrt(25.0 * m.k * m.D / 6.0);
}

/// Burgers forced speed (u1 + u2) / 2.
inline double burgers_forced_speed(const Burgers& m) {
  return 0.5 * (m.u1 + m.u2);
}

namespace detail {

// Explicit speeds for speed-forced models must agree with the forced value;
// matches within this relative tolerance are snapped to it.
inline constexpr double forced_speed_rtol = 1e-9;

inline bool matches(double requested, double forced) {
  const double scale = std::max(std::abs(forced), 1.0);
  return std::abs(requested - forced) <= forced_speed_rtol * scale;
}

}  // namespace detail

/// Resolves the wave speed for a model. KdV and sine-Gordon require an
/// explicit admissible speed. Fisher-KPP and Burgers force the speed from
/// their parameters; an explicit request must match the forced value
/// (either sign for Fisher-KPP) and std::nullopt ("auto") picks the
/// positive Fisher-KPP branch.
inline double admissible_speed(const ModelSpec& m,
                               std::optional<double> requested) {
  validate(m);
  if (requested && !std::isfinite(*requested))
    throw validation_error("speed must be finite");
  if (const auto* kdv = std::get_if<KdV>(&m)) {
    (void)kdv;
    if (!requested)
      throw validation_error("speed must be specified for KdV");
    if (*requested <= 0.0)
      throw validation_error("profile not real-valued for v <= 0");
    return *requested;
  }
  if (std::holds_alternative<SineGordon>(m)) {
    if (!requested)
      throw validation_error("speed must be specified for sine-Gordon");
    sg_gamma(*requested);  // throws "singular reduction" when v^2 >= 1
    return *requested;
  }
  if (const auto* kpp = std::get_if<FisherKPP>(&m)) {
    const double forced = kpp_forced_speed(*kpp);
    if (!requested) return forced;
    if (detail::matches(*requested, forced)) return forced;
    if (detail::matches(*requested, -forced)) return -forced;
    throw validation_error(
        "speed is determined by parameters: v = +-sqrt(25 k D / 6)");
  }
  const auto& bu = std::get<Burgers>(m);
  const double forced = burgers_forced_speed(bu);
  if (!requested) return forced;
  if (detail::matches(*requested, forced)) return forced;
  throw validation_error(
      "speed is determined by parameters: v = (u1 + u2) / 2");
}

// ---------------------------------------------------------------------------
// Traveling waves

/// Which solitary wave of the model's family a TravelingWave refers to.
enum class Branch {
  soliton,        // KdV pulse, u -> 0 on both sides
  kink_up,        // sine-Gordon kink, u: 0 -> 2 pi
  kink_down,      // sine-Gordon antikink, u: 2 pi -> 0
  front_falling,  // Fisher-KPP with a > 0 (v > 0), u: 1 -> 0
  front_rising,   // Fisher-KPP with a < 0 (v < 0), u: 0 -> 1
  shock,          // Burgers viscous front, u: u2 -> u1
};

inline std::string branch_name(Branch b) {
  switch (b) {
    case Branch::soliton: return "soliton";
    case Branch::kink_up: return "kink-up";
    case Branch::kink_down: return "kink-down";
    case Branch::front_falling: return "falling";
    case Branch::front_rising: return "rising";
    case Branch::shock: return "shock";
  }
  return "?";
}

/// A closed-form profile u(z - z0) traveling at speed v.
struct TravelingWave {
  ModelSpec model;
  double v = 0.0;
  double z0 = 0.0;
  Branch branch = Branch::soliton;
};

/// Profile value and z-derivatives at one point.
struct ProfileJet {
  double u = 0.0;
  double du = 0.0;
  double d2u = 0.0;
  double d3u = 0.0;
};

namespace detail {

inline double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

// KdV: u = (3v/A) sech^2(theta), theta = sqrt(v) z / 2.
inline ProfileJet kdv_jet(const KdV& m, double v, double zeta) {
  const double rv = std::sqrt(v);
  const double th = 0.5 * rv * zeta;
  const double S = sech(th);
  const double s = S * S;
  const double t = std::tanh(th);
  const double c = 3.0 * v / m.A;
  ProfileJet j;
  j.u = c * s;
  j.du = -c * rv * s * t;
  j.d2u = -0.5 * c * v * s * (1.0 - 3.0 * t * t);
  j.d3u = c * v * rv * s * t * (2.0 - 3.0 * t * t);
  return j;
}

// sine-Gordon kink: u = 4 atan(exp(w)), w = gamma z. For w > 0 the
// complementary form 2 pi - 4 atan(exp(-w)) avoids exp overflow.
inline ProfileJet sg_kink_jet(double gamma, double zeta) {
  const double w = gamma * zeta;
  const double S = sech(w);
  const double T = std::tanh(w);
  ProfileJet j;
  j.u = (w <= 0.0) ? 4.0 * std::atan(std::exp(w))
                   : 2.0 * pi - 4.0 * std::atan(std::exp(-w));
  j.du = 2.0 * gamma * S;
  j.d2u = -2.0 * gamma * gamma * S * T;
  j.d3u = -2.0 * gamma * gamma * gamma * S * (2.0 * S * S - 1.0);
  return j;
}

// Fisher-KPP front: u = (1 + E)^-2, E = exp(a z). The w > 0 side is
// rewritten in F = exp(-w) so both tails stay finite.
inline ProfileJet kpp_jet(double a, double zeta) {
  const double w = a * zeta;
  const double a2 = a * a;
  ProfileJet j;
  if (w <= 0.0) {
    const double E = std::exp(w);
    const double d = 1.0 + E;
    const double d2 = d * d;
    const double d4 = d2 * d2;
    j.u = 1.0 / d2;
    j.du = -2.0 * a * E / (d2 * d);
    j.d2u = -2.0 * a2 * E * (1.0 - 2.0 * E) / d4;
    j.d3u = -2.0 * a2 * a * E * (1.0 - 7.0 * E + 4.0 * E * E) / (d4 * d);
  } else {
    const double F = std::exp(-w);
    const double F2 = F * F;
    const double d = 1.0 + F;
    const double d2 = d * d;
    const double d4 = d2 * d2;
    j.u = F2 / d2;
    j.du = -2.0 * a * F2 / (d2 * d);
    j.d2u = -2.0 * a2 * F2 * (F - 2.0) / d4;
    j.d3u = -2.0 * a2 * a * F2 * (4.0 - 7.0 * F + F2) / (d4 * d);
  }
  return j;
}

// Logistic 1 / (1 + exp(w)) without overflow.
inline double sigma_neg(double w) {
  if (w > 0.0) {
    const double F = std::exp(-w);
    return F / (1.0 + F);
  }
  const double E = std::exp(w);
  return 1.0 / (1.0 + E);
}

// Burgers shock: u = u1 + (u2 - u1) sigma, sigma = 1 / (1 + exp(b z)).
inline ProfileJet burgers_jet(const Burgers& m, double zeta) {
  const double du21 = m.u2 - m.u1;
  const double b = 0.5 * du21 / m.D;
  const double s = sigma_neg(b * zeta);
  const double g = s * (1.0 - s);
  ProfileJet j;
  j.u = m.u1 + du21 * s;
  j.du = -du21 * b * g;
  j.d2u = -du21 * b * b * g * (2.0 * s - 1.0);
  j.d3u = -du21 * b * b * b * g * (6.0 * s * s - 6.0 * s + 1.0);
  return j;
}

}  // namespace detail

inline Branch default_branch(const ModelSpec& m, double v) {
  if (std::holds_alternative<KdV>(m)) return Branch::soliton;
  if (std::holds_alternative<SineGordon>(m)) return Branch::kink_up;
  if (std::holds_alternative<FisherKPP>(m))
    return v >= 0.0 ? Branch::front_falling : Branch::front_rising;
  return Branch::shock;
}

inline void validate_branch(const ModelSpec& m, double v, Branch b) {
  bool ok = false;
  if (std::holds_alternative<KdV>(m)) {
    ok = b == Branch::soliton;
  } else if (std::holds_alternative<SineGordon>(m)) {
    ok = b == Branch::kink_up || b == Branch::kink_down;
  } else if (std::holds_alternative<FisherKPP>(m)) {
    ok = (b == Branch::front_falling && v > 0.0) ||
         (b == Branch::front_rising && v < 0.0);
    if ((b == Branch::front_falling || b == Branch::front_rising) && !ok)
      throw validation_error("branch conflicts with the sign of the speed");
  } else {
    ok = b == Branch::shock;
  }
  if (!ok)
    throw validation_error("branch '" + branch_name(b) +
                           "' is not valid for model '" + model_name(m) + "'");
}

/// Builds the closed-form solitary wave for (model, v, z0, branch).
/// With v = nullopt the speed is resolved by admissible_speed; with
/// branch = nullopt the model default is used. For Fisher-KPP the
/// front_rising branch selects the negative forced speed.
inline TravelingWave closed_form_profile(const ModelSpec& m,
                                         std::optional<double> v = {},
                                         double z0 = 0.0,
                                         std::optional<Branch> branch = {}) {
  validate(m);
  if (!std::isfinite(z0)) throw validation_error("z0 must be finite");
  if (std::holds_alternative<FisherKPP>(m) && !v && branch &&
      *branch == Branch::front_rising) {
    v = -admissible_speed(m, std::nullopt);
  }
  TravelingWave w;
  w.model = m;
  w.v = admissible_speed(m, v);
  w.z0 = z0;
  w.branch = branch ? *branch : default_branch(m, w.v);
  validate_branch(m, w.v, w.branch);
  return w;
}

/// Profile value and first three z-derivatives at z (all models fill d3u).
inline ProfileJet eval_profile_jet(const TravelingWave& w, double z) {
  if (!std::isfinite(z)) throw validation_error("z must be finite");
  const double zeta = z - w.z0;
  if (const auto* kdv = std::get_if<KdV>(&w.model))
    return detail::kdv_jet(*kdv, w.v, zeta);
  if (std::holds_alternative<SineGordon>(w.model)) {
    const double gamma = sg_gamma(w.v);
    if (w.branch == Branch::kink_up) return detail::sg_kink_jet(gamma, zeta);
    ProfileJet j = detail::sg_kink_jet(gamma, -zeta);  // mirror of the kink
    j.du = -j.du;
    j.d3u = -j.d3u;
    return j;
  }
  if (const auto* kpp = std::get_if<FisherKPP>(&w.model))
    return detail::kpp_jet(kpp_alpha(*kpp, w.v), zeta);
  return detail::burgers_jet(std::get<Burgers>(w.model), zeta);
}

/// (u, du/dz) at z.
inline std::pair<double, double> eval_profile(const TravelingWave& w,
                                              double z) {
  const ProfileJet j = eval_profile_jet(w, z);
  return {j.u, j.du};
}

/// Asymptotic values (u at z -> -inf, u at z -> +inf).
inline std::pair<double, double> boundary_limits(const TravelingWave& w) {
  switch (w.branch) {
    case Branch::soliton: return {0.0, 0.0};
    case Branch::kink_up: return {0.0, 2.0 * pi};
    case Branch::kink_down: return {2.0 * pi, 0.0};
    case Branch::front_falling: return {1.0, 0.0};
    case Branch::front_rising: return {0.0, 1.0};
    case Branch::shock: {
      const auto& bu = std::get<Burgers>(w.model);
      return {bu.u2, bu.u1};
    }
  }
  return {0.0, 0.0};
}

/// Slowest exponential decay rate of the profile tails; its reciprocal is
/// the decay length used for domain truncation.
inline double decay_rate(const TravelingWave& w) {
  if (std::holds_alternative<KdV>(w.model)) return std::sqrt(w.v);
  if (std::holds_alternative<SineGordon>(w.model)) return sg_gamma(w.v);
  if (const auto* kpp = std::get_if<FisherKPP>(&w.model))
    return std::abs(kpp_alpha(*kpp, w.v));
  const auto& bu = std::get<Burgers>(w.model);
  return 0.5 * (bu.u2 - bu.u1) / bu.D;
}

/// Amplitude range of the profile (for tolerance scaling).
inline double amplitude_scale(const TravelingWave& w) {
  if (const auto* kdv = std::get_if<KdV>(&w.model))
    return std::abs(3.0 * w.v / kdv->A);
  if (std::holds_alternative<SineGordon>(w.model)) return 2.0 * pi;
  if (std::holds_alternative<FisherKPP>(w.model)) return 1.0;
  const auto& bu = std::get<Burgers>(w.model);
  return bu.u2 - bu.u1;
}

/// Half-width W (relative to z0) beyond which both tails sit within
/// `tol` of their boundary limits.
inline double tail_extent(const TravelingWave& w, double tol) {
  const auto [ul, ur] = boundary_limits(w);
  double half = 1.0 / decay_rate(w);
  for (int i = 0; i < 400; ++i) {
    const double left = std::abs(eval_profile(w, w.z0 - half).first - ul);
    const double right = std::abs(eval_profile(w, w.z0 + half).first - ur);
    if (left <= tol && right <= tol) return half;
    half *= 1.5;
  }
  throw numeric_error("tail_extent did not converge");
}

}  // namespace solact
