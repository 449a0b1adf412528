#pragma once

// Adaptive Gauss-Kronrod (G7, K15) quadrature on a finite interval.
//
// Each panel is evaluated with the 15-point Kronrod rule; |K15 - G7|
// serves as the panel error estimate. Panels whose error exceeds their
// share of the tolerance are bisected.

#include <cmath>
#include <cstddef>
#include <vector>

#include "solact/errors.hpp"

namespace solact {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t nodes = 0;       ///< integrand evaluations
  std::size_t panels = 0;
};

namespace detail {

// K15 abscissae (positive half) and weights; G7 uses the odd-indexed nodes.
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod,
                 double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * gk_x[i];
    const double fv = (i == 7) ? f(c) : f(c - dx) + f(c + dx);
    resk += gk_wk[i] * fv;
    if (i % 2 == 1) resg += gk_wg[i / 2] * fv;  // G7 lives on the odd nodes
  }
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

}  // namespace detail

/// Integrates f over [a, b] to tolerance max(abs_tol, rel_tol * |I|).
/// Throws numeric_error when the subdivision budget is exhausted.
template <class F>
inline QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                           double abs_tol, double rel_tol,
                                           std::size_t max_panels = 4096) {
  struct Panel {
    double a, b, value, error;
  };
  QuadratureResult out;
  double v0, e0;
  detail::gk15(f, a, b, v0, e0);
  out.nodes = 15;
  std::vector<Panel> panels{{a, b, v0, e0}};

  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= tol) {
      out.value = total;
      out.abs_error = err;
      out.panels = panels.size();
      return out;
    }
    if (panels.size() >= max_panels)
      throw numeric_error("quadrature did not converge within the panel budget");
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    Panel left{p.a, mid, 0.0, 0.0}, right{mid, p.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.error);
    detail::gk15(f, right.a, right.b, right.value, right.error);
    out.nodes += 30;
    panels[worst] = left;
    panels.push_back(right);
  }
}

}  // namespace solact
