#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace sectorspec {

// Adaptive Gauss-Kronrod (7,15) quadrature on a finite interval.
// Bisects until the embedded-rule error estimate meets rel_tol/abs_tol.
namespace gk {

// 15-point Kronrod abscissae (non-negative half) and weights; the embedded
// 7-point Gauss rule uses the odd-indexed abscissae.
inline constexpr double xk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Estimate {
  double value;
  double error;
};

template <class F>
Estimate rule(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = wk[7] * fc, resg = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * xk[i];
    const double fv = f(c - dx) + f(c + dx);
    resk += wk[i] * fv;
    if (i % 2 == 1) resg += wg[i / 2] * fv;
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

}  // namespace gk

template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-14, int max_depth = 48) {
  struct Rec {
    const F& f;
    double rel_tol, abs_tol;
    double eval(double a, double b, double whole, int depth) const {
      const double m = 0.5 * (a + b);
      auto left = gk::rule(f, a, m);
      auto right = gk::rule(f, m, b);
      const double sum = left.value + right.value;
      const double err = left.error + right.error;
      if (depth <= 0) return sum;
      if (err <= abs_tol + rel_tol * std::abs(sum)) return sum;
      return eval(a, m, left.value, depth - 1) + eval(m, b, right.value, depth - 1);
    }
  };
  if (!(b >= a)) throw std::invalid_argument("integrate: bad interval");
  if (a == b) return 0.0;
  auto first = gk::rule(f, a, b);
  if (first.error <= abs_tol + rel_tol * std::abs(first.value)) return first.value;
  return Rec{f, rel_tol, abs_tol}.eval(a, b, first.value, max_depth);
}

}  // namespace sectorspec
