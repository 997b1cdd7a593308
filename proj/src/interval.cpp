#include "sectorspec/interval.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace sectorspec {

namespace {

// Safeguarded Newton for a monotone increasing f on a bracket [lo, hi].
template <class F, class DF>
double newton_bracketed(const F& f, const DF& df, double lo, double hi,
                        double x0, double tol) {
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < 200; ++it) {
    double fx = f(x);
    if (std::abs(fx) <= tol) return x;
    (fx > 0 ? hi : lo) = x;
    double step = fx / df(x);
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) break;
    x = xn;
  }
  // bisection tail for stubborn cases
  for (int it = 0; it < 200 && std::abs(f(x)) > tol; ++it) {
    x = 0.5 * (lo + hi);
    (f(x) > 0 ? hi : lo) = x;
  }
  return x;
}

// sinh(2m)/(2m) + 1 and friends blow up around m ~ 355; every exported
// quantity only needs ratios, handled by factoring e^{2m} out. The direct
// branch is used below m = 30 where nothing overflows.
constexpr double kScaledBranch = 30.0;

}  // namespace

double solve_m(double x) {
  if (!(x > 0.0)) throw std::domain_error("solve_m: argument must be positive");
  const double tol = 1e-12 * std::max(1.0, x);
  auto f = [x](double m) { return m * std::tanh(m) - x; };
  auto df = [](double m) {
    double t = std::tanh(m);
    double sech2 = 1.0 - t * t;
    return t + m * sech2;
  };
  // m ~ sqrt(x) for small x, m ~ x for large x; both from below-ish.
  double guess = std::max(std::sqrt(x), x);
  double lo = 0.5 * std::min(std::sqrt(x), x);
  double hi = guess + 1.0;
  while (f(hi) < 0) hi *= 2.0;
  while (lo > 0 && f(lo) > 0) lo *= 0.5;
  return newton_bracketed(f, df, lo, hi, guess, tol);
}

double e1_interval(const IntervalProblem& p) {
  if (!(p.L > 0.0)) throw std::domain_error("e1_interval: L must be positive");
  if (!(p.gamma > 0.0)) throw std::domain_error("e1_interval: gamma must be positive");
  const double m = solve_m(p.gamma * p.L);
  return -(m * m) / (p.L * p.L);
}

double e2_interval(const IntervalProblem& p) {
  if (!(p.L > 0.0)) throw std::domain_error("e2_interval: L must be positive");
  const double x = p.gamma * p.L;  // target of the branch equations in y = kL
  const double tol = 1e-13 * std::max(1.0, std::abs(x));
  if (std::abs(x - 1.0) <= 1e-13) return 0.0;
  if (x > 1.0) {
    // y coth y = x, increasing from 1; root exists iff x > 1.
    auto f = [x](double y) { return y / std::tanh(y) - x; };
    auto df = [](double y) {
      double t = std::tanh(y);
      return 1.0 / t - y * (1.0 - t * t) / (t * t);
    };
    double lo = std::max(1e-12, x - 1.0), hi = x + 1.0;
    while (f(lo) > 0) lo *= 0.5;
    double y = newton_bracketed(f, df, lo, hi, x, tol);
    return -(y * y) / (p.L * p.L);
  }
  // y cot y = x on (0, pi), decreasing from 1 to -inf.
  auto f = [x](double y) { return x - y / std::tan(y); };  // increasing in y
  auto df = [](double y) {
    double s = std::sin(y);
    return -1.0 / std::tan(y) + y / (s * s);
  };
  const double pi = 3.14159265358979323846;
  double lo = 1e-8, hi = pi - 1e-12;
  double y = newton_bracketed(f, df, lo, hi, 0.5 * pi, tol);
  return (y * y) / (p.L * p.L);
}

double d_e1_d_gamma(const IntervalProblem& p) {
  if (!(p.L > 0.0)) throw std::domain_error("d_e1_d_gamma: L must be positive");
  if (!(p.gamma > 0.0)) throw std::domain_error("d_e1_d_gamma: gamma must be positive");
  const double m = solve_m(p.gamma * p.L);
  if (m < kScaledBranch) {
    const double S = std::sinh(2 * m) / (2 * m);
    const double ch = std::cosh(m);
    return -2.0 * ch * ch / (p.L * (S + 1.0));
  }
  // 2 cosh^2 m / (S+1) = 2m (1+q)^2 / ((1-q^2) + 4mq), q = e^{-2m}
  const double q = std::exp(-2 * m);
  return -2.0 * m * (1 + q) * (1 + q) / (p.L * ((1 - q * q) + 4 * m * q));
}

double phi_of_gamma(double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("phi_of_gamma: gamma must be positive");
  const double m = solve_m(gamma);
  return (gamma - m * m) / (gamma * gamma);
}

IntervalGroundState interval_ground_state(const IntervalProblem& p) {
  if (!(p.L > 0.0)) throw std::domain_error("interval_ground_state: L must be positive");
  if (!(p.gamma > 0.0)) throw std::domain_error("interval_ground_state: gamma must be positive");
  const double m = solve_m(p.gamma * p.L);
  IntervalGroundState g;
  g.m_value = m;
  g.E1 = -(m * m) / (p.L * p.L);
  if (m < kScaledBranch) {
    const double S = std::sinh(2 * m) / (2 * m);
    g.C = 1.0 / std::sqrt(p.L * (S + 1.0));
  } else {
    // L(S+1) = L e^{2m} ((1-q^2) + 4mq) / (4m); the e^{-m} factor is kept
    // symbolic by the eigenfunction evaluator.
    const double q = std::exp(-2 * m);
    g.C = 2.0 * std::exp(-m) * std::sqrt(m / (p.L * ((1 - q * q) + 4 * m * q)));
  }
  return g;
}

double eigfun_interval(const IntervalProblem& p, double t, bool normalized) {
  if (!(p.L > 0.0)) throw std::domain_error("eigfun_interval: L must be positive");
  if (!(p.gamma > 0.0)) throw std::domain_error("eigfun_interval: gamma must be positive");
  if (std::abs(t) > p.L) throw std::domain_error("eigfun_interval: |t| exceeds L");
  const double m = solve_m(p.gamma * p.L);
  const double s = m * std::abs(t) / p.L;
  if (!normalized) {
    return std::cosh(s);
  }
  if (m < kScaledBranch) {
    const double S = std::sinh(2 * m) / (2 * m);
    return std::cosh(s) / std::sqrt(p.L * (S + 1.0));
  }
  // C cosh(s) = sqrt(m/L) e^{-(m-s)} (1 + e^{-2s}) / sqrt((1-q^2) + 4mq)
  const double q = std::exp(-2 * m);
  return std::sqrt(m / p.L) * std::exp(-(m - s)) * (1 + std::exp(-2 * s)) /
         std::sqrt((1 - q * q) + 4 * m * q);
}

double transverse_energy_F(double x) {
  if (!(x > 0.0)) throw std::domain_error("transverse_energy_F: x must be positive");
  const double m = solve_m(x);
  if (m < kScaledBranch) {
    const double S = std::sinh(2 * m) / (2 * m);
    const double ch = std::cosh(m);
    const double bracket = std::cosh(2 * m) / (2 * m) - std::sinh(2 * m) / (4 * m * m);
    const double c4 = ch * ch * ch * ch;
    const double G = c4 / (m * m) * bracket * bracket / std::pow(S + 1.0, 4);
    const double H = c4 / (m * m) * (S - 1.0) / std::pow(S + 1.0, 3);
    return G + H;
  }
  // exponential-free rewrite, q = e^{-2m}:
  //   G = 16 m^2 (1+q)^4 [ (1+q^2)/(4m) - (1-q^2)/(8m^2) ]^2 / [(1-q^2)+4mq]^4
  //   H = (1+q)^4 [ (1-q^2) - 4mq ] / [(1-q^2)+4mq]^3
  const double q = std::exp(-2 * m);
  const double d = (1 - q * q) + 4 * m * q;
  const double p4 = std::pow(1 + q, 4);
  const double br = (1 + q * q) / (4 * m) - (1 - q * q) / (8 * m * m);
  const double G = 16 * m * m * p4 * br * br / (d * d * d * d);
  const double H = p4 * ((1 - q * q) - 4 * m * q) / (d * d * d);
  return G + H;
}

double transverse_energy_sup() {
  static double sup = 0.0;
  static std::once_flag flag;
  std::call_once(flag, [] {
    double s = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      double x = std::pow(10.0, -6.0 + 12.0 * i / 2000.0);
      s = std::max(s, transverse_energy_F(x));
    }
    sup = s;
  });
  return sup;
}

double k_alpha_bound(double r, double alpha) {
  if (!(r > 0.0)) throw std::domain_error("k_alpha_bound: r must be positive");
  if (!(alpha > 0.0 && alpha < 1.5707963267948966))
    throw std::domain_error("k_alpha_bound: alpha must lie in (0, pi/2)");
  return 2.0 * alpha * alpha * transverse_energy_F(r * alpha);
}

}  // namespace sectorspec
