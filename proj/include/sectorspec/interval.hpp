#pragma once

#include <cstddef>

namespace sectorspec {

// Robin Laplacian -u'' on (-L, L) with -u'(-L) = g u(-L), u'(L) = g u(L).
struct IntervalProblem {
  double L = 1.0;
  double gamma = 1.0;
};

struct IntervalGroundState {
  double m_value;  // positive root of m tanh m = gamma*L
  double E1;       // -(m/L)^2
  double C;        // normalization constant of the ground eigenfunction
};

// Unique positive root of m*tanh(m) = x, x > 0. Residual below 1e-12
// (absolute for x <= 1, relative above).
double solve_m(double gamma_L);

// Lowest eigenvalue, gamma > 0. Scales as E1(L,g) = E1(1, gL)/L^2.
double e1_interval(const IntervalProblem& p);

// Second eigenvalue, any real gamma. Negative exactly when gamma*L > 1:
//   gamma*L > 1 : E2 = -k^2 with k*coth(kL) = gamma,
//   gamma*L < 1 : E2 = +k^2 with k*cot(kL)  = gamma, kL in (0, pi),
//   gamma*L = 1 : E2 = 0.
double e2_interval(const IntervalProblem& p);

// dE1/dgamma = -2 cosh^2(m) / (L (sinh(2m)/(2m) + 1)), gamma > 0.
double d_e1_d_gamma(const IntervalProblem& p);

// phi(g) = (E1(1,g) + g)/g^2; bounded on (0, inf).
double phi_of_gamma(double gamma);

// Ground eigenfunction cosh(m t / L), optionally L^2(-L,L)-normalized.
double eigfun_interval(const IntervalProblem& p, double t, bool normalized);

IntervalGroundState interval_ground_state(const IntervalProblem& p);

// Transverse-energy function F(x) = G(x) + H(x) built from m(x); bounded,
// with limits 1/9 (x -> 0) and 2 (x -> inf). Stable for all x (the large-m
// branch factors out the exponentials).
double transverse_energy_F(double x);

// sup of F over (0, inf), evaluated once on a wide log grid and cached.
double transverse_energy_sup();

// Majorant 2 alpha^2 F(r alpha) of the transverse kinetic defect K_alpha(r);
// bounded by A alpha^2 with A = 2 sup F.
double k_alpha_bound(double r, double alpha);

}  // namespace sectorspec
