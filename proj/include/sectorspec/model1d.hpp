#pragma once

#include <vector>

namespace sectorspec {

// Radial operator -d^2/dr^2 - 1/(4r^2) - 1/(a r) on (0, inf), a > 0,
// with the boundary behavior selecting the sqrt(r) branch at the origin.
struct ModelProblem {
  double a = 1.0;
};

struct ExactEigenpair {
  int n;
  double a;
  double energy;         // -1/((2n-1)^2 a^2)
  double norm_constant;  // 1/||psi_n||_(L^2)
};

struct RadialGridFunction {
  std::vector<double> nodes;
  std::vector<double> values;
};

double exact_eigenvalue(int n, double a);

// Laguerre polynomial L_m(x) by the three-term recurrence.
double laguerre(int m, double x);

// psi_n(r) = sqrt(r) exp(-r/((2n-1)a)) L_{n-1}(2r/((2n-1)a)).
// With normalized=true the value is divided by the L^2(0,inf) norm,
// computed once per (n, a) by adaptive quadrature and cached.
double exact_eigenfunction(int n, double a, double r, bool normalized);

ExactEigenpair make_exact_eigenpair(int n, double a);

// Symmetric tridiagonal pencil (K, M) over the retained nodes.
// Assembled from the substitution u = sqrt(r) w: K = int r w' w' - (1/a) w w,
// M = int r w w, P1 elements on the given nodes. nodes.front() == 0 keeps a
// natural vertex dof (selects the sqrt(r) branch); nodes.front() > 0 imposes
// a Dirichlet value there. The last node is always Dirichlet.
struct TridiagonalPencil {
  std::vector<double> k_diag, k_off;
  std::vector<double> m_diag, m_off;
  std::vector<double> nodes;   // active nodes, aligned with the dofs
  double lower_bound;          // -1/a^2 minus a small safety margin
};

TridiagonalPencil discretize_model(const ModelProblem& p, const std::vector<double>& nodes);

// Geometric node ladder 0 = r_0 < ... < r_n = r_max with spacing ratio
// `grading` (1 = uniform).
std::vector<double> model_grid(double r_max, int n, double grading = 1.0);

// Lowest k eigenvalues of the pencil, ascending.
std::vector<double> model_lowest(const TridiagonalPencil& t, int k);

// Ground state as u-values (u = sqrt(r) w) on the active nodes plus the
// Dirichlet endpoints, normalized in the pencil mass.
RadialGridFunction model_ground_state(const ModelProblem& p, const std::vector<double>& nodes);

struct FriedrichsFit {
  double a1, a2;
  double condition;
  bool ill_conditioned;
};

// Least-squares fit of u against {sqrt(r), sqrt(r) log r} on [r_lo, r_hi].
FriedrichsFit friedrichs_coefficients(const RadialGridFunction& u, double r_lo, double r_hi);

}  // namespace sectorspec
