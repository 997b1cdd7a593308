#pragma once

#include <vector>

#include "sectorspec/assemble.hpp"
#include "sectorspec/eigensolve.hpp"

namespace sectorspec {

struct MeshPolicy {
  int base_level = 0;
  int max_levels = 3;       // ladder entries tried per angle
  double rel_tol = 1e-4;    // two-mesh relative change target
  int jobs = 0;             // worker pool size; 0 = hardware
  bool extrapolate = true;  // report Richardson-extrapolated values
  SolverConfig solver;
};

struct ScanEntry {
  double alpha = 0.0;
  std::vector<double> values;          // best (extrapolated) eigenvalues, ascending
  std::vector<double> discrete_values; // finest-mesh eigenvalues
  std::vector<Enclosure> enclosures;   // certificates at the finest mesh
  std::vector<double> residuals;
  int count_below_threshold = 0;       // eigenvalues below the essential threshold
  bool converged = false;              // two-mesh target reached within budget
  int levels_used = 0;
  double last_rel_change = 0.0;
  double observed_order = 0.0;
  PolarGrid final_grid;
};

struct AlphaScan {
  std::vector<ScanEntry> entries;  // ascending in alpha
  int k = 0;
  double gamma = 1.0;
  double rel_tol = 0.0;
};

// Eigenvalue curves over a set of half-openings: per angle, assemble the
// even-parity pencil on a mesh ladder until the relative two-mesh change
// drops below the policy target, certify, and count states below the
// essential threshold by inertia.
AlphaScan scan_alpha(const std::vector<double>& alphas, int k, const MeshPolicy& budget,
                     double gamma = 1.0);

struct ExpansionFit {
  int n = 0;
  std::vector<double> coefficients;  // lambda_0 .. lambda_N
  double condition = 0.0;
  double residual_norm = 0.0;
};

// Least squares of alpha^2 E_n(alpha) against {1, alpha^2, ..., alpha^{2N}}.
ExpansionFit fit_expansion(const AlphaScan& scan, int n, int order);

// First-order coefficient of the small-opening expansion of alpha^2 E_n,
// evaluated by quadrature of the reduction's solvability condition against
// the exact 1D eigenfunction (analytic differentiation, adaptive quadrature).
double lambda1_quadrature(int n);

struct CountGrowth {
  double kappa_hat = 0.0;                     // min over the scan of N(alpha) * alpha
  std::vector<std::pair<double, int>> table;  // (alpha, count)
  double c_empirical = 0.0;                   // max |alpha^2 E_n + 1/(2n-1)^2| / alpha^2
  bool counts_monotone = true;                // non-increasing in alpha
};

CountGrowth count_growth(const AlphaScan& scan);

struct DecayFit {
  double rate = 0.0;
  double r_lo = 0.0, r_hi = 0.0;
  double goodness = 0.0;  // correlation coefficient of the log-linear fit
  bool window_shrunk = false;
};

// Exponential decay rate of the radial profile p(r) = r int w^2 dtheta,
// fitted on [lo_frac, hi_frac] * r_max; entries below 1e-14 of the peak are
// dropped (and reported) before fitting.
DecayFit agmon_decay_rate(const EigenResult& mode, const AssembledPencil& pencil,
                          double lo_frac = 0.4, double hi_frac = 0.7);

// log-linear slope fit helper: returns the decay rate -slope/2 of ln p.
DecayFit fit_log_slope(const std::vector<double>& r, const std::vector<double>& p,
                       double r_lo, double r_hi);

}  // namespace sectorspec
