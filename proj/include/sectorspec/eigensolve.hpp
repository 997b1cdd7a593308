#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <limits>
#include <vector>

namespace sectorspec {

using SpMat = Eigen::SparseMatrix<double>;

// Two-sided eigenvalue enclosure from a residual certificate.
// valid=false means the certificate is uninformative (eps >= 1 or lambda <= 0).
struct Enclosure {
  double lo = 0.0, hi = 0.0;
  double eps = std::numeric_limits<double>::infinity();
  bool valid = false;
};

struct EigenResult {
  double value = 0.0;
  Eigen::VectorXd vector;  // M-normalized
  double residual = 0.0;   // ||K x - value M x||_{M^-1} / (|value| + 1)
  Enclosure enclosure;
  bool converged = false;
};

struct SolverConfig {
  enum class Precond { diagonal, incomplete_factor, none };
  int block_size = 0;  // 0 -> k + 2
  double tolerance = 1e-8;
  int max_iterations = 400;
  // positive-definite shift for K + cM; NaN -> 1 - lower_bound
  double shift_c = std::numeric_limits<double>::quiet_NaN();
  Precond preconditioner = Precond::incomplete_factor;
  unsigned seed = 0x5ec70a5d;
  bool check_monotone = false;  // enforce non-increasing Ritz values
};

// Lowest k eigenpairs of K x = lambda M x by block preconditioned
// Rayleigh-quotient minimization (LOBPCG) on the shifted pencil
// (K + cM, M); lower_bound must satisfy x'Kx >= lower_bound x'Mx.
// Results are ascending, M-orthonormal, and carry certified enclosures.
// Pencils too small to host the block fall back to the dense path.
std::vector<EigenResult> solve_lowest(const SpMat& K, const SpMat& M, double lower_bound,
                                      int k, const SolverConfig& cfg = SolverConfig());

// Reference oracle: Cholesky reduction of M plus a full symmetric
// eigendecomposition. Ascending. Refuses dimensions above 3000.
std::vector<double> dense_solve(const SpMat& K, const SpMat& M);
std::vector<double> dense_solve(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M);

struct InertiaResult {
  int count = 0;
  double threshold_used = 0.0;
  bool perturbed = false;
};

// Number of pencil eigenvalues strictly below `threshold`, by the inertia of
// the LDL^T factorization of K - threshold M. Pivot breakdown retries with a
// perturbed threshold and reports it.
InertiaResult inertia_count(const SpMat& K, const SpMat& M, double threshold);

// Residual certificate for a positive-definite operator T (Euclidean
// geometry): eps = ||T^{-1/2}(T - lambda)u|| / ||T^{1/2}u||; if eps < 1 the
// spectrum of T intersects [lambda(1 - eps/(1-eps)), lambda(1 + eps/(1-eps))].
Enclosure certify_quasimode(const Eigen::MatrixXd& T, const Eigen::VectorXd& u, double lambda);

// Same certificate for the shifted pencil (A, M), A SPD, in the M-geometry:
// eps^2 = r' A^{-1} r / (u' A u), r = A u - mu M u. Encloses mu.
Enclosure certify_pencil(const SpMat& A, const SpMat& M, const Eigen::VectorXd& u, double mu);

}  // namespace sectorspec
