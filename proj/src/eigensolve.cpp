#include "sectorspec/eigensolve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sectorspec {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Enclosure enclosure_from_eps(double lambda, double eps) {
  Enclosure e;
  e.eps = eps;
  if (!(lambda > 0.0) || !(eps < 1.0) || !std::isfinite(eps)) return e;
  const double delta = eps / (1.0 - eps) * lambda;
  e.lo = std::max(lambda - delta, 0.0);
  e.hi = lambda + delta;
  e.valid = true;
  return e;
}

// B := basis coefficients with (S B)' M (S B) = I; directions whose Gram
// eigenvalue falls below rank_tol * max are dropped.
MatrixXd m_orthonormal_basis(const MatrixXd& S, const SpMat& M, double rank_tol = 1e-12) {
  MatrixXd G = S.transpose() * (M * S);
  G = 0.5 * (G + G.transpose().eval());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
  const VectorXd& ev = es.eigenvalues();
  const double cutoff = rank_tol * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  int keep = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff) ++keep;
  MatrixXd B(S.cols(), keep);
  int c = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff) {
      B.col(c++) = es.eigenvectors().col(i) / std::sqrt(ev(i));
    }
  }
  return B;
}

std::vector<EigenResult> dense_path(const SpMat& K, const SpMat& M, int k, double c,
                                    const Eigen::SimplicialLDLT<SpMat>& Aldlt,
                                    const SpMat& A,
                                    const Eigen::SimplicialLLT<SpMat>& Mllt) {
  MatrixXd Kd = MatrixXd(K), Md = MatrixXd(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(Kd, Md);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("solve_lowest: dense fallback failed");
  std::vector<EigenResult> out;
  for (int j = 0; j < k; ++j) {
    EigenResult r;
    r.value = ges.eigenvalues()(j);
    r.vector = ges.eigenvectors().col(j);
    VectorXd res = K * r.vector - r.value * (M * r.vector);
    r.residual = std::sqrt(std::max(0.0, res.dot(Mllt.solve(res)))) / (std::abs(r.value) + 1.0);
    const double mu = r.value + c;
    VectorXd ra = A * r.vector - mu * (M * r.vector);
    double eps2 = ra.dot(Aldlt.solve(ra)) / r.vector.dot(A * r.vector);
    Enclosure enc = enclosure_from_eps(mu, std::sqrt(std::max(0.0, eps2)));
    if (enc.valid) {
      enc.lo -= c;
      enc.hi -= c;
    }
    r.enclosure = enc;
    r.converged = true;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<EigenResult> solve_lowest(const SpMat& K, const SpMat& M, double lower_bound,
                                      int k, const SolverConfig& cfg) {
  const int n = static_cast<int>(K.rows());
  if (K.rows() != K.cols() || M.rows() != M.cols() || K.rows() != M.rows())
    throw std::invalid_argument("solve_lowest: pencil dimensions disagree");
  if (k < 1 || k > n) throw std::invalid_argument("solve_lowest: bad eigenpair count");

  const double c = std::isnan(cfg.shift_c) ? (1.0 - lower_bound) : cfg.shift_c;
  SpMat A = K + c * M;  // positive definite by the analytic lower bound

  Eigen::SimplicialLDLT<SpMat> Aldlt(A);
  if (Aldlt.info() != Eigen::Success || (Aldlt.vectorD().array() <= 0.0).any()) {
    std::ostringstream msg;
    msg << "solve_lowest: K + cM indefinite with c = " << c
        << "; c must exceed -(analytic lower bound) = " << -lower_bound;
    throw std::runtime_error(msg.str());
  }
  Eigen::SimplicialLLT<SpMat> Mllt(M);
  if (Mllt.info() != Eigen::Success)
    throw std::runtime_error("solve_lowest: mass matrix is not positive definite");

  int m = cfg.block_size > 0 ? cfg.block_size : k + 2;
  if (m < k + 2) m = k + 2;
  if (n < 3 * m + 2) return dense_path(K, M, k, c, Aldlt, A, Mllt);

  // preconditioner: incomplete factorization of A, diagonal fallback
  Eigen::IncompleteCholesky<double> ic;
  bool use_ic = cfg.preconditioner == SolverConfig::Precond::incomplete_factor;
  if (use_ic) {
    ic.compute(A);
    if (ic.info() != Eigen::Success) use_ic = false;
  }
  VectorXd dinv;
  if (cfg.preconditioner != SolverConfig::Precond::none) {
    dinv = A.diagonal().cwiseMax(1e-300).cwiseInverse();
  }
  auto precondition = [&](const MatrixXd& R) -> MatrixXd {
    if (use_ic) {
      MatrixXd W(R.rows(), R.cols());
      for (int j = 0; j < R.cols(); ++j) W.col(j) = ic.solve(R.col(j));
      return W;
    }
    if (cfg.preconditioner == SolverConfig::Precond::diagonal)
      return dinv.asDiagonal() * R;
    return R;
  };

  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  MatrixXd X(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = unif(rng);
  X = X * m_orthonormal_basis(X, M);

  // Rayleigh-Ritz on the initial block
  VectorXd theta;
  {
    MatrixXd G = X.transpose() * (A * X);
    G = 0.5 * (G + G.transpose().eval());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
    theta = es.eigenvalues();
    X = X * es.eigenvectors();
  }

  MatrixXd P(n, 0);
  MatrixXd AX = A * X, MX = M * X;
  std::vector<bool> converged(m, false);
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    MatrixXd R = AX - MX * theta.asDiagonal();
    bool all_done = true;
    for (int j = 0; j < m; ++j) {
      VectorXd rj = R.col(j);
      double res = std::sqrt(std::max(0.0, rj.dot(Mllt.solve(rj)))) /
                   (std::abs(theta(j) - c) + 1.0);
      converged[j] = res <= cfg.tolerance;
      if (j < k && !converged[j]) all_done = false;
    }
    if (all_done) break;

    MatrixXd W = precondition(R);
    MatrixXd S(n, X.cols() + W.cols() + P.cols());
    S << X, W, P;
    MatrixXd B = m_orthonormal_basis(S, M);
    MatrixXd Q = S * B;
    MatrixXd G = Q.transpose() * (A * Q);
    G = 0.5 * (G + G.transpose().eval());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
    const int mm = std::min<int>(m, static_cast<int>(Q.cols()));
    MatrixXd C = es.eigenvectors().leftCols(mm);
    VectorXd theta_new = es.eigenvalues().head(mm);

    if (cfg.check_monotone) {
      for (int j = 0; j < std::min<int>(mm, theta.size()); ++j) {
        if (theta_new(j) > theta(j) + 1e-10 * (std::abs(theta(j)) + 1.0))
          throw std::runtime_error("solve_lowest: Ritz value increased across an iteration");
      }
    }

    MatrixXd Xnew = Q * C;
    P = Xnew - X.leftCols(mm);
    X = Xnew;
    theta = theta_new;
    AX = A * X;
    MX = M * X;
    if (static_cast<int>(X.cols()) < m) m = static_cast<int>(X.cols());
  }

  std::vector<EigenResult> out;
  for (int j = 0; j < k; ++j) {
    EigenResult r;
    r.value = theta(j) - c;
    r.vector = X.col(j);
    VectorXd res = K * r.vector - r.value * (M * r.vector);
    r.residual = std::sqrt(std::max(0.0, res.dot(Mllt.solve(res)))) / (std::abs(r.value) + 1.0);
    r.converged = r.residual <= cfg.tolerance;
    VectorXd ra = AX.col(j) - theta(j) * MX.col(j);
    double eps2 = ra.dot(Aldlt.solve(ra)) / X.col(j).dot(AX.col(j));
    Enclosure enc = enclosure_from_eps(theta(j), std::sqrt(std::max(0.0, eps2)));
    if (enc.valid) {
      enc.lo -= c;
      enc.hi -= c;
    }
    r.enclosure = enc;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> dense_solve(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M) {
  if (K.rows() > 3000)
    throw std::invalid_argument("dense_solve: dimension exceeds 3000; use the iterative solver");
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(K, M, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) throw std::runtime_error("dense_solve: decomposition failed");
  const VectorXd& v = ges.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<double> dense_solve(const SpMat& K, const SpMat& M) {
  return dense_solve(MatrixXd(K), MatrixXd(M));
}

InertiaResult inertia_count(const SpMat& K, const SpMat& M, double threshold) {
  InertiaResult result;
  const double pert = 1e-9 * (1.0 + std::abs(threshold));
  for (int attempt = 0; attempt < 5; ++attempt) {
    const double t = threshold + attempt * pert;
    SpMat S = K - t * M;
    Eigen::SimplicialLDLT<SpMat> ldlt(S);
    bool ok = ldlt.info() == Eigen::Success;
    int negatives = 0;
    if (ok) {
      const auto& d = ldlt.vectorD();
      for (int i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d(i)) || d(i) == 0.0) {
          ok = false;
          break;
        }
        if (d(i) < 0.0) ++negatives;
      }
    }
    if (ok) {
      result.count = negatives;
      result.threshold_used = t;
      result.perturbed = attempt > 0;
      return result;
    }
  }
  throw std::runtime_error("inertia_count: factorization kept breaking down under threshold perturbation");
}

Enclosure certify_quasimode(const Eigen::MatrixXd& T, const Eigen::VectorXd& u, double lambda) {
  if (u.size() != T.rows() || u.norm() == 0.0)
    throw std::invalid_argument("certify_quasimode: bad test vector");
  Eigen::LDLT<MatrixXd> ldlt(T);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw std::invalid_argument("certify_quasimode: operator is not positive definite");
  VectorXd r = T * u - lambda * u;
  const double num = r.dot(ldlt.solve(r));
  const double den = u.dot(T * u);
  return enclosure_from_eps(lambda, std::sqrt(std::max(0.0, num / den)));
}

Enclosure certify_pencil(const SpMat& A, const SpMat& M, const Eigen::VectorXd& u, double mu) {
  Eigen::SimplicialLDLT<SpMat> ldlt(A);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any())
    throw std::invalid_argument("certify_pencil: shifted stiffness is not positive definite");
  VectorXd r = A * u - mu * (M * u);
  const double num = r.dot(ldlt.solve(r));
  const double den = u.dot(A * u);
  return enclosure_from_eps(mu, std::sqrt(std::max(0.0, num / den)));
}

}  // namespace sectorspec
