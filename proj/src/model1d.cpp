#include "sectorspec/model1d.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "sectorspec/eigensolve.hpp"
#include "sectorspec/quadrature.hpp"

namespace sectorspec {

double exact_eigenvalue(int n, double a) {
  if (n < 1) throw std::domain_error("exact_eigenvalue: n must be >= 1");
  if (!(a > 0.0)) throw std::domain_error("exact_eigenvalue: a must be positive");
  const double d = (2.0 * n - 1.0) * a;
  return -1.0 / (d * d);
}

double laguerre(int m, double x) {
  if (m < 0) throw std::domain_error("laguerre: m must be >= 0");
  if (m == 0) return 1.0;
  double lm1 = 1.0, lm = 1.0 - x;
  for (int k = 1; k < m; ++k) {
    double next = ((2.0 * k + 1.0 - x) * lm - k * lm1) / (k + 1.0);
    lm1 = lm;
    lm = next;
  }
  return lm;
}

namespace {

double raw_eigenfunction(int n, double a, double r) {
  const double beta = 1.0 / ((2.0 * n - 1.0) * a);
  return std::sqrt(r) * std::exp(-beta * r) * laguerre(n - 1, 2.0 * beta * r);
}

double cached_norm(int n, double a) {
  static std::map<std::pair<int, double>, double> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(n, a);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const double R = 40.0 * (2.0 * n - 1.0) * a;
  double nrm2 = integrate([n, a](double r) {
    double v = raw_eigenfunction(n, a, r);
    return v * v;
  }, 0.0, R, 1e-12, 1e-300);
  double nrm = std::sqrt(nrm2);
  cache[key] = nrm;
  return nrm;
}

}  // namespace

double exact_eigenfunction(int n, double a, double r, bool normalized) {
  if (n < 1) throw std::domain_error("exact_eigenfunction: n must be >= 1");
  if (!(a > 0.0)) throw std::domain_error("exact_eigenfunction: a must be positive");
  if (!(r > 0.0)) throw std::domain_error("exact_eigenfunction: r must be positive");
  double v = raw_eigenfunction(n, a, r);
  return normalized ? v / cached_norm(n, a) : v;
}

ExactEigenpair make_exact_eigenpair(int n, double a) {
  ExactEigenpair e;
  e.n = n;
  e.a = a;
  e.energy = exact_eigenvalue(n, a);
  e.norm_constant = 1.0 / cached_norm(n, a);
  return e;
}

std::vector<double> model_grid(double r_max, int n, double grading) {
  if (!(r_max > 0.0) || n < 2) throw std::invalid_argument("model_grid: bad parameters");
  if (!(grading >= 1.0)) throw std::invalid_argument("model_grid: grading must be >= 1");
  std::vector<double> nodes(n + 1);
  nodes[0] = 0.0;
  if (grading == 1.0) {
    for (int i = 1; i <= n; ++i) nodes[i] = r_max * i / n;
  } else {
    const double h0 = r_max * (grading - 1.0) / (std::pow(grading, n) - 1.0);
    double h = h0, r = 0.0;
    for (int i = 1; i <= n; ++i) {
      r += h;
      h *= grading;
      nodes[i] = r;
    }
    nodes[n] = r_max;
  }
  return nodes;
}

TridiagonalPencil discretize_model(const ModelProblem& p, const std::vector<double>& nodes) {
  if (!(p.a > 0.0)) throw std::domain_error("discretize_model: a must be positive");
  const int nn = static_cast<int>(nodes.size());
  if (nn < 10) throw std::invalid_argument("discretize_model: grid needs at least 8 interior nodes");
  for (int i = 0; i + 1 < nn; ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw std::invalid_argument("discretize_model: nodes must be strictly increasing");
  if (nodes.front() < 0.0) throw std::invalid_argument("discretize_model: nodes must start at r >= 0");

  // Full-size assembly, then drop Dirichlet rows.
  std::vector<double> kd(nn, 0.0), ko(nn - 1, 0.0), md(nn, 0.0), mo(nn - 1, 0.0);
  for (int e = 0; e + 1 < nn; ++e) {
    const double ra = nodes[e], rb = nodes[e + 1], h = rb - ra;
    const double ks = (ra + rb) / (2.0 * h);  // int r p' p'
    const double m00 = h * (3 * ra + rb) / 12.0, m11 = h * (ra + 3 * rb) / 12.0,
                 m01 = h * (ra + rb) / 12.0;
    // Coulomb term in w-variables is a flat mass scaled by -1/a.
    const double f00 = h / 3.0, f01 = h / 6.0;
    kd[e] += ks - f00 / p.a;
    kd[e + 1] += ks - f00 / p.a;
    ko[e] += -ks - f01 / p.a;
    md[e] += m00;
    md[e + 1] += m11;
    mo[e] += m01;
  }

  const bool vertex = nodes.front() == 0.0;
  const int lo = vertex ? 0 : 1;   // first active node
  const int hi = nn - 2;           // last active node (Dirichlet at the end)
  TridiagonalPencil t;
  for (int i = lo; i <= hi; ++i) {
    t.k_diag.push_back(kd[i]);
    t.m_diag.push_back(md[i]);
    t.nodes.push_back(nodes[i]);
    if (i < hi) {
      t.k_off.push_back(ko[i]);
      t.m_off.push_back(mo[i]);
    }
  }
  t.lower_bound = exact_eigenvalue(1, p.a) - 0.5;
  return t;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

void to_sparse(const TridiagonalPencil& t, SpMat& K, SpMat& M) {
  const int n = static_cast<int>(t.k_diag.size());
  std::vector<Eigen::Triplet<double>> tk, tm;
  for (int i = 0; i < n; ++i) {
    tk.emplace_back(i, i, t.k_diag[i]);
    tm.emplace_back(i, i, t.m_diag[i]);
    if (i + 1 < n) {
      tk.emplace_back(i, i + 1, t.k_off[i]);
      tk.emplace_back(i + 1, i, t.k_off[i]);
      tm.emplace_back(i, i + 1, t.m_off[i]);
      tm.emplace_back(i + 1, i, t.m_off[i]);
    }
  }
  K.resize(n, n);
  M.resize(n, n);
  K.setFromTriplets(tk.begin(), tk.end());
  M.setFromTriplets(tm.begin(), tm.end());
}

}  // namespace

std::vector<double> model_lowest(const TridiagonalPencil& t, int k) {
  SpMat K, M;
  to_sparse(t, K, M);
  SolverConfig cfg;
  cfg.tolerance = 1e-10;
  auto res = solve_lowest(K, M, t.lower_bound, k, cfg);
  std::vector<double> vals;
  vals.reserve(res.size());
  for (const auto& r : res) vals.push_back(r.value);
  return vals;
}

RadialGridFunction model_ground_state(const ModelProblem& p, const std::vector<double>& nodes) {
  TridiagonalPencil t = discretize_model(p, nodes);
  SpMat K, M;
  to_sparse(t, K, M);
  SolverConfig cfg;
  cfg.tolerance = 1e-10;
  auto res = solve_lowest(K, M, t.lower_bound, 1, cfg);
  const Eigen::VectorXd& w = res[0].vector;
  RadialGridFunction u;
  u.nodes = nodes;
  u.values.assign(nodes.size(), 0.0);
  // active dofs map onto nodes [vertex? 0 : 1, nn-2]; endpoints stay zero
  const bool vertex = nodes.front() == 0.0;
  const int lo = vertex ? 0 : 1;
  for (int i = 0; i < w.size(); ++i) {
    const double r = t.nodes[i];
    u.values[lo + i] = std::sqrt(r) * w[i];
  }
  // fix overall sign: make the bulk positive
  double s = 0.0;
  for (double v : u.values) s += v;
  if (s < 0)
    for (double& v : u.values) v = -v;
  return u;
}

FriedrichsFit friedrichs_coefficients(const RadialGridFunction& u, double r_lo, double r_hi) {
  if (!(r_lo > 0.0 && r_lo < r_hi)) throw std::invalid_argument("friedrichs_coefficients: bad window");
  std::vector<double> rs, vs;
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    if (u.nodes[i] >= r_lo && u.nodes[i] <= r_hi) {
      rs.push_back(u.nodes[i]);
      vs.push_back(u.values[i]);
    }
  }
  if (rs.size() < 2) throw std::invalid_argument("friedrichs_coefficients: window contains fewer than 2 nodes");
  Eigen::MatrixXd B(rs.size(), 2);
  Eigen::VectorXd y(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double sq = std::sqrt(rs[i]);
    B(i, 0) = sq;
    B(i, 1) = sq * std::log(rs[i]);
    y(i) = vs[i];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd c = svd.solve(y);
  FriedrichsFit fit;
  fit.a1 = c(0);
  fit.a2 = c(1);
  fit.condition = svd.singularValues()(0) / svd.singularValues()(1);
  fit.ill_conditioned = rs.size() < 4 || fit.condition > 1e8;
  return fit;
}

}  // namespace sectorspec
