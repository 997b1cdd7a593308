#include "sectorspec/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sectorspec/model1d.hpp"
#include "sectorspec/parallel.hpp"
#include "sectorspec/quadrature.hpp"

namespace sectorspec {

namespace {

ScanEntry scan_one(double alpha, int k, const MeshPolicy& budget, double gamma) {
  ScanEntry entry;
  entry.alpha = alpha;
  const double threshold = -gamma * gamma - 1e-9;

  std::vector<std::vector<double>> ladder;
  AssembledPencil finest;
  std::vector<EigenResult> finest_res;
  for (int level = budget.base_level; level < budget.base_level + budget.max_levels; ++level) {
    PolarGrid g = auto_sector_grid(alpha, k, level);
    SectorProblem prob{alpha, gamma, Parity::even};
    AssembledPencil pencil = assemble_sector(prob, g);
    auto res = solve_lowest(pencil.K, pencil.M, pencil.lower_bound, k, budget.solver);
    std::vector<double> vals;
    for (const auto& r : res) vals.push_back(r.value);
    ladder.push_back(vals);
    finest = std::move(pencil);
    finest_res = std::move(res);
    entry.levels_used = level - budget.base_level + 1;
    entry.final_grid = g;
    if (ladder.size() >= 2) {
      const auto& prev = ladder[ladder.size() - 2];
      double change = 0.0;
      for (int j = 0; j < k; ++j)
        change = std::max(change, std::abs(vals[j] - prev[j]) / (std::abs(vals[j]) + 1e-300));
      entry.last_rel_change = change;
      if (change < budget.rel_tol) {
        entry.converged = true;
        break;
      }
    }
  }

  const auto& last = ladder.back();
  entry.discrete_values = last;
  entry.values = last;
  if (budget.extrapolate && ladder.size() >= 2) {
    const auto& prev = ladder[ladder.size() - 2];
    double order = 2.0;
    if (ladder.size() >= 3) {
      const auto& pprev = ladder[ladder.size() - 3];
      const double d1 = std::abs(prev[0] - pprev[0]);
      const double d2 = std::abs(last[0] - prev[0]);
      if (d2 > 0 && d1 > d2) order = std::clamp(std::log2(d1 / d2), 1.0, 2.5);
    }
    const double q = std::pow(2.0, order) - 1.0;
    for (int j = 0; j < k; ++j)
      entry.values[j] = last[j] + (last[j] - prev[j]) / q;
    entry.observed_order = order;
  }
  for (const auto& r : finest_res) {
    entry.enclosures.push_back(r.enclosure);
    entry.residuals.push_back(r.residual);
    if (!r.converged) entry.converged = false;
  }
  entry.count_below_threshold = inertia_count(finest.K, finest.M, threshold).count;
  return entry;
}

}  // namespace

AlphaScan scan_alpha(const std::vector<double>& alphas, int k, const MeshPolicy& budget,
                     double gamma) {
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.5707963267948966))
      throw std::invalid_argument("scan_alpha: angles must lie in (0, pi/2)");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i - 1]))
      throw std::invalid_argument("scan_alpha: angles must be strictly increasing");

  AlphaScan scan;
  scan.k = k;
  scan.gamma = gamma;
  scan.rel_tol = budget.rel_tol;
  scan.entries.resize(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t i) {
    scan.entries[i] = scan_one(alphas[i], k, budget, gamma);
  }, budget.jobs);
  return scan;
}

ExpansionFit fit_expansion(const AlphaScan& scan, int n, int order) {
  if (n < 1) throw std::invalid_argument("fit_expansion: n must be >= 1");
  if (order < 0) throw std::invalid_argument("fit_expansion: order must be >= 0");
  std::vector<double> xs, ys;
  for (const auto& e : scan.entries) {
    if (e.alpha > 0.2) continue;
    if (static_cast<int>(e.values.size()) < n) continue;
    xs.push_back(e.alpha * e.alpha);
    ys.push_back(e.alpha * e.alpha * e.values[n - 1]);
  }
  const int npts = static_cast<int>(xs.size());
  if (npts < order + 2) {
    throw std::invalid_argument("fit_expansion: need at least " + std::to_string(order + 2) +
                                " scan points at alpha <= 0.2, have " + std::to_string(npts));
  }
  Eigen::MatrixXd B(npts, order + 1);
  Eigen::VectorXd y(npts);
  std::vector<double> scale(order + 1, 1.0);
  for (int j = 0; j <= order; ++j) {
    double mx = 0.0;
    for (int i = 0; i < npts; ++i) mx = std::max(mx, std::pow(xs[i], j));
    scale[j] = mx > 0 ? mx : 1.0;
  }
  for (int i = 0; i < npts; ++i) {
    y(i) = ys[i];
    for (int j = 0; j <= order; ++j) B(i, j) = std::pow(xs[i], j) / scale[j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-14 * sv(0)) {
    throw std::invalid_argument("fit_expansion: rank-deficient basis; supply at least " +
                                std::to_string(order + 2) + " well-separated angles");
  }
  Eigen::VectorXd c = svd.solve(y);
  ExpansionFit fit;
  fit.n = n;
  for (int j = 0; j <= order; ++j) fit.coefficients.push_back(c(j) / scale[j]);
  fit.condition = sv(0) / sv(sv.size() - 1);
  fit.residual_norm = (B * c - y).norm();
  return fit;
}

double lambda1_quadrature(int n) {
  if (n < 1) throw std::domain_error("lambda1_quadrature: n must be >= 1");
  // Normalized 1D ground-channel eigenfunction u0 = psi_n (a = 1) written as
  // u0(t) = sqrt(t) e^{-beta t} P(t) with P a polynomial; the first-order
  // coefficient is the solvability inner product
  //   lambda1 = < -(1/t) f + (1/3) L0 f - (lambda0/3) f , u0 >,
  // with f = t u0 / 2 and L0 = -d^2/dt^2 - 1/(4 t^2). For f = sqrt(t)
  // e^{-beta t} Q(t) the singular parts cancel:
  //   L0 f = -sqrt(t) e^{-beta t} [ (Q' - beta Q)/t + Q'' - 2 beta Q' + beta^2 Q ].
  const double lambda0 = exact_eigenvalue(n, 1.0);
  const double beta = 1.0 / (2.0 * n - 1.0);
  const double norm = 1.0 / make_exact_eigenpair(n, 1.0).norm_constant;

  // coefficients of P(t) = L_{n-1}(2 beta t) in powers of t
  std::vector<double> P(n, 0.0);
  {
    double binom = 1.0;    // C(n-1, i)
    double fact = 1.0;     // i!
    double pw = 1.0;       // (2 beta)^i
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        binom *= static_cast<double>(n - i) / i;
        fact *= i;
        pw *= 2.0 * beta;
      }
      P[i] = ((i % 2) ? -1.0 : 1.0) * binom * pw / fact;
    }
  }
  auto polyval = [](const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
  };
  auto polyder = [](const std::vector<double>& c) {
    std::vector<double> d(std::max<std::size_t>(c.size() - 1, 1), 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
  };

  // Q = t P / (2 norm); u0 = sqrt(t) e^{-beta t} P / norm
  std::vector<double> Q(n + 1, 0.0);
  for (int i = 0; i < n; ++i) Q[i + 1] = P[i] / (2.0 * norm);
  const std::vector<double> Qp = polyder(Q), Qpp = polyder(Qp);

  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double expf = std::exp(-beta * t);
    const double u0 = std::sqrt(t) * expf * polyval(P, t) / norm;
    const double q = polyval(Q, t), qp = polyval(Qp, t), qpp = polyval(Qpp, t);
    const double f = std::sqrt(t) * expf * q;
    const double L0f = -std::sqrt(t) * expf *
                       ((qp - beta * q) / t + (qpp - 2.0 * beta * qp + beta * beta * q));
    return (-f / t + L0f / 3.0 - lambda0 * f / 3.0) * u0;
  };
  const double R = 50.0 * (2.0 * n - 1.0);
  return integrate(integrand, 0.0, R, 1e-11, 1e-300);
}

CountGrowth count_growth(const AlphaScan& scan) {
  CountGrowth out;
  out.kappa_hat = std::numeric_limits<double>::infinity();
  int prev_count = -1;
  double prev_alpha = 0.0;
  for (const auto& e : scan.entries) {
    out.table.emplace_back(e.alpha, e.count_below_threshold);
    out.kappa_hat = std::min(out.kappa_hat, e.count_below_threshold * e.alpha);
    if (prev_count >= 0 && e.alpha > prev_alpha && e.count_below_threshold > prev_count)
      out.counts_monotone = false;
    prev_count = e.count_below_threshold;
    prev_alpha = e.alpha;
    for (std::size_t j = 0; j < e.values.size(); ++j) {
      if (e.values[j] >= -1.0) continue;
      const double pred = 1.0 / std::pow(2.0 * (j + 1.0) - 1.0, 2);
      out.c_empirical = std::max(out.c_empirical,
                                 std::abs(e.alpha * e.alpha * e.values[j] + pred) /
                                     (e.alpha * e.alpha));
    }
  }
  if (!std::isfinite(out.kappa_hat)) out.kappa_hat = 0.0;
  return out;
}

DecayFit fit_log_slope(const std::vector<double>& r, const std::vector<double>& p,
                       double r_lo, double r_hi) {
  if (r.size() != p.size()) throw std::invalid_argument("fit_log_slope: size mismatch");
  double peak = 0.0;
  for (double v : p) peak = std::max(peak, v);
  if (!(peak > 0.0)) throw std::invalid_argument("fit_log_slope: empty profile");
  DecayFit fit;
  fit.r_lo = r_lo;
  fit.r_hi = r_hi;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi) continue;
    if (p[i] < 1e-14 * peak) {
      fit.window_shrunk = true;
      continue;
    }
    xs.push_back(r[i]);
    ys.push_back(std::log(p[i]));
  }
  if (xs.size() < 3) throw std::runtime_error("fit_log_slope: window retains fewer than 3 usable nodes");
  const double nn = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double cov = sxy - sx * sy / nn;
  const double varx = sxx - sx * sx / nn;
  const double vary = syy - sy * sy / nn;
  const double slope = cov / varx;
  fit.rate = -0.5 * slope;
  fit.goodness = vary > 0 ? std::abs(cov) / std::sqrt(varx * vary) : 1.0;
  if (fit.window_shrunk) {
    fit.r_lo = xs.front();
    fit.r_hi = xs.back();
  }
  return fit;
}

DecayFit agmon_decay_rate(const EigenResult& mode, const AssembledPencil& pencil,
                          double lo_frac, double hi_frac) {
  if (!(lo_frac > 0.0 && lo_frac < hi_frac && hi_frac < 1.0))
    throw std::invalid_argument("agmon_decay_rate: window fractions must satisfy 0 < lo < hi < 1");
  const std::vector<double> prof = radial_profile(pencil, mode.vector);
  const double r_used = pencil.r_nodes.back();
  return fit_log_slope(pencil.r_nodes, prof, lo_frac * r_used, hi_frac * r_used);
}

}  // namespace sectorspec
