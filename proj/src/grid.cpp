#include "sectorspec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sectorspec {

PolarGrid build_grid(double r_min, double r_max, int n_r, double grading, int n_theta) {
  PolarGrid g{r_min, r_max, n_r, grading, n_theta};
  if (!(r_min >= 0.0) || !(r_max > r_min))
    throw std::invalid_argument("build_grid: need 0 <= r_min < r_max");
  if (n_r < 8) throw std::invalid_argument("build_grid: n_r must be at least 8");
  if (n_theta < 4) throw std::invalid_argument("build_grid: n_theta must be at least 4");
  if (!(grading >= 1.0)) throw std::invalid_argument("build_grid: grading must be >= 1");
  return g;
}

std::vector<double> radial_nodes(const PolarGrid& g) {
  std::vector<double> nodes(g.n_r + 1);
  const double span = g.r_max - g.r_min;
  nodes[0] = g.r_min;
  if (g.grading == 1.0) {
    for (int i = 1; i <= g.n_r; ++i) nodes[i] = g.r_min + span * i / g.n_r;
  } else {
    const double h0 = span * (g.grading - 1.0) / (std::pow(g.grading, g.n_r) - 1.0);
    double h = h0, r = g.r_min;
    for (int i = 1; i <= g.n_r; ++i) {
      r += h;
      h *= g.grading;
      nodes[i] = r;
    }
    nodes[g.n_r] = g.r_max;
  }
  return nodes;
}

PolarGrid auto_sector_grid(double alpha, int k, int level) {
  if (!(alpha > 0.0 && alpha < 1.5707963267948966))
    throw std::invalid_argument("auto_sector_grid: alpha must lie in (0, pi/2)");
  if (k < 1) throw std::invalid_argument("auto_sector_grid: k must be >= 1");
  // decay rate of the ground state: sqrt(-1 - E1) = cot(alpha)
  const double rate1 = std::cos(alpha) / std::sin(alpha);
  double rate = rate1;
  if (k > 1) {
    // higher states at small opening sit near -1/((2k-1)^2 alpha^2)
    const double Ek = -1.0 / std::pow((2.0 * k - 1.0) * alpha, 2.0) - 1.0 / 3.0;
    const double rk = Ek < -1.05 ? std::sqrt(-1.0 - Ek) : 0.15;
    rate = std::min(rate, rk);
  }
  double r_max = std::clamp(14.0 / rate, 0.05, 140.0);

  PolarGrid g;
  g.r_min = 0.0;
  g.r_max = r_max;
  g.n_r = 300 << std::min(level, 4);
  int nt = std::clamp(static_cast<int>(std::ceil(alpha * 28.0)), 6, 40);
  g.n_theta = nt << std::min(level, 4);
  // geometric grading so the first spacing resolves the inner scale
  const double h_inner = std::min(alpha, r_max / g.n_r) / 8.0;
  double lo = 1.0, hi = 1.2;
  auto first_h = [&](double q) {
    return q == 1.0 ? r_max / g.n_r : r_max * (q - 1.0) / (std::pow(q, g.n_r) - 1.0);
  };
  if (first_h(1.0 + 1e-9) > h_inner) {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (first_h(mid) > h_inner ? lo : hi) = mid;
    }
    g.grading = hi;
  }
  return g;
}

PolarGrid auto_star_grid(double gamma, int level) {
  if (!(gamma > 0.0)) throw std::invalid_argument("auto_star_grid: gamma must be positive");
  PolarGrid g;
  g.r_min = 0.0;
  g.r_max = (45.0 * std::pow(1.25, std::min(level, 4))) / gamma;
  g.n_r = 350 << std::min(level, 3);
  g.n_theta = 48 << std::min(level, 3);
  g.grading = 1.0 + 0.02 / (1 << std::min(level, 3));
  return g;
}

}  // namespace sectorspec
