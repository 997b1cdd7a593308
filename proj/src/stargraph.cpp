#include "sectorspec/stargraph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sectorspec {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

StarGraph make_star(std::vector<double> angles, double gamma) {
  if (angles.empty()) throw std::invalid_argument("make_star: need at least one ray");
  if (!(gamma > 0.0)) throw std::invalid_argument("make_star: gamma must be positive");
  for (double& a : angles) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
  }
  std::sort(angles.begin(), angles.end());
  for (std::size_t j = 1; j < angles.size(); ++j)
    if (angles[j] - angles[j - 1] < 1e-10)
      throw std::invalid_argument("make_star: coincident rays");
  return StarGraph{std::move(angles), gamma};
}

std::vector<double> star_half_gaps(const StarGraph& star) {
  const int m = static_cast<int>(star.angles.size());
  std::vector<double> betas(m);
  for (int j = 0; j < m; ++j) {
    const double a0 = star.angles[j];
    const double a1 = (j + 1 < m) ? star.angles[j + 1] : star.angles[0] + kTwoPi;
    betas[j] = 0.5 * (a1 - a0);
  }
  return betas;
}

std::pair<int, std::vector<int>> sector_bound(const StarGraph& star, const MeshPolicy& budget) {
  const auto betas = star_half_gaps(star);
  std::vector<int> counts(betas.size(), 0);
  // Couplings reduce to gamma = 1 by dilation, so each gap needs
  // N(T_beta, -1); half-openings of pi/2 or more contribute nothing.
  for (std::size_t j = 0; j < betas.size(); ++j) {
    const double beta = betas[j];
    if (beta >= 0.5 * kPi - 1e-14) {
      counts[j] = 0;
      continue;
    }
    // crude cap on how many bound states the gap can host, for the mesh policy
    const int k_expect = std::max(1, static_cast<int>(std::ceil(0.5 * (1.0 / beta + 1.0))));
    int count = 0;
    for (int level = budget.base_level; level < budget.base_level + budget.max_levels; ++level) {
      PolarGrid g = auto_sector_grid(beta, k_expect, level);
      AssembledPencil pencil = assemble_sector(SectorProblem{beta, 1.0, Parity::even}, g);
      int c = inertia_count(pencil.K, pencil.M, -1.0 - 1e-9).count;
      if (level > budget.base_level && c == count) {
        count = c;
        break;
      }
      count = c;
    }
    counts[j] = count;
  }
  int bound = 0;
  for (int c : counts) bound += c;
  return {bound, counts};
}

std::vector<EigenResult> direct_solve(const StarGraph& star, const PolarGrid& g, int k) {
  AssembledPencil pencil = assemble_stargraph(star.angles, star.gamma, g);
  SolverConfig cfg;
  auto res = solve_lowest(pencil.K, pencil.M, pencil.lower_bound, k, cfg);
  const double threshold = -star.gamma * star.gamma / 4.0 - 1e-9;
  std::vector<EigenResult> below;
  for (auto& r : res)
    if (r.value < threshold) below.push_back(std::move(r));
  return below;
}

StarReport verify_counting(const StarGraph& star, const MeshPolicy& budget) {
  StarReport report;
  report.essential_threshold = -star.gamma * star.gamma / 4.0;
  report.half_gaps = star_half_gaps(star);
  auto [bound, counts] = sector_bound(star, budget);
  report.bound = bound;
  report.sector_counts = std::move(counts);

  const double threshold = report.essential_threshold - 1e-9;
  int prev_count = -1;
  for (int level = budget.base_level; level < budget.base_level + budget.max_levels; ++level) {
    PolarGrid g = auto_star_grid(star.gamma, level);
    AssembledPencil pencil = assemble_stargraph(star.angles, star.gamma, g);
    const int count = inertia_count(pencil.K, pencil.M, threshold).count;
    const bool stable = count == prev_count;
    prev_count = count;
    report.direct_count = count;
    if (count > 0 && (stable || level + 1 == budget.base_level + budget.max_levels)) {
      SolverConfig cfg = budget.solver;
      auto res = solve_lowest(pencil.K, pencil.M, pencil.lower_bound, count, cfg);
      report.direct_eigenvalues.clear();
      report.enclosures.clear();
      for (auto& r : res) {
        report.direct_eigenvalues.push_back(r.value);
        report.enclosures.push_back(r.enclosure);
        if (!r.converged) report.converged = false;
      }
    }
    if (stable) break;
    if (level + 1 == budget.base_level + budget.max_levels) report.converged = false;
  }
  report.inequality_holds = report.direct_count <= report.bound;
  return report;
}

}  // namespace sectorspec
