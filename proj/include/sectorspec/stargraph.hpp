#pragma once

#include <vector>

#include "sectorspec/analysis.hpp"
#include "sectorspec/assemble.hpp"
#include "sectorspec/eigensolve.hpp"

namespace sectorspec {

// Delta interaction of strength gamma supported on rays from the origin.
struct StarGraph {
  std::vector<double> angles;  // strictly increasing, in [0, 2pi)
  double gamma = 1.0;
};

// Wraps angles into [0, 2pi), sorts, and validates separation.
StarGraph make_star(std::vector<double> angles, double gamma);

struct StarReport {
  std::vector<double> direct_eigenvalues;  // below the essential threshold
  std::vector<Enclosure> enclosures;
  int direct_count = 0;
  std::vector<double> half_gaps;
  std::vector<int> sector_counts;  // per gap
  int bound = 0;                   // sum of the sector counts
  double essential_threshold = 0.0;
  bool inequality_holds = true;    // direct_count <= bound
  bool converged = true;
};

// Per-gap counting bound: each gap of half-opening beta contributes
// N(T_beta, -1) bound states (0 when beta >= pi/2); the couplings reduce to
// gamma = 1 by dilation.
std::pair<int, std::vector<int>> sector_bound(const StarGraph& star, const MeshPolicy& budget);

// Direct periodic solve; returns the eigenpairs below -gamma^2/4.
std::vector<EigenResult> direct_solve(const StarGraph& star, const PolarGrid& g, int k);

// Runs both routes and checks direct_count <= bound.
StarReport verify_counting(const StarGraph& star, const MeshPolicy& budget);

}  // namespace sectorspec
