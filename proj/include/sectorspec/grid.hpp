#pragma once

#include <vector>

namespace sectorspec {

enum class Parity { even, odd, full };

// Tensor grid on (r, theta). r_min = 0 keeps a collapsed vertex node at the
// origin (natural condition, selects the sqrt(r) branch); r_min > 0 imposes a
// Dirichlet value there. The outer radius always carries a Dirichlet value.
// `grading` >= 1 is the geometric ratio of consecutive radial spacings.
struct PolarGrid {
  double r_min = 0.0;
  double r_max = 25.0;
  int n_r = 300;
  double grading = 1.0;
  int n_theta = 16;
};

PolarGrid build_grid(double r_min, double r_max, int n_r, double grading, int n_theta);

// The n_r + 1 radial nodes of the grid.
std::vector<double> radial_nodes(const PolarGrid& g);

// Mesh ladder for a sector problem: level 0 is the coarse entry, each level
// doubles the resolution. r_max tracks the slowest expected eigenfunction
// decay among the k requested states.
PolarGrid auto_sector_grid(double alpha, int k, int level);

// Ladder for a star-graph problem; n_theta is the total around the circle.
PolarGrid auto_star_grid(double gamma, int level);

}  // namespace sectorspec
