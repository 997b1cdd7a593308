#pragma once

#include <Eigen/Sparse>
#include <iosfwd>
#include <vector>

#include "sectorspec/grid.hpp"

namespace sectorspec {

// Robin Laplacian on the infinite sector of half-opening alpha with coupling
// gamma, reduced by parity about the bisector. `even` keeps the component
// carrying the whole discrete spectrum; `odd` is a diagnostic (its spectrum
// stays above the essential threshold); `full` assembles both halves.
struct SectorProblem {
  double alpha;
  double gamma = 1.0;
  Parity parity = Parity::even;
};

// Sparse symmetric pencil (K, M) of the quadratic form in polar coordinates,
// assembled on the sqrt(r)-weighted tensor-product basis: radial weight r in
// the mass and radial stiffness, 1/r on the angular stiffness (exact
// per-element integrals), boundary coupling -gamma int w^2 dr on Robin rows.
// Conforming, so every eigenvalue sits above `lower_bound` and refinement on
// nested grids never raises it.
struct AssembledPencil {
  Eigen::SparseMatrix<double> K, M;
  double lower_bound = 0.0;
  double gamma = 1.0;
  std::vector<double> r_nodes;      // active radial rings (row blocks)
  std::vector<double> theta_nodes;  // active angular nodes inside a ring
  bool periodic = false;
  bool vertex_dof = false;  // single collapsed dof at r = 0

  int theta_count() const { return static_cast<int>(theta_nodes.size()); }
  int rows() const { return static_cast<int>(K.rows()); }
  int dof(int ring, int j) const {
    const int T = theta_count();
    if (vertex_dof) return ring == 0 ? 0 : 1 + (ring - 1) * T + j;
    return ring * T + j;
  }
};

AssembledPencil assemble_sector(const SectorProblem& p, const PolarGrid& g);

// Periodic assembly for a delta-interaction supported on rays at the given
// angles (strictly increasing, in [0, 2pi)); angular nodes are forced onto
// every ray so the line term is exactly representable.
AssembledPencil assemble_stargraph(const std::vector<double>& angles, double gamma,
                                   const PolarGrid& g);

// Radial profile p_i = r_i * int w(r_i, theta)^2 dtheta of a coefficient
// vector, one entry per active ring.
std::vector<double> radial_profile(const AssembledPencil& p, const Eigen::VectorXd& w);

// Plain-text sparse triplet export: header "n nnz", then one "i j value" row
// per stored entry (0-based, 17 significant digits).
void write_triplets(const Eigen::SparseMatrix<double>& A, std::ostream& out);

}  // namespace sectorspec
