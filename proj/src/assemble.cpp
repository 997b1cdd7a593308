#include "sectorspec/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace sectorspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

struct Elem2x2 {
  double a[2][2];
};

// Exact radial element integrals on [ra, rb] against P1 hats
// pa = (rb - r)/h, pb = (r - ra)/h.
struct RadialElem {
  double ks;        // int r p' p' (sign pattern [[1,-1],[-1,1]])
  Elem2x2 mass;     // int r p_i p_j
  Elem2x2 inv_r;    // int (1/r) p_i p_j; vertex element keeps only the bb entry
  Elem2x2 flat;     // int p_i p_j
};

RadialElem radial_element(double ra, double rb) {
  const double h = rb - ra;
  RadialElem e;
  e.ks = (ra + rb) / (2.0 * h);
  e.mass = {{{h * (3 * ra + rb) / 12.0, h * (ra + rb) / 12.0},
             {h * (ra + rb) / 12.0, h * (ra + 3 * rb) / 12.0}}};
  e.flat = {{{h / 3.0, h / 6.0}, {h / 6.0, h / 3.0}}};
  if (ra == 0.0) {
    // the vertex basis function carries no angular derivative, so only the
    // ring-side entry of the 1/r block is ever used
    e.inv_r = {{{0.0, 0.0}, {0.0, 0.5}}};
  } else {
    const double lg = std::log(rb / ra);
    const double caa = (rb * rb * lg - 2.0 * rb * h + 0.5 * (rb * rb - ra * ra)) / (h * h);
    const double cbb = (ra * ra * lg + 0.5 * (rb * rb - ra * ra) - 2.0 * ra * h) / (h * h);
    const double cab = (-ra * rb * lg + (ra + rb) * h - 0.5 * (rb * rb - ra * ra)) / (h * h);
    e.inv_r = {{{caa, cab}, {cab, cbb}}};
  }
  return e;
}

// Symmetric accumulation: both triangles receive the same IEEE value.
struct SymBuilder {
  int n;
  std::map<std::pair<int, int>, double> entries;
  void add(int i, int j, double v) {
    if (v == 0.0) return;
    if (i > j) std::swap(i, j);
    entries[{i, j}] += v;
  }
  Eigen::SparseMatrix<double> build() const {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * entries.size());
    for (const auto& [ij, v] : entries) {
      trips.emplace_back(ij.first, ij.second, v);
      if (ij.first != ij.second) trips.emplace_back(ij.second, ij.first, v);
    }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
  }
};

struct ThetaLayout {
  std::vector<double> nodes;      // all angular nodes
  std::vector<int> active_index;  // node -> active dof column, -1 if Dirichlet
  int active_count = 0;
  bool periodic = false;
  std::vector<int> robin_nodes;   // node indices carrying the boundary term
};

AssembledPencil assemble_tensor(const std::vector<double>& R, const ThetaLayout& th,
                                double gamma, bool vertex_allowed, double lower_bound) {
  const int n_r = static_cast<int>(R.size()) - 1;
  const bool vertex = vertex_allowed && R.front() == 0.0;
  const int first_ring = vertex ? 0 : 1;

  // active rings: [first_ring, n_r - 1]; ring n_r is Dirichlet
  std::vector<double> r_active(R.begin() + first_ring, R.end() - 1);
  const int T = th.active_count;
  const int n_rings = static_cast<int>(r_active.size());
  const int ndof = vertex ? 1 + (n_rings - 1) * T : n_rings * T;
  if (ndof <= 0) throw std::invalid_argument("assemble: grid leaves no active nodes");

  auto dof_of = [&](int ring_full, int node_theta) -> int {
    // ring_full indexes R; convert to active ring index
    if (ring_full == n_r) return -1;               // outer Dirichlet
    if (ring_full < first_ring) return -1;         // inner Dirichlet
    const int j = th.active_index[node_theta];
    if (j < 0 && !(vertex && ring_full == 0)) return -1;
    const int ring = ring_full - first_ring;
    if (vertex) return ring == 0 ? 0 : 1 + (ring - 1) * T + j;
    return ring * T + j;
  };

  SymBuilder K{ndof, {}}, M{ndof, {}};
  const int n_telem = th.periodic ? static_cast<int>(th.nodes.size())
                                  : static_cast<int>(th.nodes.size()) - 1;

  for (int e = 0; e < n_r; ++e) {
    const RadialElem re = radial_element(R[e], R[e + 1]);
    const double kr[2][2] = {{re.ks, -re.ks}, {-re.ks, re.ks}};
    for (int t = 0; t < n_telem; ++t) {
      const int ja = t;
      const int jb = th.periodic ? (t + 1) % static_cast<int>(th.nodes.size()) : t + 1;
      double ht = th.periodic && jb == 0 ? kTwoPi + th.nodes[0] - th.nodes[ja]
                                         : th.nodes[jb] - th.nodes[ja];
      const double mt[2][2] = {{ht / 3.0, ht / 6.0}, {ht / 6.0, ht / 3.0}};
      const double at[2][2] = {{1.0 / ht, -1.0 / ht}, {-1.0 / ht, 1.0 / ht}};
      const int jn[2] = {ja, jb};
      for (int ar = 0; ar < 2; ++ar)
        for (int ath = 0; ath < 2; ++ath) {
          const int I = dof_of(e + ar, jn[ath]);
          if (I < 0) continue;
          for (int br = 0; br < 2; ++br)
            for (int bth = 0; bth < 2; ++bth) {
              const int J = dof_of(e + br, jn[bth]);
              if (J < 0 || J < I) continue;  // upper triangle once
              const double kv = kr[ar][br] * mt[ath][bth] + re.inv_r.a[ar][br] * at[ath][bth];
              const double mv = re.mass.a[ar][br] * mt[ath][bth];
              K.add(I, J, kv);
              M.add(I, J, mv);
            }
        }
    }
    // boundary/interaction line terms along the Robin angular nodes
    for (int jr : th.robin_nodes) {
      for (int ar = 0; ar < 2; ++ar) {
        const int I = dof_of(e + ar, jr);
        if (I < 0) continue;
        for (int br = 0; br < 2; ++br) {
          const int J = dof_of(e + br, jr);
          if (J < 0 || J < I) continue;
          K.add(I, J, -gamma * re.flat.a[ar][br]);
        }
      }
    }
  }

  AssembledPencil p;
  p.K = K.build();
  p.M = M.build();
  p.lower_bound = lower_bound;
  p.gamma = gamma;
  p.r_nodes = std::move(r_active);
  p.theta_nodes.clear();
  for (std::size_t i = 0; i < th.nodes.size(); ++i)
    if (th.active_index[i] >= 0) p.theta_nodes.push_back(th.nodes[i]);
  p.periodic = th.periodic;
  p.vertex_dof = vertex;
  return p;
}

}  // namespace

AssembledPencil assemble_sector(const SectorProblem& p, const PolarGrid& g) {
  if (!(p.alpha > 0.0 && p.alpha < 0.5 * kPi))
    throw std::invalid_argument("assemble_sector: alpha must lie in (0, pi/2)");
  if (!(p.gamma > 0.0)) throw std::invalid_argument("assemble_sector: gamma must be positive");
  build_grid(g.r_min, g.r_max, g.n_r, g.grading, g.n_theta);  // validates

  const std::vector<double> R = radial_nodes(g);
  ThetaLayout th;
  th.periodic = false;
  const int nt = g.n_theta;
  const bool half = p.parity != Parity::full;
  const double lo = half ? 0.0 : -p.alpha;
  for (int j = 0; j <= nt; ++j) th.nodes.push_back(lo + (p.alpha - lo) * j / nt);
  th.active_index.assign(nt + 1, -1);
  int c = 0;
  for (int j = 0; j <= nt; ++j) {
    if (p.parity == Parity::odd && j == 0) continue;  // Dirichlet on the bisector
    th.active_index[j] = c++;
  }
  th.active_count = c;
  th.robin_nodes.push_back(nt);
  if (p.parity == Parity::full) th.robin_nodes.insert(th.robin_nodes.begin(), 0);

  const double s = std::sin(p.alpha);
  const double lower = -p.gamma * p.gamma / (s * s);
  const bool vertex_ok = p.parity != Parity::odd;
  return assemble_tensor(R, th, p.gamma, vertex_ok, lower);
}

AssembledPencil assemble_stargraph(const std::vector<double>& angles, double gamma,
                                   const PolarGrid& g) {
  if (angles.empty()) throw std::invalid_argument("assemble_stargraph: need at least one ray");
  if (!(gamma > 0.0)) throw std::invalid_argument("assemble_stargraph: gamma must be positive");
  build_grid(g.r_min, g.r_max, g.n_r, g.grading, g.n_theta);
  const int msize = static_cast<int>(angles.size());
  for (int j = 0; j < msize; ++j) {
    if (!(angles[j] >= 0.0 && angles[j] < kTwoPi))
      throw std::invalid_argument("assemble_stargraph: angles must lie in [0, 2pi)");
    if (j > 0 && !(angles[j] > angles[j - 1] + 1e-12))
      throw std::invalid_argument("assemble_stargraph: angles must be strictly increasing");
  }

  const std::vector<double> R = radial_nodes(g);
  ThetaLayout th;
  th.periodic = true;
  const double h_target = kTwoPi / g.n_theta;
  double beta_min = kPi;  // half of the smallest gap
  for (int j = 0; j < msize; ++j) {
    const double a0 = angles[j];
    const double a1 = (j + 1 < msize) ? angles[j + 1] : angles[0] + kTwoPi;
    const double gap = a1 - a0;
    beta_min = std::min(beta_min, 0.5 * gap);
    th.robin_nodes.push_back(static_cast<int>(th.nodes.size()));
    const int nseg = std::max(1, static_cast<int>(std::lround(gap / h_target)));
    for (int i = 0; i < nseg; ++i) th.nodes.push_back(a0 + gap * i / nseg);
  }
  th.active_index.resize(th.nodes.size());
  for (std::size_t j = 0; j < th.nodes.size(); ++j) th.active_index[j] = static_cast<int>(j);
  th.active_count = static_cast<int>(th.nodes.size());

  const double beta_eff = std::min(beta_min, 0.5 * kPi);
  const double sb = std::sin(beta_eff);
  const double lower = -gamma * gamma / (4.0 * sb * sb);
  return assemble_tensor(R, th, gamma, true, lower);
}

std::vector<double> radial_profile(const AssembledPencil& p, const Eigen::VectorXd& w) {
  if (w.size() != p.rows()) throw std::invalid_argument("radial_profile: vector size mismatch");
  const int T = p.theta_count();
  const int n_rings = static_cast<int>(p.r_nodes.size());
  std::vector<double> prof(n_rings, 0.0);
  const int n_telem = p.periodic ? T : T - 1;
  for (int ring = 0; ring < n_rings; ++ring) {
    if (p.vertex_dof && ring == 0) continue;  // r = 0 contributes nothing
    double acc = 0.0;
    for (int t = 0; t < n_telem; ++t) {
      const int ja = t, jb = p.periodic ? (t + 1) % T : t + 1;
      double ht = p.periodic && jb == 0 ? kTwoPi + p.theta_nodes[0] - p.theta_nodes[ja]
                                        : p.theta_nodes[jb] - p.theta_nodes[ja];
      const double wa = w[p.dof(ring, ja)], wb = w[p.dof(ring, jb)];
      acc += ht * (wa * wa + wa * wb + wb * wb) / 3.0;
    }
    prof[ring] = p.r_nodes[ring] * acc;
  }
  return prof;
}

void write_triplets(const Eigen::SparseMatrix<double>& A, std::ostream& out) {
  out << A.rows() << " " << A.nonZeros() << "\n";
  char buf[64];
  for (int col = 0; col < A.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()),
                    static_cast<int>(it.col()), it.value());
      out << buf;
    }
  }
}

}  // namespace sectorspec
