#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "sectorspec/analysis.hpp"
#include "sectorspec/assemble.hpp"
#include "sectorspec/eigensolve.hpp"
#include "sectorspec/interval.hpp"
#include "sectorspec/model1d.hpp"
#include "sectorspec/report.hpp"
#include "sectorspec/stargraph.hpp"

namespace fs = std::filesystem;
using namespace sectorspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitInvariant = 4;

struct Common {
  std::string config_file;
  std::string out_dir = ".";
  std::string formats = "csv,json";
  double gamma = 1.0;
  int jobs = 0;
  double r_min = -1.0, r_max = -1.0, grading = -1.0;
  int n_r = -1, n_theta = -1;
  double tol = 1e-8;
  int maxit = 400;
  int block = 0;
  std::string precond = "ic";
  int max_levels = 3;
  double scan_tol = 1e-4;
  bool dump_pencil = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_file, "flat-key JSON config; explicit flags win");
  cmd->add_option("--out", c.out_dir, "output directory");
  cmd->add_option("--formats", c.formats, "comma subset of csv,json,svg,pgm");
  cmd->add_option("--gamma", c.gamma, "boundary coupling");
  cmd->add_option("--jobs", c.jobs, "worker pool size (0 = hardware)");
  cmd->add_option("--r-min", c.r_min, "inner radius (0 keeps the vertex node)");
  cmd->add_option("--r-max", c.r_max, "outer truncation radius");
  cmd->add_option("--n-r", c.n_r, "radial elements");
  cmd->add_option("--n-theta", c.n_theta, "angular elements");
  cmd->add_option("--grading", c.grading, "geometric radial grading ratio");
  cmd->add_option("--tol", c.tol, "eigensolver residual tolerance");
  cmd->add_option("--maxit", c.maxit, "eigensolver iteration cap");
  cmd->add_option("--block", c.block, "eigensolver block size (0 = auto)");
  cmd->add_option("--precond", c.precond, "preconditioner: ic, diag, none");
  cmd->add_option("--max-levels", c.max_levels, "mesh ladder depth");
  cmd->add_option("--scan-tol", c.scan_tol, "two-mesh relative convergence target");
  cmd->add_flag("--dump-pencil", c.dump_pencil, "export the assembled pencil as triplets");
}

// config file fills any option the command line left untouched
void apply_config(CLI::App* cmd, Common& c) {
  if (c.config_file.empty()) return;
  std::ifstream f(c.config_file);
  if (!f) throw CLI::ValidationError("--config", "cannot open " + c.config_file);
  json j = json::parse(f);
  auto maybe = [&](const char* flag, auto& target) {
    std::string key = flag + 2;  // strip "--"
    std::replace(key.begin(), key.end(), '-', '_');
    if (cmd->count(flag) == 0 && j.contains(key)) j.at(key).get_to(target);
  };
  maybe("--out", c.out_dir);
  maybe("--formats", c.formats);
  maybe("--gamma", c.gamma);
  maybe("--jobs", c.jobs);
  maybe("--r-min", c.r_min);
  maybe("--r-max", c.r_max);
  maybe("--n-r", c.n_r);
  maybe("--n-theta", c.n_theta);
  maybe("--grading", c.grading);
  maybe("--tol", c.tol);
  maybe("--maxit", c.maxit);
  maybe("--block", c.block);
  maybe("--precond", c.precond);
  maybe("--max-levels", c.max_levels);
  maybe("--scan-tol", c.scan_tol);
}

SolverConfig solver_from(const Common& c) {
  SolverConfig cfg;
  cfg.tolerance = c.tol;
  cfg.max_iterations = c.maxit;
  cfg.block_size = c.block;
  if (c.precond == "diag")
    cfg.preconditioner = SolverConfig::Precond::diagonal;
  else if (c.precond == "none")
    cfg.preconditioner = SolverConfig::Precond::none;
  else if (c.precond == "ic")
    cfg.preconditioner = SolverConfig::Precond::incomplete_factor;
  else
    throw CLI::ValidationError("--precond", "expected ic, diag or none");
  return cfg;
}

MeshPolicy policy_from(const Common& c) {
  MeshPolicy p;
  p.max_levels = c.max_levels;
  p.rel_tol = c.scan_tol;
  p.jobs = c.jobs;
  p.solver = solver_from(c);
  return p;
}

bool has_format(const Common& c, const std::string& fmt) {
  return c.formats.find(fmt) != std::string::npos;
}

json common_json(const Common& c, const std::string& command) {
  json j;
  j["command"] = command;
  j["version"] = SECTORSPEC_VERSION;
  j["out"] = c.out_dir;
  j["formats"] = c.formats;
  j["gamma"] = c.gamma;
  j["jobs"] = c.jobs;
  j["r_min"] = c.r_min;
  j["r_max"] = c.r_max;
  j["n_r"] = c.n_r;
  j["n_theta"] = c.n_theta;
  j["grading"] = c.grading;
  j["tol"] = c.tol;
  j["maxit"] = c.maxit;
  j["block"] = c.block;
  j["precond"] = c.precond;
  j["max_levels"] = c.max_levels;
  j["scan_tol"] = c.scan_tol;
  return j;
}

void emit(const Common& c, const std::string& command, const json& resolved,
          const json& report, const std::vector<std::string>& csv_header,
          const std::vector<std::vector<double>>& csv_rows) {
  fs::create_directories(c.out_dir);
  const std::string hash = config_hash(resolved);
  json full = report;
  full["command"] = command;
  full["version"] = SECTORSPEC_VERSION;
  full["config_hash"] = hash;
  full["config"] = resolved;
  write_file(c.out_dir + "/config.resolved.json", resolved.dump(2) + "\n");
  if (has_format(c, "json"))
    write_file(c.out_dir + "/" + command + "_report.json", full.dump(2) + "\n");
  if (has_format(c, "csv") && !csv_header.empty()) {
    std::string csv = "# config_hash=" + hash + "\n" + csv_table(csv_header, csv_rows);
    write_file(c.out_dir + "/" + command + "_table.csv", csv);
  }
}

std::vector<double> parse_value_list(const std::string& spec) {
  // either "a,b,c" or "lo:hi:linear|geometric:count"
  std::vector<double> out;
  if (spec.find(':') == std::string::npos) {
    std::string tok;
    for (std::size_t i = 0; i <= spec.size(); ++i) {
      if (i == spec.size() || spec[i] == ',') {
        if (!tok.empty()) out.push_back(std::stod(tok));
        tok.clear();
      } else {
        tok += spec[i];
      }
    }
    return out;
  }
  std::vector<std::string> parts;
  std::string tok;
  for (std::size_t i = 0; i <= spec.size(); ++i) {
    if (i == spec.size() || spec[i] == ':') {
      parts.push_back(tok);
      tok.clear();
    } else {
      tok += spec[i];
    }
  }
  if (parts.size() < 2) throw CLI::ValidationError("range", "expected lo:hi[:mode][:count]");
  const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
  std::string mode = parts.size() > 2 ? parts[2] : "linear";
  int count = parts.size() > 3 ? std::stoi(parts[3]) : 0;
  if (mode != "linear" && mode != "geometric")
    throw CLI::ValidationError("range", "mode must be linear or geometric");
  if (count <= 0) count = static_cast<int>(std::lround(hi - lo)) + 1;
  if (count < 2) count = 2;
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    out.push_back(mode == "linear" ? lo + (hi - lo) * s
                                   : lo * std::pow(hi / lo, s));
  }
  return out;
}

PolarGrid grid_from(const Common& c, const PolarGrid& fallback) {
  PolarGrid g = fallback;
  if (c.r_min >= 0.0) g.r_min = c.r_min;
  if (c.r_max > 0.0) g.r_max = c.r_max;
  if (c.n_r > 0) g.n_r = c.n_r;
  if (c.n_theta > 0) g.n_theta = c.n_theta;
  if (c.grading >= 1.0) g.grading = c.grading;
  return g;
}

bool explicit_grid(const Common& c) {
  return c.r_max > 0.0 || c.n_r > 0 || c.n_theta > 0 || c.grading >= 1.0 || c.r_min >= 0.0;
}

int cmd_interval(const Common& c, const std::string& gamma_spec, const std::string& L_spec) {
  std::vector<double> gammas = gamma_spec.empty() ? std::vector<double>{c.gamma}
                                                  : parse_value_list(gamma_spec);
  std::vector<double> Ls = L_spec.empty() ? std::vector<double>{1.0} : parse_value_list(L_spec);
  std::vector<std::vector<double>> rows;
  for (double L : Ls) {
    for (double g : gammas) {
      IntervalProblem p{L, g};
      const double e2 = e2_interval(p);
      double m = 0.0, e1 = 0.0, de1 = 0.0, phi = 0.0, gap = 0.0;
      if (g > 0) {
        m = solve_m(g * L);
        e1 = e1_interval(p);
        de1 = d_e1_d_gamma(p);
        phi = phi_of_gamma(g);
        gap = e1 + g * g + 4.0 * g * g * std::exp(-2.0 * g * L);
      }
      rows.push_back({L, g, m, e1, e2, de1, phi, gap});
    }
  }
  json resolved = common_json(c, "interval");
  resolved["scan_gamma"] = gamma_spec;
  resolved["scan_L"] = L_spec;
  json report;
  report["rows"] = json::array();
  for (const auto& r : rows) {
    report["rows"].push_back({{"L", r[0]},
                              {"gamma", r[1]},
                              {"m", r[2]},
                              {"E1", r[3]},
                              {"E2", r[4]},
                              {"dE1_dgamma", r[5]},
                              {"phi", r[6]},
                              {"E1_gap_asym", r[7]}});
  }
  emit(c, "interval", resolved, report,
       {"L", "gamma", "m", "E1", "E2", "dE1_dgamma", "phi", "E1_gap_asym"}, rows);
  return kExitOk;
}

void dump_pencil_files(const Common& c, const AssembledPencil& pencil) {
  fs::create_directories(c.out_dir);
  std::ofstream fk(c.out_dir + "/pencil_K.txt"), fm(c.out_dir + "/pencil_M.txt");
  write_triplets(pencil.K, fk);
  write_triplets(pencil.M, fm);
}

void heatmap_file(const Common& c, const AssembledPencil& pencil, const Eigen::VectorXd& w,
                  const std::string& path) {
  const int nr = static_cast<int>(pencil.r_nodes.size());
  const int nt = pencil.theta_count();
  std::vector<double> img(static_cast<std::size_t>(nr) * nt, 0.0);
  double peak = 1e-300;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double v = std::sqrt(pencil.r_nodes[i]) * std::abs(w[pencil.dof(i, j)]);
      img[static_cast<std::size_t>(j) * nr + i] = v;
      peak = std::max(peak, v);
    }
  }
  for (double& v : img) v /= peak;
  write_file(path, pgm16(nr, nt, img));
}

int cmd_sector(const Common& c, double alpha, int k, bool heatmap) {
  json resolved = common_json(c, "sector");
  resolved["alpha"] = alpha;
  resolved["k"] = k;
  resolved["heatmap"] = heatmap;

  MeshPolicy policy = policy_from(c);
  AlphaScan scan;
  PolarGrid grid;
  if (explicit_grid(c)) {
    grid = grid_from(c, auto_sector_grid(alpha, k, 0));
    policy.max_levels = 1;
    // single-shot entry assembled below
  } else {
    grid = auto_sector_grid(alpha, k, 0);
  }
  scan = scan_alpha({alpha}, k, policy, c.gamma);
  ScanEntry& entry = scan.entries[0];
  const PolarGrid used = explicit_grid(c) ? grid : entry.final_grid;

  AssembledPencil pencil = assemble_sector(SectorProblem{alpha, c.gamma, Parity::even}, used);
  auto modes = solve_lowest(pencil.K, pencil.M, pencil.lower_bound, k, policy.solver);

  json report;
  report["alpha"] = alpha;
  report["lower_bound"] = pencil.lower_bound;
  report["count_below_threshold"] = entry.count_below_threshold;
  report["converged"] = entry.converged;
  report["levels_used"] = entry.levels_used;
  report["grid"] = {{"r_min", used.r_min},
                    {"r_max", used.r_max},
                    {"n_r", used.n_r},
                    {"n_theta", used.n_theta},
                    {"grading", used.grading}};
  report["modes"] = json::array();
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < k; ++j) {
    const auto& m = modes[j];
    json jm = {{"value", entry.values.size() > static_cast<std::size_t>(j) ? entry.values[j] : m.value},
               {"discrete_value", m.value},
               {"residual", m.residual},
               {"enclosure_lo", m.enclosure.lo},
               {"enclosure_hi", m.enclosure.hi},
               {"enclosure_valid", m.enclosure.valid}};
    report["modes"].push_back(jm);
    rows.push_back({static_cast<double>(j + 1), m.value, m.residual, m.enclosure.lo,
                    m.enclosure.hi});
  }
  if (modes[0].value < -c.gamma * c.gamma) {
    DecayFit fit = agmon_decay_rate(modes[0], pencil);
    report["agmon"] = {{"rate", fit.rate},
                       {"window_lo", fit.r_lo},
                       {"window_hi", fit.r_hi},
                       {"goodness", fit.goodness},
                       {"reference_rate", std::sqrt(-c.gamma * c.gamma - modes[0].value > 0
                                                        ? -c.gamma * c.gamma - modes[0].value
                                                        : 0.0)}};
  }
  if (c.dump_pencil) dump_pencil_files(c, pencil);
  if (heatmap && has_format(c, "pgm")) {
    fs::create_directories(c.out_dir);
    heatmap_file(c, pencil, modes[0].vector, c.out_dir + "/sector_eigfun.pgm");
  }
  emit(c, "sector", resolved, report,
       {"n", "value", "residual", "enclosure_lo", "enclosure_hi"}, rows);
  return entry.converged ? kExitOk : kExitNoConverge;
}

int cmd_scan(const Common& c, const std::string& alphas_spec, int k, bool logx) {
  auto alphas = parse_value_list(alphas_spec);
  std::sort(alphas.begin(), alphas.end());
  json resolved = common_json(c, "scan");
  resolved["alphas"] = alphas_spec;
  resolved["k"] = k;

  AlphaScan scan = scan_alpha(alphas, k, policy_from(c), c.gamma);
  std::vector<std::vector<double>> rows;
  json jrows = json::array();
  bool all_converged = true;
  for (const auto& e : scan.entries) {
    std::vector<double> row{e.alpha};
    for (int j = 0; j < k; ++j) row.push_back(e.values[j]);
    for (int j = 0; j < k; ++j)
      row.push_back(e.enclosures[j].valid ? e.enclosures[j].hi - e.enclosures[j].lo : -1.0);
    row.push_back(static_cast<double>(e.count_below_threshold));
    row.push_back(e.converged ? 1.0 : 0.0);
    rows.push_back(row);
    all_converged = all_converged && e.converged;
    jrows.push_back({{"alpha", e.alpha},
                     {"values", e.values},
                     {"discrete_values", e.discrete_values},
                     {"count", e.count_below_threshold},
                     {"converged", e.converged},
                     {"levels_used", e.levels_used},
                     {"last_rel_change", e.last_rel_change},
                     {"observed_order", e.observed_order},
                     {"grid_n_r", e.final_grid.n_r},
                     {"grid_n_theta", e.final_grid.n_theta},
                     {"grid_r_max", e.final_grid.r_max}});
  }
  std::vector<std::string> header{"alpha"};
  for (int j = 1; j <= k; ++j) header.push_back("E" + std::to_string(j));
  for (int j = 1; j <= k; ++j) header.push_back("width" + std::to_string(j));
  header.push_back("count");
  header.push_back("converged");
  json report;
  report["rows"] = jrows;
  emit(c, "scan", resolved, report, header, rows);
  if (has_format(c, "svg")) {
    std::vector<Series> series(k);
    for (int j = 0; j < k; ++j) {
      series[j].label = "E" + std::to_string(j + 1);
      for (const auto& e : scan.entries) {
        series[j].x.push_back(e.alpha);
        series[j].y.push_back(e.values[j]);
      }
    }
    write_file(c.out_dir + "/scan_curves.svg",
               svg_line_plot("eigenvalues vs half-opening", "alpha", "E_n", series, logx));
  }
  return all_converged ? kExitOk : kExitNoConverge;
}

int cmd_fit(const Common& c, const std::string& alphas_spec, int n, int order) {
  auto alphas = parse_value_list(alphas_spec);
  std::sort(alphas.begin(), alphas.end());
  json resolved = common_json(c, "fit");
  resolved["alphas"] = alphas_spec;
  resolved["n"] = n;
  resolved["order"] = order;

  MeshPolicy policy = policy_from(c);
  AlphaScan scan = scan_alpha(alphas, n, policy, c.gamma);
  ExpansionFit fit = fit_expansion(scan, n, order);
  const double lam1_quad = lambda1_quadrature(n);

  json report;
  report["n"] = n;
  report["order"] = order;
  report["coefficients"] = fit.coefficients;
  report["condition"] = fit.condition;
  report["residual_norm"] = fit.residual_norm;
  report["lambda1_quadrature"] = lam1_quad;
  if (fit.coefficients.size() > 1 && lam1_quad != 0.0)
    report["lambda1_rel_dev"] = std::abs(fit.coefficients[1] - lam1_quad) / std::abs(lam1_quad);
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
    rows.push_back({static_cast<double>(j), fit.coefficients[j]});
  emit(c, "fit", resolved, report, {"j", "lambda_j"}, rows);
  bool all_converged = true;
  for (const auto& e : scan.entries) all_converged = all_converged && e.converged;
  return all_converged ? kExitOk : kExitNoConverge;
}

int cmd_count(const Common& c, const std::string& alphas_spec, int k) {
  auto alphas = parse_value_list(alphas_spec);
  std::sort(alphas.begin(), alphas.end());
  json resolved = common_json(c, "count");
  resolved["alphas"] = alphas_spec;
  resolved["k"] = k;

  if (k <= 0) {
    const double amin = alphas.front();
    k = std::min(12, std::max(2, static_cast<int>(std::ceil(0.5 * (1.0 / amin + 1.0)))));
  }
  AlphaScan scan = scan_alpha(alphas, k, policy_from(c), c.gamma);
  CountGrowth growth = count_growth(scan);

  json report;
  report["kappa_hat"] = growth.kappa_hat;
  report["c_empirical"] = growth.c_empirical;
  report["counts_monotone"] = growth.counts_monotone;
  report["table"] = json::array();
  std::vector<std::vector<double>> rows;
  for (const auto& [alpha, count] : growth.table) {
    report["table"].push_back({{"alpha", alpha}, {"count", count}});
    rows.push_back({alpha, static_cast<double>(count), count * alpha});
  }
  emit(c, "count", resolved, report, {"alpha", "count", "count_times_alpha"}, rows);
  if (!growth.counts_monotone) return kExitInvariant;
  bool all_converged = true;
  for (const auto& e : scan.entries) all_converged = all_converged && e.converged;
  return all_converged ? kExitOk : kExitNoConverge;
}

int cmd_stargraph(const Common& c, const std::string& angles_spec, int /*k*/) {
  auto angles = parse_value_list(angles_spec);
  json resolved = common_json(c, "stargraph");
  resolved["angles"] = angles_spec;

  StarGraph star = make_star(angles, c.gamma);
  StarReport rep = verify_counting(star, policy_from(c));

  json report;
  report["angles"] = star.angles;
  report["gamma"] = star.gamma;
  report["essential_threshold"] = rep.essential_threshold;
  report["half_gaps"] = rep.half_gaps;
  report["sector_counts"] = rep.sector_counts;
  report["bound"] = rep.bound;
  report["direct_count"] = rep.direct_count;
  report["direct_eigenvalues"] = rep.direct_eigenvalues;
  report["inequality_holds"] = rep.inequality_holds;
  report["converged"] = rep.converged;
  json encl = json::array();
  for (const auto& e : rep.enclosures)
    encl.push_back({{"lo", e.lo}, {"hi", e.hi}, {"valid", e.valid}, {"eps", e.eps}});
  report["enclosures"] = encl;

  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < rep.direct_eigenvalues.size(); ++j) {
    rows.push_back({static_cast<double>(j + 1), rep.direct_eigenvalues[j],
                    rep.enclosures[j].lo, rep.enclosures[j].hi});
  }
  emit(c, "stargraph", resolved, report, {"n", "value", "enclosure_lo", "enclosure_hi"}, rows);
  if (c.dump_pencil) {
    AssembledPencil pencil =
        assemble_stargraph(star.angles, star.gamma, auto_star_grid(star.gamma, 0));
    dump_pencil_files(c, pencil);
  }
  if (!rep.inequality_holds) {
    std::ofstream dump(c.out_dir + "/stargraph_violation_dump.json");
    dump << report.dump(2) << "\n";
    std::cerr << "counting inequality violated; state dumped\n";
    return kExitInvariant;
  }
  return rep.converged ? kExitOk : kExitNoConverge;
}

int cmd_certify(const Common& c, double alpha, int k, int random_trials) {
  json resolved = common_json(c, "certify");
  resolved["alpha"] = alpha;
  resolved["k"] = k;
  resolved["random_trials"] = random_trials;

  json report;
  std::vector<std::vector<double>> rows;
  bool converged = true;
  if (alpha > 0.0) {
    PolarGrid g = explicit_grid(c) ? grid_from(c, auto_sector_grid(alpha, k, 0))
                                   : auto_sector_grid(alpha, k, 1);
    AssembledPencil pencil = assemble_sector(SectorProblem{alpha, c.gamma, Parity::even}, g);
    auto modes = solve_lowest(pencil.K, pencil.M, pencil.lower_bound, k, solver_from(c));
    report["modes"] = json::array();
    for (int j = 0; j < k; ++j) {
      const auto& m = modes[j];
      converged = converged && m.converged;
      report["modes"].push_back({{"value", m.value},
                                 {"residual", m.residual},
                                 {"eps", m.enclosure.eps},
                                 {"lo", m.enclosure.lo},
                                 {"hi", m.enclosure.hi},
                                 {"valid", m.enclosure.valid}});
      rows.push_back({static_cast<double>(j + 1), m.value, m.enclosure.eps, m.enclosure.lo,
                      m.enclosure.hi});
    }
  }
  if (random_trials > 0) {
    std::mt19937 rng(20240915u);
    std::uniform_real_distribution<double> unif(0.5, 5.0);
    std::uniform_int_distribution<int> dim(5, 50);
    int sound = 0;
    for (int t = 0; t < random_trials; ++t) {
      const int n = dim(rng);
      Eigen::MatrixXd Q = Eigen::MatrixXd::NullaryExpr(
          n, n, [&]() { return std::uniform_real_distribution<double>(-1, 1)(rng); });
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(Q);
      Eigen::MatrixXd U = qr.householderQ();
      Eigen::VectorXd ev(n);
      for (int i = 0; i < n; ++i) ev(i) = unif(rng);
      Eigen::MatrixXd T = U * ev.asDiagonal() * U.transpose();
      T = 0.5 * (T + T.transpose().eval());
      Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(
          n, [&]() { return std::uniform_real_distribution<double>(-1, 1)(rng); });
      const double lambda = u.dot(T * u) / u.dot(u);
      Enclosure e = certify_quasimode(T, u, lambda);
      if (!e.valid) continue;
      bool hit = false;
      for (int i = 0; i < n; ++i)
        if (ev(i) >= e.lo - 1e-12 && ev(i) <= e.hi + 1e-12) hit = true;
      if (hit) ++sound;
      else {
        report["unsound_trial"] = t;
      }
    }
    report["random_trials"] = random_trials;
    report["random_sound"] = sound;
  }
  emit(c, "certify", resolved, report, {"n", "value", "eps", "lo", "hi"}, rows);
  if (report.contains("unsound_trial")) return kExitInvariant;
  return converged ? kExitOk : kExitNoConverge;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral toolkit for Robin Laplacians on planar sectors and "
               "delta interactions on star graphs"};
  app.require_subcommand(1);

  Common c_interval, c_sector, c_scan, c_fit, c_count, c_star, c_cert;
  std::string gamma_spec, L_spec, alphas_spec, fit_alphas, count_alphas, angles_spec;
  double alpha = 0.0, cert_alpha = 0.0;
  int k_sector = 1, k_scan = 4, fit_n = 1, fit_order = 2, k_count = 0, k_star = 4, k_cert = 1;
  int random_trials = 0;
  bool heatmap = false, logx = false;

  auto* ci = app.add_subcommand("interval", "transverse 1D Robin quantities");
  add_common(ci, c_interval);
  ci->add_option("--scan-gamma", gamma_spec, "gamma list or lo:hi[:mode][:count]");
  ci->add_option("--L", L_spec, "half-length list or range (default 1)");
  ci->add_option("--scan-L", L_spec, "alias of --L");

  auto* cs = app.add_subcommand("sector", "single-opening sector study");
  add_common(cs, c_sector);
  cs->add_option("--alpha", alpha, "half-opening in (0, pi/2)")->required();
  cs->add_option("--k", k_sector, "eigenpairs to compute");
  cs->add_flag("--heatmap", heatmap, "write an eigenfunction heatmap (needs pgm format)");

  auto* csc = app.add_subcommand("scan", "eigenvalue curves over openings");
  add_common(csc, c_scan);
  csc->add_option("--alphas", alphas_spec, "list or lo:hi:mode:count")->required();
  csc->add_option("--k", k_scan, "eigenvalues per opening");
  csc->add_flag("--log-x", logx, "logarithmic alpha axis in the plot");

  auto* cf = app.add_subcommand("fit", "small-opening expansion coefficients");
  add_common(cf, c_fit);
  cf->add_option("--alphas", fit_alphas, "scan angles (all <= 0.2)")->required();
  cf->add_option("--n", fit_n, "eigenvalue branch");
  cf->add_option("--order", fit_order, "highest power of alpha^2");

  auto* cc = app.add_subcommand("count", "bound-state counting at small openings");
  add_common(cc, c_count);
  cc->add_option("--alphas", count_alphas, "list or range")->required();
  cc->add_option("--k", k_count, "eigenvalues per opening (0 = auto)");

  auto* cg = app.add_subcommand("stargraph", "delta interaction on a star of rays");
  add_common(cg, c_star);
  cg->add_option("--angles", angles_spec, "ray angles in radians, comma separated")->required();
  cg->add_option("--k", k_star, "eigenpairs to report");

  auto* cq = app.add_subcommand("certify", "residual certificates for eigenvalue enclosures");
  add_common(cq, c_cert);
  cq->add_option("--alpha", cert_alpha, "sector to certify (0 = skip)");
  cq->add_option("--k", k_cert, "eigenpairs to certify");
  cq->add_option("--random-trials", random_trials, "random SPD self-check trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (ci->parsed()) {
      apply_config(ci, c_interval);
      return cmd_interval(c_interval, gamma_spec, L_spec);
    }
    if (cs->parsed()) {
      apply_config(cs, c_sector);
      return cmd_sector(c_sector, alpha, k_sector, heatmap);
    }
    if (csc->parsed()) {
      apply_config(csc, c_scan);
      return cmd_scan(c_scan, alphas_spec, k_scan, logx);
    }
    if (cf->parsed()) {
      apply_config(cf, c_fit);
      return cmd_fit(c_fit, fit_alphas, fit_n, fit_order);
    }
    if (cc->parsed()) {
      apply_config(cc, c_count);
      return cmd_count(c_count, count_alphas, k_count);
    }
    if (cg->parsed()) {
      apply_config(cg, c_star);
      return cmd_stargraph(c_star, angles_spec, k_star);
    }
    if (cq->parsed()) {
      apply_config(cq, c_cert);
      return cmd_certify(c_cert, cert_alpha, k_cert, random_trials);
    }
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConverge;
  }
  return kExitUsage;
}
