// Command-line front end: build a named problem, run a solver, and emit
// solution dumps, run manifests, tables, and laminate trees.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "r1ce/laminates.hpp"
#include "r1ce/oracle.hpp"
#include "r1ce/parallel.hpp"
#include "r1ce/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace r1ce;

namespace {

// Sampling seed for the directional-resolution estimator; fixed so manifests
// reproduce bit-exactly.
constexpr std::uint64_t kResolutionSeed = 12345;

std::string normalize_tag(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
  return out;
}

ProblemOptions make_options(int n, const std::vector<double>& bounds,
                            const std::string& directions) {
  ProblemOptions opt;
  opt.n = n;
  opt.directions = directions;
  if (!bounds.empty()) {
    if (bounds.size() == 2) {
      opt.lower = {bounds[0]};
      opt.upper = {bounds[1]};
    } else if (bounds.size() % 2 == 0) {
      std::size_t half = bounds.size() / 2;
      opt.lower.assign(bounds.begin(), bounds.begin() + static_cast<std::ptrdiff_t>(half));
      opt.upper.assign(bounds.begin() + static_cast<std::ptrdiff_t>(half), bounds.end());
    } else {
      throw std::invalid_argument("--bounds expects 'lo hi' or dim lows followed by dim highs");
    }
  }
  return opt;
}

std::optional<std::int64_t> origin_flat(const UniformGrid& g) {
  int idx[UniformGrid::kMaxDim] = {0, 0, 0, 0};
  for (int k = 0; k < g.dim(); ++k) {
    double t = (0.0 - g.lower(k)) / g.h();
    int i = static_cast<int>(std::lround(t)) + g.pad();
    if (i < g.pad() || i >= g.pad() + g.points(k)) return std::nullopt;
    if (std::abs(g.coord(k, i)) > 1e-9 * std::max(1.0, g.h())) return std::nullopt;
    idx[k] = i;
  }
  return g.flatten(idx);
}

double max_error_vs_analytic(const EnvelopeProblem& p, const GridFunction& u) {
  double err = 0.0;
  double x[UniformGrid::kMaxDim];
  for (std::int64_t f = 0; f < p.grid->total(); ++f) {
    if (p.cls[static_cast<std::size_t>(f)] != PointClass::Interior) continue;
    p.grid->point(f, x);
    err = std::max(err, std::abs(u[f] - p.analytic(x)));
  }
  return err;
}

json manifest_json(const EnvelopeProblem& p, const SolveResult& res, const SolverConfig& cfg,
                   double kappa, const std::string& dump_path) {
  const UniformGrid& g = *p.grid;
  json m;
  m["problem"] = p.id;
  m["dim"] = g.dim();
  std::vector<double> lo, hi;
  std::vector<int> npts;
  for (int k = 0; k < g.dim(); ++k) {
    lo.push_back(g.lower(k));
    hi.push_back(g.upper(k));
    npts.push_back(g.points(k));
  }
  m["bounds"] = {{"lower", lo}, {"upper", hi}};
  m["points_per_axis"] = npts;
  m["h"] = g.h();
  m["pad_cells"] = g.pad();
  json dirs;
  dirs["id"] = p.directions.id;
  dirs["count"] = p.directions.size();
  dirs["width"] = p.directions.width();
  std::vector<std::vector<int>> dlist;
  for (const auto& v : p.directions.dirs)
    dlist.emplace_back(v.e.begin(), v.e.begin() + v.dim);
  dirs["vectors"] = dlist;
  m["direction_set"] = dirs;
  m["solver"] = {{"strategy", strategy_name(cfg.strategy)},
                 {"tol", cfg.tol},
                 {"max_iterations", cfg.max_iterations},
                 {"hybrid_outer", cfg.hybrid_outer},
                 {"hybrid_inner", cfg.hybrid_inner},
                 {"threads", get_threads()}};
  m["kappa"] = kappa;
  m["resolution_seed"] = kResolutionSeed;
  m["artifacts"] = {{"solution", dump_path}};
  m["iterations"] = res.iterations;
  m["converged"] = res.converged;
  m["final_change"] = res.final_change;
  m["timings"] = {{"solve_seconds", res.seconds}};
  m["residual"] = {{"max_residual", res.audit.max_residual},
                   {"max_convexity_violation", res.audit.max_convexity_violation}};
  return m;
}

void add_reports(json& m, const EnvelopeProblem& p, const GridFunction& u, double kappa) {
  const UniformGrid& g = *p.grid;
  if (auto f0 = origin_flat(g)) m["origin_value"] = u[*f0];
  if (p.analytic) m["error_vs_analytic"] = max_error_vs_analytic(p, u);
  if (!p.wells.empty()) {
    try {
      LevelSet ls = extract_level_set(p, u, kappa);
      double cell = std::pow(g.h(), g.dim());
      m["level_set"] = {{"kappa", kappa},
                        {"count", static_cast<std::int64_t>(ls.points.size())},
                        {"measure", static_cast<double>(ls.points.size()) * cell},
                        {"support_count", ls.support_count}};
    } catch (const EmptyLevelSetError&) {
      m["level_set"] = {{"kappa", kappa}, {"count", 0}, {"measure", 0.0}, {"support_count", 0}};
    }
  }
}

struct SolveFlags {
  std::string problem;
  int n = 0;
  std::vector<double> bounds;
  std::string directions;
  std::string solver = "hybrid";
  double tol = 1e-8;
  std::int64_t max_iter = 50000;
  double kappa = 1.0;
  int threads = 0;
  std::string out = "out";
};

int run_solve(const SolveFlags& fl) {
  if (fl.threads > 0) set_threads(fl.threads);
  std::string tag = normalize_tag(fl.problem);
  EnvelopeProblem p = build_problem(tag, make_options(fl.n, fl.bounds, fl.directions));

  SolverConfig cfg;
  cfg.strategy = parse_strategy(fl.solver);
  cfg.tol = fl.tol;
  cfg.max_iterations = fl.max_iter;
  SolveResult res = solve(p, cfg);

  fs::create_directories(fl.out);
  std::string base = sanitize(tag) + "_n" + std::to_string(p.grid->points(0)) + "_" +
                     sanitize(p.directions.id) + "_" + fl.solver;
  std::string dump_path = (fs::path(fl.out) / (base + ".gfd")).string();
  dump_gfd(dump_path, res.u, p.directions.id, tag);

  json m = manifest_json(p, res, cfg, fl.kappa, dump_path);
  add_reports(m, p, res.u, fl.kappa);
  std::string man_path = (fs::path(fl.out) / (base + ".manifest.json")).string();
  std::ofstream mf(man_path);
  mf << m.dump(2) << "\n";
  mf.close();

  std::cout << "problem " << p.id << "  grid " << p.grid->points(0) << "^" << p.grid->dim()
            << "  directions " << p.directions.id << " (" << p.directions.size() << ")\n"
            << "solver " << strategy_name(cfg.strategy) << "  iterations " << res.iterations
            << "  final change " << res.final_change << "  " << res.seconds << " s\n"
            << "residual " << res.audit.max_residual << "  wrote " << dump_path << "\n";
  if (m.contains("origin_value"))
    std::cout << "origin value " << m["origin_value"].get<double>() << "\n";
  if (m.contains("error_vs_analytic"))
    std::cout << "error vs analytic " << m["error_vs_analytic"].get<double>() << "\n";
  if (m.contains("level_set"))
    std::cout << "level set count " << m["level_set"]["count"].get<std::int64_t>() << "  measure "
              << m["level_set"]["measure"].get<double>() << "\n";
  std::cout << "manifest " << man_path << "\n";

  if (!res.converged) {
    std::cerr << "error: max iterations exceeded (change " << res.final_change << " > tol "
              << cfg.tol << ")\n";
    return 2;
  }
  return 0;
}

struct LaminateFlags {
  std::string input;
  std::vector<double> barycenter;
  std::string directions;  // override when the dump id is not a builder name
  double kappa = 1.0;
  int max_depth = 20;
  int initial_direction = -1;
  std::string out = "out";
};

int run_laminate(const LaminateFlags& fl) {
  GfdFile dump = load_gfd(fl.input);
  const UniformGrid& g = *dump.u.grid;

  ProblemOptions opt;
  opt.n = g.points(0);
  for (int k = 0; k < g.dim(); ++k) {
    if (g.points(k) != g.points(0))
      throw std::invalid_argument("anisotropic grids are not supported by the laminate command");
    opt.lower.push_back(g.lower(k));
    opt.upper.push_back(g.upper(k));
  }
  opt.pad = g.pad();
  opt.directions = fl.directions.empty() ? dump.direction_set_id : fl.directions;
  EnvelopeProblem p = build_problem(normalize_tag(dump.problem_id), opt);
  if (!(*p.grid == g))
    throw std::invalid_argument("rebuilt problem grid does not match the dump header");

  std::vector<double> bary(static_cast<std::size_t>(g.dim()), 0.0);
  if (!fl.barycenter.empty()) {
    if (fl.barycenter.size() != static_cast<std::size_t>(g.dim()))
      throw std::invalid_argument("--barycenter needs one value per dimension");
    bary = fl.barycenter;
  }

  LaminateOptions lopt;
  lopt.kappa = fl.kappa;
  lopt.max_depth = fl.max_depth;
  lopt.initial_direction = fl.initial_direction;
  Laminate lam = extract_laminate(p, dump.u, bary, lopt);
  SupportWeights sw = support_weights(lam, p);
  LaminateCheck chk = verify_laminate(g, lam);

  fs::create_directories(fl.out);
  std::string base = sanitize(normalize_tag(dump.problem_id)) + "_laminate";
  std::string jpath = (fs::path(fl.out) / (base + ".json")).string();
  std::string dpath = (fs::path(fl.out) / (base + ".dot")).string();
  std::string cpath = (fs::path(fl.out) / (base + "_leaves.csv")).string();
  laminate_to_json(jpath, lam, p, p.wells.empty() ? nullptr : &sw);
  laminate_to_dot(dpath, lam);
  leaves_to_csv(cpath, lam, p);

  if (g.dim() == 4) {  // planar projections of the leaf measure
    for (auto [name, a, b] : {std::tuple<const char*, int, int>{"proj_xw", 0, 3},
                              std::tuple<const char*, int, int>{"proj_yw", 1, 2}}) {
      std::ofstream pf((fs::path(fl.out) / (base + "_" + name + ".csv")).string());
      pf << "u,v,weight\n";
      double x[UniformGrid::kMaxDim];
      for (const auto& [flat, w] : laminate_leaves(lam)) {
        g.point(flat, x);
        pf << x[a] << "," << x[b] << "," << w << "\n";
      }
    }
  }

  std::cout << "laminate leaves " << lam.leaf_count << "  depth " << lam.max_depth_reached
            << "  per-node identity " << (chk.per_node_exact ? "exact" : "VIOLATED")
            << "  recombination error " << chk.recombination_error << "\n";
  if (!p.wells.empty()) {
    std::cout << "upsilon";
    for (double v : sw.upsilon) std::cout << " " << v;
    std::cout << "  bar " << sw.bar << "\n";
  }
  std::cout << "wrote " << jpath << " " << dpath << " " << cpath << "\n";
  return 0;
}

struct TableFlags {
  std::string suite;
  int threads = 0;
  std::string out = "out";
};

SolveResult table_solve(const std::string& tag, const ProblemOptions& opt, Strategy strat,
                        EnvelopeProblem* keep = nullptr) {
  EnvelopeProblem p = build_problem(tag, opt);
  SolverConfig cfg;
  cfg.strategy = strat;
  cfg.tol = 1e-8;
  SolveResult r = solve(p, cfg);
  if (keep) *keep = std::move(p);
  return r;
}

// Domain used for the 2-D level-set tables: h = 7/n with the box
// [-3.5, 3.5 - h], so the wells sit on lattice points when n is a multiple
// of 14 and the point count is exactly n per axis.
ProblemOptions area_domain(int n, double kappa_unused = 0.0) {
  (void)kappa_unused;
  ProblemOptions opt;
  double h = 7.0 / n;
  opt.lower = {-3.5};
  opt.upper = {3.5 - h};
  opt.n = n;
  return opt;
}

constexpr double kTableKappa = 1e-4;  // level-set cut for the area/volume tables

int run_table(const TableFlags& fl) {
  if (fl.threads > 0) set_threads(fl.threads);
  fs::create_directories(fl.out);
  std::string path = (fs::path(fl.out) / (fl.suite + ".csv")).string();
  std::ofstream csv(path);
  char line[512];

  if (fl.suite == "ks-error") {
    // Max-norm error of the computed envelope against the closed form, per
    // direction set; the smoothed obstacle keeps the energy continuous on
    // every grid, and its envelope is unchanged.
    const std::vector<std::string> sets = {"rc16", "rc64", "rc144", "rc256"};
    csv << "gridsize,dx";
    for (const auto& s : sets) csv << ",err_" << s << ",seconds_" << s;
    csv << "\n";
    for (int n : {15, 25, 35, 45}) {
      ProblemOptions opt;
      opt.lower = {-5.5};
      opt.upper = {5.5};
      opt.n = n;
      std::snprintf(line, sizeof line, "%d,%.6g", n, 11.0 / (n - 1));
      csv << line;
      std::cout << "ks-error n=" << n << std::flush;
      for (const auto& s : sets) {
        opt.directions = s;
        EnvelopeProblem p;
        SolveResult r = table_solve("kohn_strang_smoothed", opt, Strategy::Hybrid, &p);
        double err = max_error_vs_analytic(p, r.u);
        std::snprintf(line, sizeof line, ",%.6g,%.3g", err, r.seconds);
        csv << line;
        std::cout << "  " << s << " " << err << std::flush;
      }
      csv << "\n";
      std::cout << "\n";
    }
  } else if (fl.suite == "area-2d") {
    csv << "gridsize,dx,area_classic,seconds_classic,area_synthetic,seconds_synthetic\n";
    for (int n : {28, 42, 56, 70, 84, 98, 112}) {
      std::snprintf(line, sizeof line, "%d,%.6g", n, 7.0 / n);
      csv << line;
      std::cout << "area-2d n=" << n << std::flush;
      for (const char* tag : {"four_gradient", "synthetic_four_gradient"}) {
        EnvelopeProblem p;
        SolveResult r = table_solve(tag, area_domain(n), Strategy::Line, &p);
        LevelSet ls = extract_level_set(p, r.u, kTableKappa);
        double area = static_cast<double>(ls.points.size()) * p.grid->h() * p.grid->h();
        std::snprintf(line, sizeof line, ",%.6g,%.3g", area, r.seconds);
        csv << line;
        std::cout << "  " << tag << " " << area << std::flush;
      }
      csv << "\n";
      std::cout << "\n";
    }
  } else if (fl.suite == "times-2d") {
    csv << "problem,N,seconds_line,iters_line,seconds_jacobi,iters_jacobi\n";
    for (const char* tag : {"four_gradient", "synthetic_four_gradient"}) {
      for (int n : {43, 71, 127}) {
        SolveResult rl = table_solve(tag, area_domain(n), Strategy::Line);
        SolveResult rj = table_solve(tag, area_domain(n), Strategy::Jacobi);
        std::snprintf(line, sizeof line, "%s,%d,%.3g,%lld,%.3g,%lld\n", tag, n, rl.seconds,
                      static_cast<long long>(rl.iterations), rj.seconds,
                      static_cast<long long>(rj.iterations));
        csv << line;
        std::cout << line << std::flush;
      }
    }
  } else if (fl.suite == "volume-4d") {
    csv << "directions,count,volume,seconds,iterations\n";
    for (const char* s : {"rc16", "rc64", "rc144", "rc256"}) {
      ProblemOptions opt;
      opt.lower = {-5.5};
      opt.upper = {5.5};
      opt.n = 45;
      opt.directions = s;
      EnvelopeProblem p;
      SolveResult r = table_solve("eight_gradient", opt, Strategy::Hybrid, &p);
      LevelSet ls = extract_level_set(p, r.u, kTableKappa);
      double vol = static_cast<double>(ls.points.size()) * std::pow(p.grid->h(), 4);
      std::snprintf(line, sizeof line, "%s,%lld,%.6g,%.3g,%lld\n", s,
                    static_cast<long long>(ls.points.size()), vol, r.seconds,
                    static_cast<long long>(r.iterations));
      csv << line;
      std::cout << line << std::flush;
    }
  } else {
    throw std::invalid_argument("unknown suite '" + fl.suite +
                                "' (expected ks-error, area-2d, times-2d, volume-4d)");
  }
  std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional convex envelopes of grid obstacles"};
  app.require_subcommand(1);

  SolveFlags sf;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a named envelope problem");
  solve_cmd->add_option("--problem", sf.problem, "Problem tag")->required();
  solve_cmd->add_option("--n", sf.n, "Points per axis (0 = problem default)");
  solve_cmd->add_option("--bounds", sf.bounds, "Box: lo hi, or dim lows then dim highs")
      ->expected(-1)
      ->delimiter(',');
  solve_cmd->add_option("--directions", sf.directions, "Direction set name or @file");
  solve_cmd->add_option("--solver", sf.solver, "jacobi | gauss-seidel | line | hybrid");
  solve_cmd->add_option("--tol", sf.tol, "Convergence tolerance (max-norm change)");
  solve_cmd->add_option("--max-iter", sf.max_iter, "Iteration cap");
  solve_cmd->add_option("--kappa", sf.kappa, "Level-set cut in units of h (reporting)");
  solve_cmd->add_option("--threads", sf.threads, "Worker threads (0 = auto)");
  solve_cmd->add_option("--out", sf.out, "Output directory");

  LaminateFlags lf;
  auto* lam_cmd = app.add_subcommand("laminate", "Extract a laminate tree from a solution dump");
  lam_cmd->add_option("--input", lf.input, "Solution dump (.gfd)")->required();
  lam_cmd->add_option("--barycenter", lf.barycenter, "Root point (grid coordinates)")
      ->expected(-1)
      ->delimiter(',');
  lam_cmd->add_option("--directions", lf.directions, "Override direction set (name or @file)");
  lam_cmd->add_option("--kappa", lf.kappa, "Level-set cut in units of h");
  lam_cmd->add_option("--max-depth", lf.max_depth, "Split depth cap");
  lam_cmd->add_option("--initial-direction", lf.initial_direction,
                      "Direction index forced at the root split (-1 = priority rule)");
  lam_cmd->add_option("--out", lf.out, "Output directory");

  TableFlags tf;
  auto* tab_cmd = app.add_subcommand("table", "Emit a study table as CSV");
  tab_cmd->add_option("--suite", tf.suite, "ks-error | area-2d | times-2d | volume-4d")
      ->required();
  tab_cmd->add_option("--threads", tf.threads, "Worker threads (0 = auto)");
  tab_cmd->add_option("--out", tf.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(sf);
    if (lam_cmd->parsed()) return run_laminate(lf);
    if (tab_cmd->parsed()) return run_table(tf);
  } catch (const EmptyLevelSetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
