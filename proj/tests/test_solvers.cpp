#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "r1ce/solvers.hpp"
#include "test_support.hpp"

using namespace r1ce;
using r1ce_test::box_problem;
using r1ce_test::collar_problem;
using r1ce_test::random_obstacle;

namespace {

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("1-D tent relaxes to the zero chord between its endpoints") {
  auto tent = [](const double* x) { return 1.0 - std::abs(x[0]); };
  EnvelopeProblem p = box_problem(1, 1.0, 41, r1ce_test::axes(1), tent);

  SolverConfig cfg;
  cfg.strategy = Strategy::Line;
  cfg.tol = 1e-10;
  SolveResult line = solve(p, cfg);
  REQUIRE(line.converged);
  CHECK(line.iterations <= 3);
  for (std::int64_t i = 0; i < p.grid->total(); ++i)
    if (p.cls[static_cast<std::size_t>(i)] == PointClass::Interior)
      CHECK(line.u[i] == 0.0);  // chord between two exact zeros is exactly zero

  cfg.strategy = Strategy::Jacobi;
  cfg.tol = 1e-8;
  SolveResult jac = solve(p, cfg);
  REQUIRE(jac.converged);
  double worst = 0.0;
  for (std::int64_t i = 0; i < p.grid->total(); ++i)
    if (p.cls[static_cast<std::size_t>(i)] == PointClass::Interior)
      worst = std::max(worst, std::abs(jac.u[i]));
  CHECK(worst <= 2e-5);  // sweep-to-sweep tol leaves an O(tol/h^2) tail
}

TEST_CASE("all four strategies land on the same fixed point") {
  std::mt19937_64 rng(2024);
  auto f = random_obstacle(2, rng);
  EnvelopeProblem p = collar_problem(2, 1.0, 17, build_planar_set(8), f, 2.0, 0.5);

  SolverConfig cfg;
  cfg.tol = 1e-10;
  cfg.max_iterations = 200000;

  std::vector<SolveResult> results;
  for (Strategy s : {Strategy::Jacobi, Strategy::GaussSeidel, Strategy::Line, Strategy::Hybrid}) {
    cfg.strategy = s;
    results.push_back(solve(p, cfg));
    REQUIRE(results.back().converged);
  }
  for (std::size_t a = 0; a < results.size(); ++a)
    for (std::size_t b = a + 1; b < results.size(); ++b)
      CHECK(max_abs_diff(results[a].u, results[b].u) <= 1e-7);
}

TEST_CASE("iterating the min-average map from the obstacle only moves down") {
  std::mt19937_64 rng(515);
  auto f = random_obstacle(2, rng);
  EnvelopeProblem p = box_problem(2, 1.0, 15, build_planar_set(4), f);

  GridFunction u = p.g;
  for (int it = 0; it < 6; ++it) {
    GridFunction next = apply_T(p, u);
    double rise = 0.0;
    for (std::int64_t i = 0; i < u.size(); ++i) rise = std::max(rise, next[i] - u[i]);
    CHECK(rise <= 0.0);
    u = std::move(next);
  }
  // Obstacle bound survives the iteration.
  double above = 0.0;
  for (std::int64_t i = 0; i < u.size(); ++i) above = std::max(above, u[i] - p.g[i]);
  CHECK(above <= 0.0);
}

TEST_CASE("1-D lower envelope: below data, pinned endpoints, convex, idempotent") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> vals(25);
    for (double& v : vals) v = dist(rng);

    std::vector<double> e = convex_envelope_1d(vals);
    REQUIRE(e.size() == vals.size());
    CHECK(e.front() == vals.front());
    CHECK(e.back() == vals.back());
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(e[i] <= vals[i] + 1e-12);
    for (std::size_t i = 1; i + 1 < e.size(); ++i)
      CHECK(e[i + 1] + e[i - 1] - 2.0 * e[i] >= -1e-12);

    std::vector<double> e2 = convex_envelope_1d(e);
    double drift = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) drift = std::max(drift, std::abs(e2[i] - e[i]));
    CHECK(drift <= 1e-12);
  }
}

TEST_CASE("line cycles beat point sweeps on the four-well problem") {
  ProblemOptions opt;
  opt.n = 43;
  EnvelopeProblem p = build_problem("four_gradient", opt);

  SolverConfig cfg;
  cfg.tol = 1e-8;
  cfg.strategy = Strategy::Line;
  SolveResult line = solve(p, cfg);
  REQUIRE(line.converged);
  CHECK(line.iterations <= 50);

  cfg.strategy = Strategy::Jacobi;
  SolveResult jac = solve(p, cfg);
  REQUIRE(jac.converged);
  CHECK(jac.iterations > line.iterations);

  cfg.strategy = Strategy::Hybrid;
  SolveResult hyb = solve(p, cfg);
  REQUIRE(hyb.converged);
  CHECK(hyb.final_change <= cfg.tol);
  CHECK(max_abs_diff(hyb.u, line.u) <= 1e-7);
}

TEST_CASE("strategy names round-trip and junk is rejected") {
  for (Strategy s : {Strategy::Jacobi, Strategy::GaussSeidel, Strategy::Line, Strategy::Hybrid})
    CHECK(parse_strategy(strategy_name(s)) == s);
  CHECK_THROWS_AS(parse_strategy("sor"), std::invalid_argument);
}
