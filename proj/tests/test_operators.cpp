#include <doctest.h>

#include <cmath>
#include <random>

#include "r1ce/operators.hpp"
#include "r1ce/solvers.hpp"

using namespace r1ce;

namespace {

GridPtr square_grid(int n, int pad, double half = 1.0) {
  double lo[] = {-half, -half};
  double hi[] = {half, half};
  int npts[] = {n, n};
  return build_grid(2, {lo, 2}, {hi, 2}, {npts, 2}, pad);
}

GridFunction random_function(const GridPtr& g, std::uint64_t seed) {
  GridFunction u(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& x : u.v) x = dist(rng);
  return u;
}

}  // namespace

TEST_CASE("second difference is exactly even in the direction") {
  auto g = square_grid(9, 2);
  GridFunction u = random_function(g, 11);
  auto D = build_planar_set(8);
  int idx[2] = {4, 5};
  std::int64_t f = g->flatten(idx);
  for (const auto& v : D.dirs) {
    GridVector neg = v;
    for (int k = 0; k < v.dim; ++k) neg.e[static_cast<std::size_t>(k)] = -v[k];
    CHECK(second_difference(u, f, v) == second_difference(u, f, neg));
  }
}

TEST_CASE("second difference of the normalizing quadratic is one") {
  auto g = square_grid(9, 3);
  GridFunction q = sample(g, [](const double* x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); });
  auto D = build_planar_set(16);
  int idx[2] = {7, 7};
  std::int64_t f = g->flatten(idx);
  for (const auto& v : D.dirs)
    CHECK(second_difference(q, f, v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lambda ties keep the first direction") {
  auto g = square_grid(5, 1);
  GridFunction u(g, 0.0);  // flat: every second difference is zero
  auto D = build_planar_set(4);
  int idx[2] = {3, 3};
  LambdaResult r = lambda_h(u, g->flatten(idx), D);
  CHECK(r.value == 0.0);
  CHECK(r.argmin == 0);
}

TEST_CASE("lambda bruteforce agrees bitwise") {
  auto g = square_grid(11, 3);
  GridFunction u = random_function(g, 23);
  auto D = build_planar_set(16);
  int idx[2];
  for (idx[0] = 3; idx[0] < 14; ++idx[0])
    for (idx[1] = 3; idx[1] < 14; ++idx[1]) {
      std::int64_t f = g->flatten(idx);
      LambdaResult a = lambda_h(u, f, D);
      // the bruteforce lives in the oracle module; here check the defining min
      double best = second_difference(u, f, D.dirs[0]);
      for (const auto& v : D.dirs) best = std::min(best, second_difference(u, f, v));
      CHECK(a.value == best);
    }
}

TEST_CASE("translation by the quadratic shifts lambda exactly") {
  auto g = square_grid(9, 3);
  GridFunction u = random_function(g, 37);
  auto D = build_planar_set(8);
  CHECK(translation_check(u, D, 0.75) <= 1e-12);
  CHECK(translation_check(u, D, -2.5) <= 1e-12);
}

TEST_CASE("residual vanishes for a convex obstacle") {
  // For convex g the envelope is g itself: u - g = 0 and lambda_h >= 0.
  auto g = square_grid(9, 1);
  EnvelopeProblem p;
  p.grid = g;
  p.directions = build_planar_set(4);
  p.cls = classify_box(*g);
  p.g = sample(g, [](const double* x) { return x[0] * x[0] + 2.0 * x[1] * x[1]; });
  p.floor = p.g;
  p.id = "convex-quadratic";
  ResidualReport r = residual(p.g, p, true);
  CHECK(r.max_residual <= 1e-12);
  CHECK(r.max_convexity_violation <= 1e-12);
  CHECK(r.argmin_direction.size() == static_cast<std::size_t>(g->total()));

  ResidualReport r2 = residual(p.g, p, false);
  CHECK(r2.argmin_direction.empty());
}
