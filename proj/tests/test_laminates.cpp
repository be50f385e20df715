#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "r1ce/laminates.hpp"
#include "r1ce/solvers.hpp"
#include "test_support.hpp"

using namespace r1ce;

namespace {

struct Solved {
  EnvelopeProblem p;
  GridFunction u;
};

// Shared four-well envelope; the line solver reproduces the flat region
// exactly, so a tight level-set threshold is safe.
const Solved& four_well() {
  static Solved s = [] {
    Solved out;
    out.p = build_problem("four_gradient");
    SolverConfig cfg;
    cfg.strategy = Strategy::Line;
    cfg.tol = 1e-8;
    SolveResult res = solve(out.p, cfg);
    if (!res.converged) std::abort();
    out.u = std::move(res.u);
    return out;
  }();
  return s;
}

constexpr double kKappa = 1e-4;

}  // namespace

TEST_CASE("level set of the four-well envelope: flat hull region, wells touch") {
  const auto& s = four_well();
  LevelSet K = extract_level_set(s.p, s.u, kKappa);
  CHECK(K.m == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(K.points.size() > 100);              // a 2-D region, not a sliver
  CHECK(K.support_count >= 4);               // at least the wells themselves
  CHECK(K.mask.size() == static_cast<std::size_t>(s.p.grid->total()));

  // Origin is deep inside the flat region; wells are its extreme points.
  int idx[UniformGrid::kMaxDim];
  for (int k = 0; k < 2; ++k) idx[k] = s.p.grid->pad() + (s.p.grid->points(k) - 1) / 2;
  std::int64_t origin = s.p.grid->flatten(idx);
  CHECK(classify_in_K(*s.p.grid, K.mask, origin, s.p.directions) == KClass::InteriorOfK);

  for (const auto& w : s.p.wells) {
    for (int k = 0; k < 2; ++k)
      idx[k] = s.p.grid->pad() +
               static_cast<int>(std::lround((w[k] - s.p.grid->lower(k)) / s.p.grid->h()));
    std::int64_t f = s.p.grid->flatten(idx);
    CHECK(K.mask[static_cast<std::size_t>(f)] == 1);
    CHECK(classify_in_K(*s.p.grid, K.mask, f, s.p.directions) == KClass::ExtremeOfK);
  }
}

TEST_CASE("greedy walk from the origin stops at an extreme point") {
  const auto& s = four_well();
  LevelSet K = extract_level_set(s.p, s.u, kKappa);
  int idx[UniformGrid::kMaxDim];
  for (int k = 0; k < 2; ++k) idx[k] = s.p.grid->pad() + (s.p.grid->points(k) - 1) / 2;
  std::int64_t origin = s.p.grid->flatten(idx);

  auto path = find_extreme_path(*s.p.grid, K.mask, s.p.directions, origin);
  REQUIRE(!path.empty());
  CHECK(path.front() == origin);
  for (std::int64_t f : path) CHECK(K.mask[static_cast<std::size_t>(f)] == 1);
  CHECK(classify_in_K(*s.p.grid, K.mask, path.back(), s.p.directions) == KClass::ExtremeOfK);
}

TEST_CASE("origin laminate of the four-well envelope: quarter weights on the wells") {
  const auto& s = four_well();
  LaminateOptions opt;
  opt.kappa = kKappa;
  std::vector<double> bary = {0.0, 0.0};
  Laminate lam = extract_laminate(s.p, s.u, bary, opt);

  REQUIRE(lam.root != nullptr);
  CHECK(lam.leaf_count >= 4);
  auto leaves = laminate_leaves(lam);
  CHECK(static_cast<int>(leaves.size()) == lam.leaf_count);
  double wsum = 0.0;
  for (const auto& [f, w] : leaves) {
    CHECK(w > 0.0);
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-9));

  LaminateCheck chk = verify_laminate(*s.p.grid, lam);
  CHECK(chk.per_node_exact);
  CHECK(chk.recombination_error <= 1e-9);

  SupportWeights sw = support_weights(lam, s.p, 1);
  REQUIRE(sw.upsilon.size() == 4);
  CHECK(sw.bar >= 0.999);
  for (double v : sw.upsilon) CHECK(v == doctest::Approx(0.25).epsilon(0.08));

  SupportWeights tight = support_weights(lam, s.p, 0);
  CHECK(tight.bar >= 0.99);
}

TEST_CASE("forced first split direction is honoured") {
  const auto& s = four_well();
  LaminateOptions opt;
  opt.kappa = kKappa;
  opt.initial_direction = 1;  // the (0,1) axis
  std::vector<double> bary = {0.0, 0.0};
  Laminate lam = extract_laminate(s.p, s.u, bary, opt);
  REQUIRE(lam.root != nullptr);
  CHECK(lam.root->dir == 1);
}

TEST_CASE("laminate rooted at a well is a single leaf") {
  const auto& s = four_well();
  LaminateOptions opt;
  opt.kappa = kKappa;
  std::vector<double> bary = {s.p.wells[2][0], s.p.wells[2][1]};
  Laminate lam = extract_laminate(s.p, s.u, bary, opt);
  REQUIRE(lam.root != nullptr);
  CHECK(lam.root->dir == -1);
  CHECK(lam.leaf_count == 1);
  CHECK(lam.root->weight == 1.0);
  CHECK(lam.root->cls == KClass::ExtremeOfK);
}

TEST_CASE("depth cap zero keeps the root as the only node") {
  const auto& s = four_well();
  LaminateOptions opt;
  opt.kappa = kKappa;
  opt.max_depth = 0;
  std::vector<double> bary = {0.0, 0.0};
  Laminate lam = extract_laminate(s.p, s.u, bary, opt);
  CHECK(lam.leaf_count == 1);
  CHECK(lam.max_depth_reached == 0);
}

TEST_CASE("barycenters snap to the nearest grid point; non-K points are rejected") {
  const auto& s = four_well();
  LaminateOptions opt;
  opt.kappa = kKappa;
  std::vector<double> near_origin = {0.0312, 0.0};  // within half a cell of (0,0)
  Laminate lam = extract_laminate(s.p, s.u, near_origin, opt);
  REQUIRE(lam.root != nullptr);
  CHECK(lam.root->x[0] == 0.0);
  CHECK(lam.root->x[1] == 0.0);
  std::vector<double> outside_K = {3.5, 3.5};
  CHECK_THROWS_AS(extract_laminate(s.p, s.u, outside_K, opt), std::invalid_argument);
}

TEST_CASE("a minimum attained only on the boundary leaves the level set empty") {
  auto ramp = [](const double* x) { return x[0]; };
  EnvelopeProblem p = r1ce_test::box_problem(1, 1.0, 21, r1ce_test::axes(1), ramp);
  // Affine data is its own envelope; the in-bounds minimum sits on the left
  // boundary point, so no interior point reaches it.
  CHECK_THROWS_AS(extract_level_set(p, p.g, kKappa), EmptyLevelSetError);
}
