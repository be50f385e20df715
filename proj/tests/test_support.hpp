#ifndef R1CE_TEST_SUPPORT_HPP
#define R1CE_TEST_SUPPORT_HPP

// Shared helpers for assembling small custom problems in the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "r1ce/problems.hpp"

namespace r1ce_test {

using namespace r1ce;

// Coordinate-axis direction set, width 1.
inline DirectionSet axes(int dim) {
  DirectionSet D;
  D.id = "axes" + std::to_string(dim);
  D.dim = dim;
  for (int k = 0; k < dim; ++k) {
    GridVector v;
    v.dim = dim;
    v.e[k] = 1;
    D.dirs.push_back(v);
  }
  return D;
}

// Problem on [-half, half]^dim with Dirichlet data taken from the obstacle
// itself (the padded collar repeats the obstacle values).
inline EnvelopeProblem box_problem(int dim, double half, int n, DirectionSet D,
                                   const std::function<double(const double*)>& f,
                                   int pad = -1) {
  std::vector<double> lo(dim, -half), hi(dim, half);
  std::vector<int> npts(dim, n);
  EnvelopeProblem p;
  p.directions = std::move(D);
  p.grid = build_grid(dim, lo, hi, npts, pad >= 0 ? pad : p.directions.width());
  p.cls = classify_box(*p.grid);
  p.g = sample(p.grid, f);
  p.floor = p.g;
  p.id = "test-box";
  double m = std::numeric_limits<double>::infinity();
  int idx[UniformGrid::kMaxDim];
  for (std::int64_t i = 0; i < p.grid->total(); ++i) {
    p.grid->unflatten(i, idx);
    if (p.grid->in_bounds_index(idx)) m = std::min(m, p.g[i]);
  }
  p.min_g = m;
  return p;
}

// Same box, but boundary and padding data come from a radial quadratic
// a r^2 + b instead of the obstacle formula. Every stencil line then has
// convex fixed tails, which is what makes the pairwise-convexification oracle
// equivalent to the nearest-neighbour scheme solvers.
inline EnvelopeProblem collar_problem(int dim, double half, int n, DirectionSet D,
                                      const std::function<double(const double*)>& f,
                                      double qa = 1.0, double qb = 0.0) {
  EnvelopeProblem p = box_problem(dim, half, n, std::move(D), f);
  int idx[UniformGrid::kMaxDim];
  double x[UniformGrid::kMaxDim];
  double m = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < p.grid->total(); ++i) {
    p.grid->unflatten(i, idx);
    p.grid->point(i, x);
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) r2 += x[k] * x[k];
    double q = qa * r2 + qb;
    p.floor[i] = q;
    if (p.cls[static_cast<std::size_t>(i)] != PointClass::Interior) p.g[i] = q;
    if (p.grid->in_bounds_index(idx)) m = std::min(m, p.g[i]);
  }
  p.min_g = m;
  return p;
}

// Random smooth-ish obstacle: a few cosine bumps over a gentle paraboloid.
// Not convex anywhere in particular; pair with collar_problem when a test
// needs convex fixed data along stencil lines.
inline std::function<double(const double*)> random_obstacle(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.5, 1.5);
  std::uniform_real_distribution<double> freq(0.5, 2.5);
  std::uniform_real_distribution<double> phase(0.0, 6.28318530717958648);
  struct Bump {
    double a;
    double w[UniformGrid::kMaxDim];
    double ph;
  };
  std::vector<Bump> bumps(3);
  for (auto& b : bumps) {
    b.a = amp(rng);
    for (int k = 0; k < dim; ++k) b.w[k] = freq(rng);
    b.ph = phase(rng);
  }
  double curv = 0.05 + 0.2 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return [dim, bumps, curv](const double* x) {
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) r2 += x[k] * x[k];
    double v = curv * r2;
    for (const auto& b : bumps) {
      double s = b.ph;
      for (int k = 0; k < dim; ++k) s += b.w[k] * x[k];
      v += b.a * std::cos(s);
    }
    return v;
  };
}

}  // namespace r1ce_test

#endif
