#ifndef R1CE_ORACLE_HPP
#define R1CE_ORACLE_HPP

// Slow reference implementations used to cross-check the solvers: the
// pairwise-convexification iteration, a brute-force 1-D lower hull, and a
// sign-expanded directional minimum. Kept deliberately independent of the
// production code paths; quadratic or worse complexity, small grids only.

#include <span>
#include <vector>

#include "r1ce/operators.hpp"
#include "r1ce/problems.hpp"

namespace r1ce {

// One pairwise-convexification pass: at every interior point take the best
// convex combination  (k2 G(x + k1 h v) + k1 G(x - k2 h v)) / (k1 + k2)  over
// all directions and all stride pairs staying inside the stored grid.
// Returns the max-norm change.
double ks_step(const EnvelopeProblem& p, GridFunction& G);

struct KsFixedPoint {
  GridFunction u;
  int sweeps = 0;
  bool converged = false;
};

// Iterate ks_step from the obstacle until the change drops below tol.
KsFixedPoint ks_fixed_point(const EnvelopeProblem& p, double tol = 1e-12, int max_sweeps = 5000);

// O(n^3) lower convex hull of a sequence: min over all chords j <= i <= k.
std::vector<double> hull_1d_bruteforce(std::span<const double> values);

// lambda_h recomputed with both signs of every direction spelled out.
LambdaResult lambda_bruteforce(const GridFunction& u, std::int64_t flat, const DirectionSet& D);

}  // namespace r1ce

#endif
