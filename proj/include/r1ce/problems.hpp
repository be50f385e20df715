#ifndef R1CE_PROBLEMS_HPP
#define R1CE_PROBLEMS_HPP

// Obstacle functions and assembled envelope problems: the Kohn-Strang energy
// and its envelope, squared-distance multiwell obstacles, the xyz product
// example, and the named problem registry.

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "r1ce/directions.hpp"
#include "r1ce/grid.hpp"

namespace r1ce {

// Kohn-Strang energy of a 2x2 matrix, vectorised row-major (M11,M12,M21,M22):
// 0 at M = 0, else 1 + |M|^2 (Frobenius).
double kohn_strang_energy(const double m[4]);

// Its rank-one convex envelope: 1+|M|^2 when rho >= 1, else 2 rho - 2|det M|,
// with rho = sqrt(|M|^2 + 2|det M|).
double kohn_strang_exact(const double m[4]);

// Continuous variant smoothed at the origin: 2 sqrt(2) |M| for
// |M| < sqrt(2)-1, else 1+|M|^2. Same envelope as the discontinuous energy.
double kohn_strang_smoothed(const double m[4]);

// min over wells of the squared Frobenius distance |M - A_i|^2.
double multiwell_obstacle(const std::vector<std::array<double, 4>>& wells, const double m[4]);

// A fully assembled discrete problem: grid, directions, point classes, the
// effective obstacle (with boundary and padding data baked in), and the
// quadratic floor used as extension data.
struct EnvelopeProblem {
  GridPtr grid;
  DirectionSet directions;
  std::vector<PointClass> cls;
  GridFunction g;       // effective obstacle on every stored point
  GridFunction floor;   // extension/floor data g0 on every stored point
  std::string id;
  double min_g = 0.0;   // min of g over in-bounds points
  // Optional exact envelope for error reporting, on grid coordinates.
  std::function<double(const double*)> analytic;
  // Well locations in grid coordinates (empty for non-multiwell problems).
  std::vector<std::array<double, 4>> wells;
};

struct ProblemOptions {
  std::vector<double> lower, upper;  // empty: per-problem default box
  int n = 0;                         // points per axis; 0: per-problem default
  std::string directions;            // named set or @file; empty: default
  int pad = -1;                      // -1: direction-set width
  // Radial floor g0 = a [x - c]^2 + b; NaN entries mean "per-problem default".
  double floor_a = std::numeric_limits<double>::quiet_NaN();
  double floor_b = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> floor_center;  // empty: origin
};

// Known tags: kohn_strang, kohn_strang_smoothed, four_gradient,
// synthetic_four_gradient, six_gradient, eight_gradient, xyz.
EnvelopeProblem build_problem(const std::string& tag, const ProblemOptions& opt = {});

// Resolve a direction-set request: a builder name (rc16/rc64/rc256, v4/v8/v16,
// d2/d4/d7/d24) or @path to a JSON file.
DirectionSet parse_direction_set(const std::string& request);

// The 12-vector planar refinement of v8 and its 144 rank-one products; used by
// the volume study as the second-finest direction family.
DirectionSet build_planar_12();
DirectionSet build_rank_one_144();

std::vector<std::string> known_problem_tags();

}  // namespace r1ce

#endif
