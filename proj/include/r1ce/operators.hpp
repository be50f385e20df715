#ifndef R1CE_OPERATORS_HPP
#define R1CE_OPERATORS_HPP

// Directional second differences, the discrete minimal directional second
// derivative, and the obstacle-problem residual.

#include <cstdint>
#include <vector>

#include "r1ce/directions.hpp"
#include "r1ce/grid.hpp"
#include "r1ce/problems.hpp"

namespace r1ce {

// Centered second difference along grid vector v at a stored point:
// (u(x+hv) - 2u(x) + u(x-hv)) / (h^2 |v|^2). The stencil must stay inside
// the stored grid (guaranteed for interior points when pad >= width).
double second_difference(const GridFunction& u, std::int64_t flat, const GridVector& v);

struct LambdaResult {
  double value;
  int argmin;  // index into the direction set
};

// Minimum of second differences over the set; ties keep the first direction.
LambdaResult lambda_h(const GridFunction& u, std::int64_t flat, const DirectionSet& D);

struct ResidualReport {
  double max_residual = 0.0;             // max |max(u-g, -lambda_h)| over interior
  double max_convexity_violation = 0.0;  // max(0, -lambda_h) over interior
  std::vector<std::int32_t> argmin_direction;  // per stored point; -1 off interior
};

// Residual audit of a candidate envelope. Argmin directions are recorded only
// when want_argmin is set (they cost a full-size array).
ResidualReport residual(const GridFunction& u, const EnvelopeProblem& p, bool want_argmin = false);

// Max deviation of lambda_h(u + c q) - (lambda_h(u) + c) with q = |x|^2/2,
// over every stored point whose stencil fits; checks the quadratic shift
// identity of the discrete operator.
double translation_check(const GridFunction& u, const DirectionSet& D, double c);

}  // namespace r1ce

#endif
