#include "r1ce/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace r1ce {

double second_difference(const GridFunction& u, std::int64_t flat, const GridVector& v) {
  const UniformGrid& g = *u.grid;
  std::int64_t off = g.offset(v.e.data());
  double h = g.h();
  double denom = h * h * static_cast<double>(v.norm2());
  // Sum the two neighbours first: addition commutes bitwise, so the value is
  // exactly even in v.
  return (u[flat + off] + u[flat - off] - 2.0 * u[flat]) / denom;
}

LambdaResult lambda_h(const GridFunction& u, std::int64_t flat, const DirectionSet& D) {
  LambdaResult r{std::numeric_limits<double>::infinity(), -1};
  for (int j = 0; j < D.size(); ++j) {
    double d = second_difference(u, flat, D.dirs[j]);
    if (d < r.value) {
      r.value = d;
      r.argmin = j;
    }
  }
  return r;
}

ResidualReport residual(const GridFunction& u, const EnvelopeProblem& p, bool want_argmin) {
  const UniformGrid& g = *u.grid;
  ResidualReport rep;
  if (want_argmin) rep.argmin_direction.assign(static_cast<std::size_t>(g.total()), -1);
  for (std::int64_t i = 0; i < g.total(); ++i) {
    if (p.cls[static_cast<std::size_t>(i)] != PointClass::Interior) continue;
    LambdaResult lam = lambda_h(u, i, p.directions);
    double r = std::max(u[i] - p.g[i], -lam.value);
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
    rep.max_convexity_violation = std::max(rep.max_convexity_violation, -lam.value);
    if (want_argmin) rep.argmin_direction[static_cast<std::size_t>(i)] = lam.argmin;
  }
  return rep;
}

double translation_check(const GridFunction& u, const DirectionSet& D, double c) {
  const UniformGrid& g = *u.grid;
  int W = D.width();
  GridFunction shifted(u.grid);
  double x[UniformGrid::kMaxDim];
  for (std::int64_t i = 0; i < g.total(); ++i) {
    g.point(i, x);
    double q = 0;
    for (int k = 0; k < g.dim(); ++k) q += x[k] * x[k];
    shifted[i] = u[i] + c * 0.5 * q;
  }
  double dev = 0;
  int idx[UniformGrid::kMaxDim];
  for (std::int64_t i = 0; i < g.total(); ++i) {
    g.unflatten(i, idx);
    bool fits = true;
    for (int k = 0; k < g.dim(); ++k)
      if (idx[k] < W || idx[k] >= g.stored(k) - W) fits = false;
    if (!fits) continue;
    double a = lambda_h(shifted, i, D).value;
    double b = lambda_h(u, i, D).value + c;
    dev = std::max(dev, std::abs(a - b));
  }
  return dev;
}

}  // namespace r1ce
