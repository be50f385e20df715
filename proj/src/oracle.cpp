#include "r1ce/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace r1ce {

double ks_step(const EnvelopeProblem& p, GridFunction& G) {
  const UniformGrid& g = *p.grid;
  const int dim = g.dim();
  const int nd = p.directions.size();

  std::vector<double> old(G.v);  // simultaneous update: read old, write new
  std::vector<std::int64_t> off(nd);
  for (int d = 0; d < nd; ++d) off[d] = g.offset(p.directions.dirs[d].e.data());

  double change = 0.0;
  int idx[UniformGrid::kMaxDim];
  const std::int64_t total = g.total();
  for (std::int64_t f = 0; f < total; ++f) {
    if (p.cls[static_cast<std::size_t>(f)] != PointClass::Interior) continue;
    g.unflatten(f, idx);
    double best = old[static_cast<std::size_t>(f)];
    for (int d = 0; d < nd; ++d) {
      const GridVector& v = p.directions.dirs[d];
      // Largest forward/backward stride counts keeping x +- k h v stored.
      int fwd = std::numeric_limits<int>::max();
      int bwd = std::numeric_limits<int>::max();
      for (int k = 0; k < dim; ++k) {
        if (v[k] > 0) {
          fwd = std::min(fwd, (g.stored(k) - 1 - idx[k]) / v[k]);
          bwd = std::min(bwd, idx[k] / v[k]);
        } else if (v[k] < 0) {
          fwd = std::min(fwd, idx[k] / (-v[k]));
          bwd = std::min(bwd, (g.stored(k) - 1 - idx[k]) / (-v[k]));
        }
      }
      for (int k1 = 1; k1 <= fwd; ++k1) {
        double a = old[static_cast<std::size_t>(f + k1 * off[d])];
        for (int k2 = 1; k2 <= bwd; ++k2) {
          double b = old[static_cast<std::size_t>(f - k2 * off[d])];
          double val = (k2 * a + k1 * b) / static_cast<double>(k1 + k2);
          if (val < best) best = val;
        }
      }
    }
    G[f] = best;
    change = std::max(change, std::abs(best - old[static_cast<std::size_t>(f)]));
  }
  return change;
}

KsFixedPoint ks_fixed_point(const EnvelopeProblem& p, double tol, int max_sweeps) {
  KsFixedPoint out;
  out.u = p.g;
  for (int s = 0; s < max_sweeps; ++s) {
    double change = ks_step(p, out.u);
    out.sweeps = s + 1;
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

std::vector<double> hull_1d_bruteforce(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  std::vector<double> out(values.begin(), values.end());
  for (int i = 0; i < n; ++i) {
    double best = values[static_cast<std::size_t>(i)];
    for (int j = 0; j <= i; ++j) {
      for (int k = std::max(i, j + 1); k < n; ++k) {
        double cand;
        if (i == j) {
          cand = values[static_cast<std::size_t>(j)];
        } else if (i == k) {
          cand = values[static_cast<std::size_t>(k)];
        } else {
          double vj = values[static_cast<std::size_t>(j)];
          double dv = values[static_cast<std::size_t>(k)] - vj;
          double inv = 1.0 / static_cast<double>(k - j);
          cand = vj + dv * (static_cast<double>(i - j) * inv);
        }
        if (cand < best) best = cand;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

LambdaResult lambda_bruteforce(const GridFunction& u, std::int64_t flat, const DirectionSet& D) {
  const UniformGrid& g = *u.grid;
  const double h2 = g.h() * g.h();
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int d = 0; d < D.size(); ++d) {
    const GridVector& v = D.dirs[d];
    std::int64_t off = g.offset(v.e.data());
    double denom = h2 * static_cast<double>(v.norm2());
    // Both orientations spelled out; the neighbour sum commutes, so the two
    // values coincide bitwise and the +-pair convention loses nothing.
    double plus = (u[flat + off] + u[flat - off] - 2.0 * u[flat]) / denom;
    double minus = (u[flat - off] + u[flat + off] - 2.0 * u[flat]) / denom;
    if (plus < best) {
      best = plus;
      arg = d;
    }
    if (minus < best) {
      best = minus;
      arg = d;
    }
  }
  return {best, arg};
}

}  // namespace r1ce
