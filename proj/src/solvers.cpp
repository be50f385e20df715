#include "r1ce/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "r1ce/parallel.hpp"

namespace r1ce {

Strategy parse_strategy(const std::string& name) {
  if (name == "jacobi") return Strategy::Jacobi;
  if (name == "gauss-seidel" || name == "gauss_seidel") return Strategy::GaussSeidel;
  if (name == "line") return Strategy::Line;
  if (name == "hybrid") return Strategy::Hybrid;
  throw std::invalid_argument("unknown solver strategy: " + name);
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Jacobi: return "jacobi";
    case Strategy::GaussSeidel: return "gauss-seidel";
    case Strategy::Line: return "line";
    case Strategy::Hybrid: return "hybrid";
  }
  return "?";
}

namespace {

std::vector<std::int64_t> direction_offsets(const UniformGrid& g, const DirectionSet& D) {
  std::vector<std::int64_t> offs(D.size());
  for (int j = 0; j < D.size(); ++j) offs[j] = g.offset(D.dirs[j].e.data());
  return offs;
}

// One Jacobi sweep: out = T(in) on the interior list; returns max change.
double jacobi_sweep(const double* in, double* out, const double* gobs,
                    const std::vector<std::int64_t>& interior,
                    const std::vector<std::int64_t>& offs, int threads) {
  const std::int64_t m = static_cast<std::int64_t>(interior.size());
  const std::int64_t nd = static_cast<std::int64_t>(offs.size());
  const std::int64_t* idx = interior.data();
  const std::int64_t* off = offs.data();
  return parallel_max(
      m,
      [&](std::int64_t b, std::int64_t e) {
        double mx = 0;
        for (std::int64_t i = b; i < e; ++i) {
          const std::int64_t f = idx[i];
          double best = gobs[f];
          for (std::int64_t j = 0; j < nd; ++j) {
            double avg = 0.5 * (in[f + off[j]] + in[f - off[j]]);
            if (avg < best) best = avg;
          }
          out[f] = best;
          double ch = in[f] - best;
          if (ch < 0) ch = -ch;
          if (ch > mx) mx = ch;
        }
        return mx;
      },
      threads);
}

double gauss_seidel_sweep(double* u, const double* gobs,
                          const std::vector<std::int64_t>& interior,
                          const std::vector<std::int64_t>& offs) {
  const std::int64_t nd = static_cast<std::int64_t>(offs.size());
  const std::int64_t* off = offs.data();
  double mx = 0;
  for (std::int64_t f : interior) {
    double best = gobs[f];
    for (std::int64_t j = 0; j < nd; ++j) {
      double avg = 0.5 * (u[f + off[j]] + u[f - off[j]]);
      if (avg < best) best = avg;
    }
    double ch = std::abs(u[f] - best);
    if (ch > mx) mx = ch;
    u[f] = best;
  }
  return mx;
}

// Lower convex hull of w[0..len), overwriting strictly-between values with
// chord interpolants; hull vertices keep their exact values.
void hull_run_inplace(double* w, int len, std::vector<int>& stack) {
  stack.clear();
  stack.push_back(0);
  for (int i = 1; i < len; ++i) {
    // Pop while the previous vertex is on or above the chord: slopes must
    // strictly increase along the lower hull.
    while (stack.size() >= 2) {
      int a = stack[stack.size() - 2], b = stack.back();
      if ((w[b] - w[a]) * (i - b) >= (w[i] - w[b]) * (b - a))
        stack.pop_back();
      else
        break;
    }
    stack.push_back(i);
  }
  for (std::size_t s = 0; s + 1 < stack.size(); ++s) {
    int j = stack[s], k = stack[s + 1];
    double vj = w[j], dv = w[k] - w[j];
    double inv = 1.0 / (k - j);
    for (int i = j + 1; i < k; ++i) w[i] = vj + dv * ((i - j) * inv);
  }
}

struct LineScratch {
  std::vector<double> w;
  std::vector<std::uint8_t> c;
  std::vector<int> stack;
};

// Process one lattice line: gather, envelope every interior run together with
// its two fixed bracket points, scatter. Returns max change on the line.
double process_line(double* u, const PointClass* cls, std::int64_t start, std::int64_t off,
                    int len, LineScratch& s) {
  s.w.resize(len);
  s.c.resize(len);
  {
    std::int64_t f = start;
    for (int t = 0; t < len; ++t, f += off) {
      s.w[t] = u[f];
      s.c[t] = static_cast<std::uint8_t>(cls[f]);
    }
  }
  double ch = 0;
  int t = 1;
  const std::uint8_t kInt = static_cast<std::uint8_t>(PointClass::Interior);
  while (t < len - 1) {
    if (s.c[t] != kInt) {
      ++t;
      continue;
    }
    int a = t;
    while (t < len - 1 && s.c[t] == kInt) ++t;
    int b = t - 1;  // run [a, b]; brackets a-1 and b+1 are fixed data
    hull_run_inplace(s.w.data() + (a - 1), b - a + 3, s.stack);
    std::int64_t f = start + a * off;
    for (int i = a; i <= b; ++i, f += off) {
      double d = u[f] - s.w[i];
      if (d > ch) ch = d;
      u[f] = s.w[i];
    }
  }
  return ch;
}

}  // namespace

GridFunction apply_T(const EnvelopeProblem& p, const GridFunction& u) {
  if (!(*u.grid == *p.grid)) throw std::invalid_argument("grid mismatch in apply_T");
  std::vector<std::int64_t> interior = interior_indices(*p.grid, p.cls);
  std::vector<std::int64_t> offs = direction_offsets(*p.grid, p.directions);
  GridFunction out = u;
  jacobi_sweep(u.v.data(), out.v.data(), p.g.v.data(), interior, offs, 1);
  return out;
}

std::vector<double> convex_envelope_1d(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  if (out.size() < 3) return out;
  std::vector<int> stack;
  hull_run_inplace(out.data(), static_cast<int>(out.size()), stack);
  return out;
}

double line_sweep(const EnvelopeProblem& p, GridFunction& u, const GridVector& v, int threads) {
  const UniformGrid& g = *u.grid;
  const int dim = g.dim();
  const std::int64_t off = g.offset(v.e.data());
  int sh[UniformGrid::kMaxDim];
  for (int k = 0; k < dim; ++k) sh[k] = g.stored(k);

  double* uv = u.v.data();
  const PointClass* cls = p.cls.data();

  return parallel_max(
      g.total(),
      [&](std::int64_t b, std::int64_t e) {
        LineScratch scratch;
        int idx[UniformGrid::kMaxDim];
        g.unflatten(b, idx);
        double mx = 0;
        for (std::int64_t f = b; f < e; ++f) {
          // A line starts where stepping backwards leaves the stored box.
          bool start = false;
          for (int k = 0; k < dim; ++k) {
            int j = idx[k] - v[k];
            if (j < 0 || j >= sh[k]) {
              start = true;
              break;
            }
          }
          if (start) {
            int tmax = 1 << 30;
            for (int k = 0; k < dim; ++k) {
              if (v[k] > 0)
                tmax = std::min(tmax, (sh[k] - 1 - idx[k]) / v[k]);
              else if (v[k] < 0)
                tmax = std::min(tmax, idx[k] / (-v[k]));
            }
            int len = tmax + 1;
            if (len >= 3) {
              double ch = process_line(uv, cls, f, off, len, scratch);
              if (ch > mx) mx = ch;
            }
          }
          // Odometer step in storage order.
          for (int k = dim - 1; k >= 0; --k) {
            if (++idx[k] < sh[k]) break;
            idx[k] = 0;
          }
        }
        return mx;
      },
      threads);
}

namespace {

SolveResult finish(const EnvelopeProblem& p, GridFunction u, std::int64_t iters, double change,
                   bool converged, Strategy s,
                   std::chrono::steady_clock::time_point t0) {
  SolveResult r;
  r.u = std::move(u);
  r.iterations = iters;
  r.final_change = change;
  r.converged = converged;
  r.strategy = s;
  r.audit = residual(r.u, p);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

SolveResult solve_fixed_point(const EnvelopeProblem& p, const SolverConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::int64_t> interior = interior_indices(*p.grid, p.cls);
  std::vector<std::int64_t> offs = direction_offsets(*p.grid, p.directions);
  GridFunction u = p.g;
  double change = 0;
  if (cfg.strategy == Strategy::GaussSeidel) {
    for (std::int64_t it = 0; it < cfg.max_iterations; ++it) {
      change = gauss_seidel_sweep(u.v.data(), p.g.v.data(), interior, offs);
      if (change <= cfg.tol)
        return finish(p, std::move(u), it + 1, change, true, cfg.strategy, t0);
    }
    return finish(p, std::move(u), cfg.max_iterations, change, false, cfg.strategy, t0);
  }
  GridFunction next = u;
  for (std::int64_t it = 0; it < cfg.max_iterations; ++it) {
    change = jacobi_sweep(u.v.data(), next.v.data(), p.g.v.data(), interior, offs, cfg.threads);
    std::swap(u.v, next.v);
    if (change <= cfg.tol)
      return finish(p, std::move(u), it + 1, change, true, Strategy::Jacobi, t0);
  }
  return finish(p, std::move(u), cfg.max_iterations, change, false, Strategy::Jacobi, t0);
}

SolveResult solve_line(const EnvelopeProblem& p, const SolverConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  GridFunction u = p.g;
  double change = 0;
  for (std::int64_t it = 0; it < cfg.max_iterations; ++it) {
    change = 0;
    for (const auto& v : p.directions.dirs)
      change = std::max(change, line_sweep(p, u, v, cfg.threads));
    if (change <= cfg.tol)
      return finish(p, std::move(u), it + 1, change, true, Strategy::Line, t0);
  }
  return finish(p, std::move(u), cfg.max_iterations, change, false, Strategy::Line, t0);
}

SolveResult solve_hybrid(const EnvelopeProblem& p, const SolverConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::int64_t> interior = interior_indices(*p.grid, p.cls);
  std::vector<std::int64_t> offs = direction_offsets(*p.grid, p.directions);
  int inner = cfg.hybrid_inner > 0
                  ? cfg.hybrid_inner
                  : static_cast<int>(std::ceil(1.0 / p.grid->h()));
  GridFunction u = p.g;
  GridFunction next = u;
  std::int64_t iters = 0;
  double change = 0;
  bool small = false;
  for (int round = 0; round < cfg.hybrid_outer && !small && iters < cfg.max_iterations; ++round) {
    change = 0;
    for (const auto& v : p.directions.dirs)
      change = std::max(change, line_sweep(p, u, v, cfg.threads));
    ++iters;
    small = change <= cfg.tol;
    for (int s = 0; s < inner && !small && iters < cfg.max_iterations; ++s) {
      change = jacobi_sweep(u.v.data(), next.v.data(), p.g.v.data(), interior, offs, cfg.threads);
      std::swap(u.v, next.v);
      ++iters;
      small = change <= cfg.tol;
    }
  }
  // Polish with plain fixed-point sweeps to the requested tolerance.
  while (!small && iters < cfg.max_iterations) {
    change = jacobi_sweep(u.v.data(), next.v.data(), p.g.v.data(), interior, offs, cfg.threads);
    std::swap(u.v, next.v);
    ++iters;
    small = change <= cfg.tol;
  }
  // Land on line fixed points: the sweeps above stop on a small per-sweep
  // change, which still carries an O(tol/h^2) tail; line cycles replace flat
  // regions by exact chord values.
  if (small) {
    do {
      change = 0;
      for (const auto& v : p.directions.dirs)
        change = std::max(change, line_sweep(p, u, v, cfg.threads));
      ++iters;
    } while (change > cfg.tol && iters < cfg.max_iterations);
    small = change <= cfg.tol;
  }
  return finish(p, std::move(u), iters, change, small, Strategy::Hybrid, t0);
}

SolveResult solve(const EnvelopeProblem& p, const SolverConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::Jacobi:
    case Strategy::GaussSeidel:
      return solve_fixed_point(p, cfg);
    case Strategy::Line:
      return solve_line(p, cfg);
    case Strategy::Hybrid:
      return solve_hybrid(p, cfg);
  }
  throw std::invalid_argument("bad strategy");
}

}  // namespace r1ce
