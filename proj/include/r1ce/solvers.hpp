#ifndef R1CE_SOLVERS_HPP
#define R1CE_SOLVERS_HPP

// Fixed-point solvers for the discrete obstacle problem: damped-free Jacobi
// and Gauss-Seidel sweeps of the min-average operator, the per-line convex
// envelope solver, and the hybrid schedule that alternates the two.

#include <span>
#include <vector>

#include "r1ce/operators.hpp"
#include "r1ce/problems.hpp"

namespace r1ce {

enum class Strategy { Jacobi, GaussSeidel, Line, Hybrid };

Strategy parse_strategy(const std::string& name);
std::string strategy_name(Strategy s);

struct SolverConfig {
  Strategy strategy = Strategy::Jacobi;
  double tol = 1e-8;                 // max-norm change per sweep/cycle
  std::int64_t max_iterations = 50000;
  int hybrid_outer = 10;             // line-cycle + Jacobi-block rounds
  int hybrid_inner = 0;              // Jacobi sweeps per round; 0 = ceil(1/h)
  int threads = 0;                   // 0 = global default
};

struct SolveResult {
  GridFunction u;
  std::int64_t iterations = 0;  // sweeps and line cycles performed
  double final_change = 0.0;
  bool converged = false;
  double seconds = 0.0;
  Strategy strategy = Strategy::Jacobi;
  ResidualReport audit;
};

// One Jacobi application of T(u)(x) = min(g, min_v (u(x+hv)+u(x-hv))/2) on
// interior points; boundary and padding pass through.
GridFunction apply_T(const EnvelopeProblem& p, const GridFunction& u);

// Lower convex envelope of a sequence sampled at uniform abscissae; values at
// every index, endpoints unchanged.
std::vector<double> convex_envelope_1d(std::span<const double> values);

// Sweep every lattice line in direction v, replacing interior runs by the
// lower convex envelope of the run plus its two fixed bracket points.
// Returns the max-norm change.
double line_sweep(const EnvelopeProblem& p, GridFunction& u, const GridVector& v,
                  int threads = 0);

SolveResult solve_fixed_point(const EnvelopeProblem& p, const SolverConfig& cfg);
SolveResult solve_line(const EnvelopeProblem& p, const SolverConfig& cfg);
SolveResult solve_hybrid(const EnvelopeProblem& p, const SolverConfig& cfg);

// Dispatch on cfg.strategy.
SolveResult solve(const EnvelopeProblem& p, const SolverConfig& cfg);

}  // namespace r1ce

#endif
