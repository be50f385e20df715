#ifndef R1CE_LAMINATES_HPP
#define R1CE_LAMINATES_HPP

// Laminate extraction from a computed envelope: the minimal level set K, the
// d-connectivity classification of its points, and the recursive pairwise
// splitting that builds a weighted tree whose leaves approximate the
// supporting measure.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "r1ce/problems.hpp"

namespace r1ce {

// Thrown when the minimal level set contains no interior point; callers map
// this to a distinct exit code.
struct EmptyLevelSetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LevelSet {
  std::vector<std::int64_t> points;      // interior flat indices with u <= m + kappa h
  std::vector<std::uint8_t> mask;        // membership over all stored points
  std::vector<std::uint8_t> supp_mask;   // members that also touch the obstacle
  double m = 0.0;                        // min of g over in-bounds points
  double kappa = 0.0;
  std::int64_t support_count = 0;
};

// K = {interior x : u(x) <= m + kappa h}; supporting points additionally have
// u(x) >= g(x) - kappa h. Throws when K is empty.
LevelSet extract_level_set(const EnvelopeProblem& p, const GridFunction& u, double kappa);

enum class KClass : std::uint8_t { NotInK, InteriorOfK, BoundaryOfK, ExtremeOfK };

// d-connected at x means both unit steps x +- v stay in K. Interior: connected
// along every direction; Extreme: along none; Boundary: in between.
KClass classify_in_K(const UniformGrid& g, const std::vector<std::uint8_t>& mask,
                     std::int64_t flat, const DirectionSet& D);

// Greedy walk to an extreme point of K: repeatedly take the first direction
// (in set order) that admits a positive step and follow it as far as K allows.
// Canonical direction signs make every move lexicographically increasing, so
// the walk terminates. Returns the polyline of stop points, ending extreme.
std::vector<std::int64_t> find_extreme_path(const UniformGrid& g,
                                            const std::vector<std::uint8_t>& mask,
                                            const DirectionSet& D, std::int64_t start);

struct LaminateNode {
  std::int64_t flat = 0;
  std::array<double, 4> x{};   // grid coordinates
  std::array<int, 4> idx{};    // stored multi-index
  double weight = 1.0;
  int depth = 0;
  KClass cls = KClass::NotInK;
  // Split data; dir < 0 for leaves.
  int dir = -1;
  int k_plus = 0, k_minus = 0;
  std::unique_ptr<LaminateNode> plus, minus;
};

struct LaminateOptions {
  double kappa = 1.0;
  int max_depth = 20;
  // Index into the direction set forced at the root split; -1 = use priority.
  int initial_direction = -1;
};

struct Laminate {
  std::unique_ptr<LaminateNode> root;
  DirectionSet directions;
  int leaf_count = 0;
  int max_depth_reached = 0;
};

// Build the splitting tree at a barycenter (grid coordinates, must round to a
// K point). Splits extend maximally both ways along the chosen direction and
// weight children by the opposite arm length, so each node is exactly the
// convex combination of its children in integer index arithmetic.
Laminate extract_laminate(const EnvelopeProblem& p, const GridFunction& u,
                          std::span<const double> barycenter, const LaminateOptions& opt);

// Flat list of (flat index, weight) over leaves.
std::vector<std::pair<std::int64_t, double>> laminate_leaves(const Laminate& lam);

struct LaminateCheck {
  bool per_node_exact = false;   // integer barycenter identity at every split
  double recombination_error = 0.0;  // | sum w_i x_i - root | in double arithmetic
};
LaminateCheck verify_laminate(const UniformGrid& g, const Laminate& lam);

struct SupportWeights {
  std::vector<double> upsilon;  // leaf mass near each well, well order
  double bar = 0.0;             // total captured mass
};

// Leaf mass within radius grid steps (Chebyshev, nearest well wins) of each
// well of the problem.
SupportWeights support_weights(const Laminate& lam, const EnvelopeProblem& p, int radius = 1);

void laminate_to_json(const std::string& path, const Laminate& lam, const EnvelopeProblem& p,
                      const SupportWeights* sw = nullptr);
void laminate_to_dot(const std::string& path, const Laminate& lam);
void leaves_to_csv(const std::string& path, const Laminate& lam, const EnvelopeProblem& p);

}  // namespace r1ce

#endif
