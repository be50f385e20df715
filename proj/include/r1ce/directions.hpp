#ifndef R1CE_DIRECTIONS_HPP
#define R1CE_DIRECTIONS_HPP

// Integer stencil direction sets: planar sets for 2-D convex envelopes,
// rank-one matrix sets for 4-D, and the special embedded sets used by the
// reduced problems. Includes the directional resolution estimator.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace r1ce {

struct GridVector {
  std::array<int, 4> e{0, 0, 0, 0};
  int dim = 0;

  GridVector() = default;
  GridVector(std::initializer_list<int> c) {
    dim = static_cast<int>(c.size());
    int k = 0;
    for (int x : c) e[k++] = x;
  }
  int operator[](int k) const { return e[k]; }
  int width() const {
    int w = 0;
    for (int k = 0; k < dim; ++k) w = std::max(w, e[k] < 0 ? -e[k] : e[k]);
    return w;
  }
  std::int64_t norm2() const {
    std::int64_t s = 0;
    for (int k = 0; k < dim; ++k) s += std::int64_t(e[k]) * e[k];
    return s;
  }
  bool operator==(const GridVector& o) const { return dim == o.dim && e == o.e; }
};

// Divide by the gcd of the entries and flip sign so the first nonzero entry is
// positive: one representative per +-pair of lattice lines.
GridVector canonical(GridVector v);

bool collinear(const GridVector& a, const GridVector& b);

struct DirectionSet {
  std::string id;
  int dim = 0;
  std::vector<GridVector> dirs;  // canonical, one per +-pair, fixed order

  int size() const { return static_cast<int>(dirs.size()); }
  int width() const {
    int w = 0;
    for (const auto& d : dirs) w = std::max(w, d.width());
    return w;
  }
};

// Planar direction families on the 2-D lattice (levels 4, 8, 16).
DirectionSet build_planar_set(int level);

// Outer products a x b of planar vectors, vectorised row-major as
// (M11, M12, M21, M22), canonicalised and deduplicated in enumeration order.
DirectionSet make_rank_one_products(const std::vector<GridVector>& planar, std::string id);

// Rank-one sets from the planar families (levels 16, 64, 256).
DirectionSet build_rank_one_set(int level);

// Named special sets: d2, d4 (diagonal 2-D), d7 (upper-triangular 3-D),
// d24 (symmetric 3-D embedding).
DirectionSet build_special_set(const std::string& name);

// JSON round-trip for custom sets: {"id": ..., "dim": ..., "dirs": [[..],..]}.
DirectionSet load_direction_set(const std::string& path);
void save_direction_set(const std::string& path, const DirectionSet& D);

// Continuum direction family a grid set approximates, used to pick resolution
// sample targets.
enum class TargetFamily {
  FullSphere,       // all unit directions in the grid dimension
  RankOneFull,      // vec(a x b), |a| = |b| = 1 (dim 4)
  RankOneUpperTri,  // rank-one upper-triangular matrices (dim 3)
  RankOneSym,       // rank-one symmetric matrices in the (x,y,z) embedding (dim 3)
  RankOneDiagonal,  // rank-one diagonal matrices (dim 2)
};

// Directional resolution: the largest line-angle from a sampled continuum
// target to its nearest set direction. Monte-Carlo over the target family
// followed by deterministic local refinement around the worst target;
// reproducible for a fixed seed.
double directional_resolution(const DirectionSet& D, TargetFamily family, int samples,
                              std::uint64_t seed = 12345);

}  // namespace r1ce

#endif
