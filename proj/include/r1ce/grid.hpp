#ifndef R1CE_GRID_HPP
#define R1CE_GRID_HPP

// Uniform Cartesian grids in 1..4 dimensions with a padding collar of ghost
// points, flat row-major storage, and a binary dump format for grid functions.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace r1ce {

// Sentinel returned by UniformGrid::shift when the target leaves the stored grid.
inline constexpr std::int64_t kOutOfGrid = -1;

// Classification of stored grid points.
//   Interior: in-bounds points of the open domain; the PDE is enforced here.
//   Boundary: in-bounds points outside the open domain; Dirichlet data.
//   Padding:  ghost points outside the bounds; fixed extension data.
enum class PointClass : std::uint8_t { Interior = 0, Boundary = 1, Padding = 2 };

class UniformGrid {
public:
  static constexpr int kMaxDim = 4;

  // bounds are the coordinates of the first and last in-bounds point per axis;
  // npts in-bounds points per axis; pad ghost layers added on every side.
  // Spacing must agree across axes to relative 1e-12.
  UniformGrid(int dim, std::span<const double> lower, std::span<const double> upper,
              std::span<const int> npts, int pad);

  int dim() const { return dim_; }
  double h() const { return h_; }
  int pad() const { return pad_; }
  int points(int axis) const { return npts_[axis]; }
  int stored(int axis) const { return npts_[axis] + 2 * pad_; }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  std::int64_t total() const { return total_; }            // stored points incl. padding
  std::int64_t stride(int axis) const { return stride_[axis]; }

  // Coordinate of stored index i along an axis (i counts from 0 at the padding edge).
  double coord(int axis, int i) const { return lower_[axis] + (i - pad_) * h_; }

  std::int64_t flatten(const int* idx) const {
    std::int64_t f = 0;
    for (int k = 0; k < dim_; ++k) f += stride_[k] * idx[k];
    return f;
  }
  void unflatten(std::int64_t flat, int* idx) const {
    for (int k = 0; k < dim_; ++k) {
      idx[k] = static_cast<int>(flat / stride_[k]);
      flat %= stride_[k];
    }
  }
  bool in_stored(const int* idx) const {
    for (int k = 0; k < dim_; ++k)
      if (idx[k] < 0 || idx[k] >= stored(k)) return false;
    return true;
  }
  // True when the stored multi-index lies in the in-bounds region (not padding).
  bool in_bounds_index(const int* idx) const {
    for (int k = 0; k < dim_; ++k)
      if (idx[k] < pad_ || idx[k] >= pad_ + npts_[k]) return false;
    return true;
  }

  // Coordinates of a stored point.
  void point(std::int64_t flat, double* x) const {
    int idx[kMaxDim];
    unflatten(flat, idx);
    for (int k = 0; k < dim_; ++k) x[k] = coord(k, idx[k]);
  }

  // Flat offset of one step along an integer direction vector.
  std::int64_t offset(const int* v) const {
    std::int64_t off = 0;
    for (int k = 0; k < dim_; ++k) off += stride_[k] * v[k];
    return off;
  }

  // Bounds-checked shift by steps*v; returns kOutOfGrid when leaving storage.
  std::int64_t shift(std::int64_t flat, const int* v, int steps) const;

  bool operator==(const UniformGrid& o) const;

private:
  int dim_;
  int pad_;
  double h_;
  std::array<double, kMaxDim> lower_{};
  std::array<double, kMaxDim> upper_{};
  std::array<int, kMaxDim> npts_{};
  std::array<std::int64_t, kMaxDim> stride_{};
  std::int64_t total_;
};

using GridPtr = std::shared_ptr<const UniformGrid>;

GridPtr build_grid(int dim, std::span<const double> lower, std::span<const double> upper,
                   std::span<const int> npts, int pad);

// A scalar function sampled on every stored point of a grid.
struct GridFunction {
  GridPtr grid;
  std::vector<double> v;

  GridFunction() = default;
  explicit GridFunction(GridPtr g, double fill = 0.0)
      : grid(std::move(g)), v(static_cast<std::size_t>(grid->total()), fill) {}

  double& operator[](std::int64_t i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return v[static_cast<std::size_t>(i)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
};

// Sample f(x) at every stored point (padding included).
GridFunction sample(const GridPtr& g, const std::function<double(const double*)>& f);

// Classify stored points: padding by position, in-bounds points Interior when
// inside(x) holds and Boundary otherwise.
std::vector<PointClass> classify_points(const UniformGrid& g,
                                        const std::function<bool(const double*)>& inside);

// Common case: the domain is the open box strictly between the bounds, so the
// outermost in-bounds layer is Boundary. Decided by index, not coordinates.
std::vector<PointClass> classify_box(const UniformGrid& g);

// List of flat indices of all Interior points, in memory order.
std::vector<std::int64_t> interior_indices(const UniformGrid& g,
                                           const std::vector<PointClass>& cls);

// Binary dump of a grid function: one-line JSON header followed by the raw
// little-endian float64 payload in storage order (padding included).
// Round-trips bit-exactly.
void dump_gfd(const std::string& path, const GridFunction& u,
              const std::string& direction_set_id, const std::string& problem_id);

struct GfdFile {
  GridFunction u;
  std::string direction_set_id;
  std::string problem_id;
};
GfdFile load_gfd(const std::string& path);

}  // namespace r1ce

#endif
