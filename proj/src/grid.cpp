#include "r1ce/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace r1ce {

static_assert(std::endian::native == std::endian::little,
              "gfd dumps assume a little-endian host");

UniformGrid::UniformGrid(int dim, std::span<const double> lower, std::span<const double> upper,
                         std::span<const int> npts, int pad)
    : dim_(dim), pad_(pad) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("grid dimension must be 1..4");
  if (pad < 0) throw std::invalid_argument("negative padding");
  if (static_cast<int>(lower.size()) < dim || static_cast<int>(upper.size()) < dim ||
      static_cast<int>(npts.size()) < dim)
    throw std::invalid_argument("bounds/npts shorter than dimension");

  for (int k = 0; k < dim; ++k) {
    if (npts[k] < 2) throw std::invalid_argument("need at least 2 points per axis");
    if (!(upper[k] > lower[k])) throw std::invalid_argument("upper bound not above lower bound");
    lower_[k] = lower[k];
    upper_[k] = upper[k];
    npts_[k] = npts[k];
  }
  h_ = (upper_[0] - lower_[0]) / (npts_[0] - 1);
  for (int k = 1; k < dim; ++k) {
    double hk = (upper_[k] - lower_[k]) / (npts_[k] - 1);
    if (std::abs(hk - h_) > 1e-12 * std::max(1.0, std::abs(h_)))
      throw std::invalid_argument("non-uniform spacing across axes");
  }

  // Row-major strides, last axis contiguous; guard the total against overflow.
  const std::int64_t limit = std::int64_t(1) << 40;
  std::int64_t tot = 1;
  for (int k = dim - 1; k >= 0; --k) {
    stride_[k] = (k == dim - 1) ? 1 : stride_[k + 1] * stored(k + 1);
    tot *= stored(k);
    if (tot > limit) throw std::overflow_error("grid point count overflows index budget");
  }
  total_ = tot;
}

std::int64_t UniformGrid::shift(std::int64_t flat, const int* v, int steps) const {
  int idx[kMaxDim];
  unflatten(flat, idx);
  for (int k = 0; k < dim_; ++k) idx[k] += steps * v[k];
  if (!in_stored(idx)) return kOutOfGrid;
  return flatten(idx);
}

bool UniformGrid::operator==(const UniformGrid& o) const {
  if (dim_ != o.dim_ || pad_ != o.pad_) return false;
  for (int k = 0; k < dim_; ++k)
    if (lower_[k] != o.lower_[k] || upper_[k] != o.upper_[k] || npts_[k] != o.npts_[k])
      return false;
  return true;
}

GridPtr build_grid(int dim, std::span<const double> lower, std::span<const double> upper,
                   std::span<const int> npts, int pad) {
  return std::make_shared<const UniformGrid>(dim, lower, upper, npts, pad);
}

GridFunction sample(const GridPtr& g, const std::function<double(const double*)>& f) {
  GridFunction u(g);
  double x[UniformGrid::kMaxDim];
  for (std::int64_t i = 0; i < g->total(); ++i) {
    g->point(i, x);
    u[i] = f(x);
  }
  return u;
}

std::vector<PointClass> classify_points(const UniformGrid& g,
                                        const std::function<bool(const double*)>& inside) {
  std::vector<PointClass> cls(static_cast<std::size_t>(g.total()));
  int idx[UniformGrid::kMaxDim];
  double x[UniformGrid::kMaxDim];
  for (std::int64_t i = 0; i < g.total(); ++i) {
    g.unflatten(i, idx);
    if (!g.in_bounds_index(idx)) {
      cls[i] = PointClass::Padding;
    } else {
      for (int k = 0; k < g.dim(); ++k) x[k] = g.coord(k, idx[k]);
      cls[i] = inside(x) ? PointClass::Interior : PointClass::Boundary;
    }
  }
  return cls;
}

std::vector<PointClass> classify_box(const UniformGrid& g) {
  std::vector<PointClass> cls(static_cast<std::size_t>(g.total()));
  int idx[UniformGrid::kMaxDim];
  for (std::int64_t i = 0; i < g.total(); ++i) {
    g.unflatten(i, idx);
    if (!g.in_bounds_index(idx)) {
      cls[i] = PointClass::Padding;
      continue;
    }
    bool edge = false;
    for (int k = 0; k < g.dim(); ++k)
      if (idx[k] == g.pad() || idx[k] == g.pad() + g.points(k) - 1) edge = true;
    cls[i] = edge ? PointClass::Boundary : PointClass::Interior;
  }
  return cls;
}

std::vector<std::int64_t> interior_indices(const UniformGrid& g,
                                           const std::vector<PointClass>& cls) {
  std::vector<std::int64_t> out;
  for (std::int64_t i = 0; i < g.total(); ++i)
    if (cls[static_cast<std::size_t>(i)] == PointClass::Interior) out.push_back(i);
  return out;
}

void dump_gfd(const std::string& path, const GridFunction& u,
              const std::string& direction_set_id, const std::string& problem_id) {
  const UniformGrid& g = *u.grid;
  nlohmann::json hdr;
  hdr["format"] = "GFD1";
  hdr["dim"] = g.dim();
  std::vector<std::vector<double>> bounds;
  std::vector<int> npts;
  for (int k = 0; k < g.dim(); ++k) {
    bounds.push_back({g.lower(k), g.upper(k)});
    npts.push_back(g.points(k));
  }
  hdr["bounds"] = bounds;
  hdr["points_per_axis"] = npts;
  hdr["pad_cells"] = g.pad();
  hdr["direction_set_id"] = direction_set_id;
  hdr["problem_id"] = problem_id;

  std::string line = hdr.dump();
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fwrite(line.data(), 1, line.size(), f);
  std::fputc('\n', f);
  std::size_t n = u.v.size();
  if (std::fwrite(u.v.data(), sizeof(double), n, f) != n) {
    std::fclose(f);
    throw std::runtime_error("short write: " + path);
  }
  std::fclose(f);
}

GfdFile load_gfd(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string line;
  int c;
  while ((c = std::fgetc(f)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(line);
  } catch (const std::exception&) {
    std::fclose(f);
    throw std::runtime_error("bad gfd header: " + path);
  }
  if (hdr.value("format", "") != std::string("GFD1")) {
    std::fclose(f);
    throw std::runtime_error("not a GFD1 file: " + path);
  }
  int dim = hdr.at("dim").get<int>();
  std::vector<double> lo, hi;
  for (auto& b : hdr.at("bounds")) {
    lo.push_back(b.at(0).get<double>());
    hi.push_back(b.at(1).get<double>());
  }
  std::vector<int> npts = hdr.at("points_per_axis").get<std::vector<int>>();
  int pad = hdr.at("pad_cells").get<int>();

  GfdFile out;
  out.direction_set_id = hdr.value("direction_set_id", "");
  out.problem_id = hdr.value("problem_id", "");
  out.u = GridFunction(build_grid(dim, lo, hi, npts, pad));
  std::size_t n = out.u.v.size();
  if (std::fread(out.u.v.data(), sizeof(double), n, f) != n) {
    std::fclose(f);
    throw std::runtime_error("truncated gfd payload: " + path);
  }
  std::fclose(f);
  return out;
}

}  // namespace r1ce
