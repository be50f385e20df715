#include "r1ce/directions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace r1ce {

GridVector canonical(GridVector v) {
  int g = 0;
  for (int k = 0; k < v.dim; ++k) g = std::gcd(g, v.e[k] < 0 ? -v.e[k] : v.e[k]);
  if (g == 0) throw std::invalid_argument("zero direction vector");
  for (int k = 0; k < v.dim; ++k) v.e[k] /= g;
  for (int k = 0; k < v.dim; ++k) {
    if (v.e[k] > 0) break;
    if (v.e[k] < 0) {
      for (int j = 0; j < v.dim; ++j) v.e[j] = -v.e[j];
      break;
    }
  }
  return v;
}

bool collinear(const GridVector& a, const GridVector& b) {
  if (a.dim != b.dim) return false;
  return canonical(a) == canonical(b);
}

static DirectionSet from_list(std::string id, int dim, std::vector<GridVector> raw) {
  DirectionSet D;
  D.id = std::move(id);
  D.dim = dim;
  for (auto& v : raw) {
    GridVector c = canonical(v);
    if (std::find(D.dirs.begin(), D.dirs.end(), c) == D.dirs.end()) D.dirs.push_back(c);
  }
  return D;
}

DirectionSet build_planar_set(int level) {
  std::vector<GridVector> v4 = {{1, 0}, {0, 1}, {-1, 1}, {1, 1}};
  std::vector<GridVector> v8ext = {{2, 1}, {1, 2}, {-1, 2}, {-2, 1}};
  std::vector<GridVector> v16ext = {{3, 1}, {3, 2}, {2, 3},  {1, 3},
                                    {-3, 1}, {-3, 2}, {-2, 3}, {-1, 3}};
  std::vector<GridVector> out = v4;
  if (level >= 8) out.insert(out.end(), v8ext.begin(), v8ext.end());
  if (level >= 16) out.insert(out.end(), v16ext.begin(), v16ext.end());
  if (level != 4 && level != 8 && level != 16)
    throw std::invalid_argument("unsupported planar direction level");
  return from_list("v" + std::to_string(level), 2, std::move(out));
}

DirectionSet make_rank_one_products(const std::vector<GridVector>& planar, std::string id) {
  std::vector<GridVector> prods;
  for (const auto& a : planar)
    for (const auto& b : planar) {
      if (a.dim != 2 || b.dim != 2) throw std::invalid_argument("rank-one factors must be 2-D");
      prods.push_back({a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]});
    }
  return from_list(std::move(id), 4, std::move(prods));
}

DirectionSet build_rank_one_set(int level) {
  if (level != 16 && level != 64 && level != 256)
    throw std::invalid_argument("unsupported rank-one direction level");
  int planar = level == 16 ? 4 : (level == 64 ? 8 : 16);
  return make_rank_one_products(build_planar_set(planar).dirs, "rc" + std::to_string(level));
}

DirectionSet build_special_set(const std::string& name) {
  if (name == "d2") return from_list("d2", 2, {{1, 0}, {0, 1}});
  if (name == "d4") return from_list("d4", 2, {{1, 0}, {0, 1}, {1, 1}, {-1, 1}});
  if (name == "d7")
    return from_list("d7", 3,
                     {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, -1, 0}, {0, 1, -1}});
  if (name == "d24") {
    // Lattice directions on the cone xy+yz+zx = 0 (rank-one in the symmetric
    // embedding): five generators and all coordinate permutations.
    const int gen[5][3] = {{1, 0, 0}, {-1, 2, 2}, {-2, 3, 6}, {-3, 4, 12}, {-6, 10, 15}};
    const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<GridVector> raw;
    for (const auto& g : gen)
      for (const auto& p : perm) raw.push_back({g[p[0]], g[p[1]], g[p[2]]});
    return from_list("d24", 3, std::move(raw));
  }
  throw std::invalid_argument("unknown special direction set: " + name);
}

DirectionSet load_direction_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open direction set file: " + path);
  nlohmann::json j;
  in >> j;
  int dim = j.at("dim").get<int>();
  if (dim < 1 || dim > 4) throw std::invalid_argument("direction set dimension must be 1..4");
  std::vector<GridVector> raw;
  for (const auto& row : j.at("dirs")) {
    GridVector v;
    v.dim = dim;
    if (static_cast<int>(row.size()) != dim)
      throw std::invalid_argument("direction entry length mismatch");
    for (int k = 0; k < dim; ++k) v.e[k] = row.at(k).get<int>();
    raw.push_back(v);
  }
  if (raw.empty()) throw std::invalid_argument("empty direction set");
  return from_list(j.value("id", std::string("custom")), dim, std::move(raw));
}

void save_direction_set(const std::string& path, const DirectionSet& D) {
  nlohmann::json j;
  j["id"] = D.id;
  j["dim"] = D.dim;
  std::vector<std::vector<int>> rows;
  for (const auto& v : D.dirs) rows.emplace_back(v.e.begin(), v.e.begin() + v.dim);
  j["dirs"] = rows;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write direction set file: " + path);
  out << j.dump(2) << "\n";
}

namespace {

// Sampled continuum target: a unit vector plus the parameters that produced
// it, so local refinement can perturb in parameter space.
struct Target {
  std::array<double, 4> w{};
  std::array<double, 4> par{};
  int branch = 0;
};

Target make_target(TargetFamily fam, int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uang(0.0, 3.14159265358979323846);
  Target t;
  switch (fam) {
    case TargetFamily::FullSphere: {
      double n2 = 0;
      do {
        n2 = 0;
        for (int k = 0; k < dim; ++k) {
          t.par[k] = gauss(rng);
          n2 += t.par[k] * t.par[k];
        }
      } while (n2 < 1e-12);
      for (int k = 0; k < dim; ++k) t.w[k] = t.par[k] / std::sqrt(n2);
      break;
    }
    case TargetFamily::RankOneFull: {
      t.par[0] = uang(rng);
      t.par[1] = uang(rng);
      break;
    }
    case TargetFamily::RankOneUpperTri: {
      t.branch = (rng() & 1) ? 1 : 0;
      t.par[0] = uang(rng);
      break;
    }
    case TargetFamily::RankOneSym: {
      t.par[0] = uang(rng);
      break;
    }
    case TargetFamily::RankOneDiagonal: {
      t.branch = (rng() & 1) ? 1 : 0;
      break;
    }
  }
  return t;
}

void realize(TargetFamily fam, Target& t) {
  switch (fam) {
    case TargetFamily::FullSphere:
      break;  // w already set from par by caller
    case TargetFamily::RankOneFull: {
      double a0 = std::cos(t.par[0]), a1 = std::sin(t.par[0]);
      double b0 = std::cos(t.par[1]), b1 = std::sin(t.par[1]);
      t.w = {a0 * b0, a0 * b1, a1 * b0, a1 * b1};
      break;
    }
    case TargetFamily::RankOneUpperTri: {
      double c = std::cos(t.par[0]), s = std::sin(t.par[0]);
      t.w = t.branch ? std::array<double, 4>{0, c, s, 0} : std::array<double, 4>{c, s, 0, 0};
      break;
    }
    case TargetFamily::RankOneSym: {
      double a0 = std::cos(t.par[0]), a1 = std::sin(t.par[0]);
      double z = a0 * a1;
      double x = a0 * a0 - z, y = a1 * a1 - z;
      double n = std::sqrt(x * x + y * y + z * z);
      if (n < 1e-12) {
        t.w = {1, 0, 0, 0};  // degenerate parameter; harmless for a max estimate
      } else {
        t.w = {x / n, y / n, z / n, 0};
      }
      break;
    }
    case TargetFamily::RankOneDiagonal: {
      t.w = t.branch ? std::array<double, 4>{0, 1, 0, 0} : std::array<double, 4>{1, 0, 0, 0};
      break;
    }
  }
}

double line_angle_to_set(const DirectionSet& D, const std::array<double, 4>& w) {
  double best = 1e300;
  for (const auto& v : D.dirs) {
    double dot = 0, n2 = 0;
    for (int k = 0; k < D.dim; ++k) {
      dot += w[k] * v[k];
      n2 += double(v[k]) * v[k];
    }
    double c = std::abs(dot) / std::sqrt(n2);
    c = std::min(1.0, c);
    best = std::min(best, std::acos(c));
  }
  return best;
}

}  // namespace

double directional_resolution(const DirectionSet& D, TargetFamily family, int samples,
                              std::uint64_t seed) {
  if (family == TargetFamily::RankOneDiagonal) {
    // The target family is finite: both axes.
    double a = line_angle_to_set(D, {1, 0, 0, 0});
    double b = line_angle_to_set(D, {0, 1, 0, 0});
    return std::max(a, b);
  }

  std::mt19937_64 rng(seed);
  Target best;
  double best_angle = -1.0;
  for (int s = 0; s < samples; ++s) {
    Target t = make_target(family, D.dim, rng);
    if (family == TargetFamily::FullSphere) {
      // par holds the unnormalised vector; w was set during make_target
    }
    realize(family, t);
    double a = line_angle_to_set(D, t.w);
    if (a > best_angle) {
      best_angle = a;
      best = t;
    }
  }

  // Deterministic local refinement of the worst target.
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sigma = 0.3;
  for (int round = 0; round < 28; ++round) {
    for (int c = 0; c < 32; ++c) {
      Target t = best;
      if (family == TargetFamily::FullSphere) {
        double n2 = 0;
        for (int k = 0; k < D.dim; ++k) {
          t.par[k] += sigma * gauss(rng);
          n2 += t.par[k] * t.par[k];
        }
        if (n2 < 1e-12) continue;
        for (int k = 0; k < D.dim; ++k) t.w[k] = t.par[k] / std::sqrt(n2);
      } else {
        t.par[0] += sigma * gauss(rng);
        t.par[1] += sigma * gauss(rng);
        realize(family, t);
      }
      double a = line_angle_to_set(D, t.w);
      if (a > best_angle) {
        best_angle = a;
        best = t;
      }
    }
    sigma *= 0.7;
  }
  return best_angle;
}

}  // namespace r1ce
