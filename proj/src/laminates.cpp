#include "r1ce/laminates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace r1ce {
namespace {

const char* kclass_name(KClass c) {
  switch (c) {
    case KClass::NotInK: return "outside";
    case KClass::InteriorOfK: return "interior";
    case KClass::BoundaryOfK: return "boundary";
    case KClass::ExtremeOfK: return "extreme";
  }
  return "?";
}

bool in_mask(const UniformGrid& g, const std::vector<std::uint8_t>& mask, std::int64_t flat,
             const GridVector& v, int steps) {
  std::int64_t t = g.shift(flat, v.e.data(), steps);
  return t != kOutOfGrid && mask[static_cast<std::size_t>(t)];
}

// Maximal arm length: largest k >= 0 with every step x + j*sgn*v in K.
int arm_length(const UniformGrid& g, const std::vector<std::uint8_t>& mask, std::int64_t flat,
               const GridVector& v, int sgn) {
  int k = 0;
  while (in_mask(g, mask, flat, v, sgn * (k + 1))) ++k;
  return k;
}

struct SplitChoice {
  int dir = -1;
  int k_plus = 0, k_minus = 0;
};

// Candidate directions are those along which the node is d-connected. Prefer
// splits whose two endpoints are both extreme, then extreme/boundary, then
// boundary/boundary; first direction in set order breaks ties.
SplitChoice choose_split(const UniformGrid& g, const std::vector<std::uint8_t>& mask,
                         const DirectionSet& D, std::int64_t flat) {
  SplitChoice best;
  int best_rank = 3;
  for (int d = 0; d < D.size(); ++d) {
    const GridVector& v = D.dirs[d];
    if (!in_mask(g, mask, flat, v, 1) || !in_mask(g, mask, flat, v, -1)) continue;
    int kp = arm_length(g, mask, flat, v, +1);
    int km = arm_length(g, mask, flat, v, -1);
    KClass cp = classify_in_K(g, mask, g.shift(flat, v.e.data(), kp), D);
    KClass cm = classify_in_K(g, mask, g.shift(flat, v.e.data(), -km), D);
    int rank = (cp == KClass::ExtremeOfK ? 0 : 1) + (cm == KClass::ExtremeOfK ? 0 : 1);
    if (rank < best_rank) {
      best_rank = rank;
      best = {d, kp, km};
    }
  }
  return best;
}

}  // namespace

LevelSet extract_level_set(const EnvelopeProblem& p, const GridFunction& u, double kappa) {
  const UniformGrid& g = *p.grid;
  LevelSet ls;
  ls.m = p.min_g;
  ls.kappa = kappa;
  ls.mask.assign(static_cast<std::size_t>(g.total()), 0);
  ls.supp_mask.assign(static_cast<std::size_t>(g.total()), 0);
  const double cut = ls.m + kappa * g.h();
  for (std::int64_t f = 0; f < g.total(); ++f) {
    if (p.cls[static_cast<std::size_t>(f)] != PointClass::Interior) continue;
    if (u[f] <= cut) {
      ls.points.push_back(f);
      ls.mask[static_cast<std::size_t>(f)] = 1;
      if (u[f] >= p.g[f] - kappa * g.h()) {
        ls.supp_mask[static_cast<std::size_t>(f)] = 1;
        ++ls.support_count;
      }
    }
  }
  if (ls.points.empty())
    throw EmptyLevelSetError("level set u <= min g + kappa h contains no interior point");
  return ls;
}

KClass classify_in_K(const UniformGrid& g, const std::vector<std::uint8_t>& mask,
                     std::int64_t flat, const DirectionSet& D) {
  if (flat == kOutOfGrid || !mask[static_cast<std::size_t>(flat)]) return KClass::NotInK;
  int connected = 0;
  for (const auto& v : D.dirs)
    if (in_mask(g, mask, flat, v, 1) && in_mask(g, mask, flat, v, -1)) ++connected;
  if (connected == 0) return KClass::ExtremeOfK;
  if (connected == D.size()) return KClass::InteriorOfK;
  return KClass::BoundaryOfK;
}

std::vector<std::int64_t> find_extreme_path(const UniformGrid& g,
                                            const std::vector<std::uint8_t>& mask,
                                            const DirectionSet& D, std::int64_t start) {
  std::vector<std::int64_t> path{start};
  std::int64_t cur = start;
  for (;;) {
    int moved = -1;
    for (int d = 0; d < D.size(); ++d) {
      if (!in_mask(g, mask, cur, D.dirs[d], 1)) continue;
      int k = arm_length(g, mask, cur, D.dirs[d], +1);
      cur = g.shift(cur, D.dirs[d].e.data(), k);
      path.push_back(cur);
      moved = d;
      break;
    }
    if (moved < 0) break;  // no positive step left: extreme
  }
  return path;
}

Laminate extract_laminate(const EnvelopeProblem& p, const GridFunction& u,
                          std::span<const double> barycenter, const LaminateOptions& opt) {
  const UniformGrid& g = *p.grid;
  LevelSet ls = extract_level_set(p, u, opt.kappa);

  int idx[UniformGrid::kMaxDim];
  for (int k = 0; k < g.dim(); ++k) {
    double t = (barycenter[static_cast<std::size_t>(k)] - g.lower(k)) / g.h();
    idx[k] = static_cast<int>(std::lround(t)) + g.pad();
    if (idx[k] < 0 || idx[k] >= g.stored(k))
      throw std::invalid_argument("barycenter lies outside the stored grid");
  }
  std::int64_t root_flat = g.flatten(idx);
  if (!ls.mask[static_cast<std::size_t>(root_flat)])
    throw std::invalid_argument("barycenter does not round to a level-set point");

  Laminate lam;
  lam.directions = p.directions;

  auto make_node = [&](std::int64_t flat, double weight, int depth) {
    auto n = std::make_unique<LaminateNode>();
    n->flat = flat;
    n->weight = weight;
    n->depth = depth;
    g.unflatten(flat, n->idx.data());
    for (int k = 0; k < g.dim(); ++k) n->x[static_cast<std::size_t>(k)] = g.coord(k, n->idx[static_cast<std::size_t>(k)]);
    n->cls = classify_in_K(g, ls.mask, flat, p.directions);
    return n;
  };

  // Recursive split; forced >= 0 pins the direction (root only).
  auto build = [&](auto&& self, LaminateNode& node, int forced) -> void {
    lam.max_depth_reached = std::max(lam.max_depth_reached, node.depth);
    if (node.cls == KClass::ExtremeOfK || node.depth >= opt.max_depth) {
      ++lam.leaf_count;
      return;
    }
    SplitChoice sc;
    if (forced >= 0) {
      const GridVector& v = p.directions.dirs[forced];
      if (!in_mask(g, ls.mask, node.flat, v, 1) || !in_mask(g, ls.mask, node.flat, v, -1))
        throw std::invalid_argument("requested split direction is not connected at the barycenter");
      sc = {forced, arm_length(g, ls.mask, node.flat, v, +1),
            arm_length(g, ls.mask, node.flat, v, -1)};
    } else {
      sc = choose_split(g, ls.mask, p.directions, node.flat);
    }
    if (sc.dir < 0) {  // no connected direction: treat as a leaf
      ++lam.leaf_count;
      return;
    }
    node.dir = sc.dir;
    node.k_plus = sc.k_plus;
    node.k_minus = sc.k_minus;
    const GridVector& v = p.directions.dirs[sc.dir];
    double total = static_cast<double>(sc.k_plus + sc.k_minus);
    node.plus = make_node(g.shift(node.flat, v.e.data(), sc.k_plus),
                          node.weight * (sc.k_minus / total), node.depth + 1);
    node.minus = make_node(g.shift(node.flat, v.e.data(), -sc.k_minus),
                           node.weight * (sc.k_plus / total), node.depth + 1);
    self(self, *node.plus, -1);
    self(self, *node.minus, -1);
  };

  lam.root = make_node(root_flat, 1.0, 0);
  build(build, *lam.root, opt.initial_direction);
  return lam;
}

std::vector<std::pair<std::int64_t, double>> laminate_leaves(const Laminate& lam) {
  std::vector<std::pair<std::int64_t, double>> out;
  auto walk = [&](auto&& self, const LaminateNode& n) -> void {
    if (n.dir < 0) {
      out.emplace_back(n.flat, n.weight);
      return;
    }
    self(self, *n.plus);
    self(self, *n.minus);
  };
  if (lam.root) walk(walk, *lam.root);
  return out;
}

LaminateCheck verify_laminate(const UniformGrid& g, const Laminate& lam) {
  LaminateCheck chk;
  if (!lam.root) return chk;
  bool exact = true;
  auto walk = [&](auto&& self, const LaminateNode& n) -> void {
    if (n.dir < 0) return;
    std::int64_t total = n.k_plus + n.k_minus;
    for (int k = 0; k < g.dim(); ++k) {
      std::int64_t lhs = std::int64_t(n.k_minus) * n.plus->idx[static_cast<std::size_t>(k)] +
                         std::int64_t(n.k_plus) * n.minus->idx[static_cast<std::size_t>(k)];
      if (lhs != total * n.idx[static_cast<std::size_t>(k)]) exact = false;
    }
    self(self, *n.plus);
    self(self, *n.minus);
  };
  walk(walk, *lam.root);
  chk.per_node_exact = exact;

  std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
  double wsum = 0.0;
  for (const auto& [flat, w] : laminate_leaves(lam)) {
    double x[UniformGrid::kMaxDim];
    g.point(flat, x);
    for (int k = 0; k < g.dim(); ++k) acc[static_cast<std::size_t>(k)] += w * x[k];
    wsum += w;
  }
  double err = std::abs(wsum - 1.0);
  for (int k = 0; k < g.dim(); ++k)
    err = std::max(err, std::abs(acc[static_cast<std::size_t>(k)] -
                                 lam.root->x[static_cast<std::size_t>(k)]));
  chk.recombination_error = err;
  return chk;
}

SupportWeights support_weights(const Laminate& lam, const EnvelopeProblem& p, int radius) {
  const UniformGrid& g = *p.grid;
  SupportWeights sw;
  sw.upsilon.assign(p.wells.size(), 0.0);
  if (p.wells.empty()) return sw;

  // Wells in stored-index coordinates.
  std::vector<std::array<int, 4>> widx(p.wells.size());
  for (std::size_t w = 0; w < p.wells.size(); ++w)
    for (int k = 0; k < g.dim(); ++k)
      widx[w][static_cast<std::size_t>(k)] =
          static_cast<int>(std::lround((p.wells[w][static_cast<std::size_t>(k)] - g.lower(k)) / g.h())) +
          g.pad();

  int idx[UniformGrid::kMaxDim];
  for (const auto& [flat, wt] : laminate_leaves(lam)) {
    g.unflatten(flat, idx);
    int best = std::numeric_limits<int>::max();
    std::size_t best_w = 0;
    for (std::size_t w = 0; w < widx.size(); ++w) {
      int d = 0;
      for (int k = 0; k < g.dim(); ++k)
        d = std::max(d, std::abs(idx[k] - widx[w][static_cast<std::size_t>(k)]));
      if (d < best) {
        best = d;
        best_w = w;
      }
    }
    if (best <= radius) {
      sw.upsilon[best_w] += wt;
      sw.bar += wt;
    }
  }
  return sw;
}

namespace {

nlohmann::json node_json(const LaminateNode& n, int dim) {
  nlohmann::json j;
  j["x"] = std::vector<double>(n.x.begin(), n.x.begin() + dim);
  j["weight"] = n.weight;
  j["depth"] = n.depth;
  j["class"] = kclass_name(n.cls);
  if (n.dir >= 0) {
    j["dir"] = n.dir;
    j["k_plus"] = n.k_plus;
    j["k_minus"] = n.k_minus;
    j["plus"] = node_json(*n.plus, dim);
    j["minus"] = node_json(*n.minus, dim);
  }
  return j;
}

}  // namespace

void laminate_to_json(const std::string& path, const Laminate& lam, const EnvelopeProblem& p,
                      const SupportWeights* sw) {
  nlohmann::json j;
  j["problem"] = p.id;
  j["direction_set"] = lam.directions.id;
  j["leaf_count"] = lam.leaf_count;
  j["max_depth_reached"] = lam.max_depth_reached;
  if (lam.root) j["root"] = node_json(*lam.root, p.grid->dim());
  if (sw) {
    j["support"] = {{"upsilon", sw->upsilon}, {"bar", sw->bar}};
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void laminate_to_dot(const std::string& path, const Laminate& lam) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "digraph laminate {\n  node [shape=box];\n";
  const int dim = lam.directions.dim;
  int counter = 0;
  auto walk = [&](auto&& self, const LaminateNode& n) -> int {
    int me = counter++;
    std::ostringstream label;
    label << "(";
    for (int k = 0; k < dim; ++k) {
      if (k) label << ",";
      label << n.x[static_cast<std::size_t>(k)];
    }
    label << ") w=" << n.weight;
    out << "  n" << me << " [label=\"" << label.str() << "\"];\n";
    if (n.dir >= 0) {
      int a = self(self, *n.plus);
      int b = self(self, *n.minus);
      out << "  n" << me << " -> n" << a << " [label=\"+" << n.k_plus << "\"];\n";
      out << "  n" << me << " -> n" << b << " [label=\"-" << n.k_minus << "\"];\n";
    }
    return me;
  };
  if (lam.root) walk(walk, *lam.root);
  out << "}\n";
}

void leaves_to_csv(const std::string& path, const Laminate& lam, const EnvelopeProblem& p) {
  const UniformGrid& g = *p.grid;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int k = 0; k < g.dim(); ++k) out << "x" << k << ",";
  out << "weight\n";
  char buf[64];
  for (const auto& [flat, w] : laminate_leaves(lam)) {
    double x[UniformGrid::kMaxDim];
    g.point(flat, x);
    for (int k = 0; k < g.dim(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", x[k]);
      out << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g", w);
    out << buf << "\n";
  }
}

}  // namespace r1ce
