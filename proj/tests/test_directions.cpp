#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "r1ce/directions.hpp"
#include "r1ce/problems.hpp"  // the 12-vector refinement and its 144 products

using namespace r1ce;

namespace {

bool contains(const DirectionSet& big, const GridVector& v) {
  for (const auto& d : big.dirs)
    if (d == v) return true;
  return false;
}

}  // namespace

TEST_CASE("canonical representative") {
  CHECK(canonical({2, -4}) == GridVector{1, -2});
  CHECK(canonical({-1, 2}) == GridVector{1, -2});  // sign flip on first nonzero
  CHECK(canonical({0, -3, 0}) == GridVector{0, 1, 0});
  CHECK(canonical({-6, 9}) == GridVector{2, -3});
  CHECK_THROWS_AS(canonical({0, 0}), std::invalid_argument);
}

TEST_CASE("planar and rank-one set sizes") {
  CHECK(build_planar_set(4).size() == 4);
  CHECK(build_planar_set(8).size() == 8);
  CHECK(build_planar_set(16).size() == 16);
  CHECK(build_planar_12().size() == 12);
  CHECK(build_rank_one_set(16).size() == 16);
  CHECK(build_rank_one_set(64).size() == 64);
  CHECK(build_rank_one_set(256).size() == 256);
  CHECK(build_rank_one_144().size() == 144);
  CHECK(build_rank_one_set(16).width() == 1);
  CHECK(build_rank_one_set(64).width() == 4);
  CHECK(build_rank_one_set(256).width() == 9);
  CHECK(build_special_set("d2").size() == 2);
  CHECK(build_special_set("d4").size() == 4);
  CHECK(build_special_set("d7").size() == 7);
  CHECK(build_special_set("d24").size() == 24);
}

TEST_CASE("rank-one products de-vectorize to singular matrices") {
  for (int level : {16, 64, 256}) {
    auto D = build_rank_one_set(level);
    for (const auto& v : D.dirs) {
      // (M11, M12, M21, M22) row-major
      CHECK(v[0] * v[3] - v[1] * v[2] == 0);
    }
  }
  for (const auto& v : build_rank_one_144().dirs) CHECK(v[0] * v[3] - v[1] * v[2] == 0);
}

TEST_CASE("finer rank-one sets contain the coarser ones") {
  auto rc16 = build_rank_one_set(16);
  auto rc64 = build_rank_one_set(64);
  auto rc256 = build_rank_one_set(256);
  for (const auto& v : rc16.dirs) CHECK(contains(rc64, v));
  for (const auto& v : rc64.dirs) CHECK(contains(rc256, v));
}

TEST_CASE("symmetric embedded set lies on its cone") {
  auto d24 = build_special_set("d24");
  for (const auto& v : d24.dirs) {
    CHECK(v[0] * v[1] + v[1] * v[2] + v[2] * v[0] == 0);
  }
  // one representative per +- line pair
  for (int i = 0; i < d24.size(); ++i)
    for (int j = i + 1; j < d24.size(); ++j) CHECK(!collinear(d24.dirs[i], d24.dirs[j]));
}

TEST_CASE("upper-triangular set directions are singular") {
  auto d7 = build_special_set("d7");
  for (const auto& v : d7.dirs) {
    // (M11, M12, M22) of an upper-triangular matrix [[a, b], [0, c]]: the
    // rank-one ones have a*c = 0.
    CHECK(v[0] * v[2] == 0);
  }
}

TEST_CASE("directional resolution of the planar families") {
  const double pi = 3.14159265358979323846;
  double r2 = directional_resolution(build_special_set("d2"), TargetFamily::FullSphere, 20000);
  CHECK(r2 == doctest::Approx(pi / 4).epsilon(1e-3));
  double r4 = directional_resolution(build_planar_set(4), TargetFamily::FullSphere, 20000);
  CHECK(r4 == doctest::Approx(pi / 8).epsilon(1e-3));
  double r8 = directional_resolution(build_planar_set(8), TargetFamily::FullSphere, 20000);
  double r16 = directional_resolution(build_planar_set(16), TargetFamily::FullSphere, 20000);
  CHECK(r8 < r4);
  CHECK(r16 < r8);
  // reproducible for a fixed seed
  double again = directional_resolution(build_planar_set(8), TargetFamily::FullSphere, 20000);
  CHECK(r8 == again);
}

TEST_CASE("direction set JSON round trip") {
  auto d = build_rank_one_set(64);
  auto path = (std::filesystem::temp_directory_path() / "r1ce_dirs.json").string();
  save_direction_set(path, d);
  auto back = load_direction_set(path);
  std::remove(path.c_str());
  CHECK(back.id == d.id);
  CHECK(back.dim == d.dim);
  REQUIRE(back.size() == d.size());
  for (int i = 0; i < d.size(); ++i) CHECK(back.dirs[i] == d.dirs[i]);
}
