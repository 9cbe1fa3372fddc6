#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "gordian/link.hpp"

using namespace gordian;

namespace {

ThickLink random_link(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<ClosedCurve> comps;
  for (int c = 0; c < 2; ++c) {
    std::vector<Vec3> vs;
    Vec3 center{u(rng), u(rng), u(rng) + 40.0 * c};
    for (int i = 0; i < 37; ++i) {
      double a = 2.0 * kPi * i / 37.0;
      // Irrational-looking coordinates so the bitwise round-trip is earned.
      vs.push_back(center + Vec3{3.0 * std::cos(a) + 0.01 * u(rng),
                                 3.0 * std::sin(a) + 0.01 * u(rng), 0.1 * u(rng)});
    }
    comps.emplace_back(std::move(vs));
  }
  return ThickLink(std::move(comps), 1.0);
}

}  // namespace

TEST_CASE("serialize then parse reproduces coordinates bitwise") {
  ThickLink link = random_link(3);
  ThickLink back = parse_link(serialize_link(link));
  REQUIRE(back.components.size() == link.components.size());
  CHECK(back.thickness == link.thickness);
  for (std::size_t c = 0; c < link.components.size(); ++c) {
    REQUIRE(back.components[c].size() == link.components[c].size());
    for (std::size_t i = 0; i < link.components[c].size(); ++i) {
      CHECK(back.components[c].vertex(i) == link.components[c].vertex(i));
    }
  }
}

TEST_CASE("serialization is deterministic") {
  ThickLink link = random_link(11);
  CHECK(serialize_link(link) == serialize_link(link));
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS(parse_link("{ not json"));
  CHECK_THROWS(parse_link("{}"));
  CHECK_THROWS(parse_link(R"({"version":"other/9","thickness":1,"components":[]})"));
  // Truncated file.
  std::string good = serialize_link(random_link(5));
  CHECK_THROWS(parse_link(good.substr(0, good.size() / 2)));
  // Open component.
  CHECK_THROWS(parse_link(
      R"({"version":"gordian-link/1","thickness":1,
          "components":[{"closed":false,"vertices":[[0,0,0],[1,0,0],[0,1,0]]}]})"));
}

TEST_CASE("file round trip via atomic write") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "gordian_io_test";
  fs::create_directories(dir);
  fs::path file = dir / "link.json";

  ThickLink link = random_link(23);
  save_link(link, file);
  CHECK(!fs::exists(file.string() + ".tmp"));
  ThickLink back = load_link(file);
  CHECK(serialize_link(back) == serialize_link(link));
  fs::remove_all(dir);
}

TEST_CASE("thickness validation") {
  std::vector<ClosedCurve> comps;
  comps.push_back(ClosedCurve({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
  CHECK_THROWS_AS(ThickLink(comps, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ThickLink(comps, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ThickLink(std::vector<ClosedCurve>{}, 1.0), std::invalid_argument);
}

TEST_CASE("disjointness check sees touching components") {
  std::vector<ClosedCurve> far;
  far.push_back(ClosedCurve({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
  far.push_back(ClosedCurve({{0, 0, 5}, {1, 0, 5}, {0, 1, 5}}));
  CHECK(ThickLink(far, 1.0).components_disjoint());

  std::vector<ClosedCurve> touch;
  touch.push_back(ClosedCurve({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
  touch.push_back(ClosedCurve({{0.5, 0, 0}, {1.5, 0, 0}, {0.5, -1, 0}}));
  CHECK(!ThickLink(touch, 1.0).components_disjoint());
}

TEST_CASE("marks sidecar round trip") {
  LinkMarks m;
  m.alpha = 0;
  m.betas = {1, 2};
  m.marks.push_back({0.5, 1.5, 2.5, 3.5});
  m.marks.push_back({10.125, 11.25, 12.375, 13.625});
  LinkMarks back = parse_marks(serialize_marks(m));
  CHECK(back.alpha == m.alpha);
  CHECK(back.betas == m.betas);
  REQUIRE(back.marks.size() == 2);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 4; ++k) CHECK(back.marks[i][k] == m.marks[i][k]);

  CHECK(marks_path_for("out/l11.json") == std::filesystem::path("out/l11.marks.json"));
}
