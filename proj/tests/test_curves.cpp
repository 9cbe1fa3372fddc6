#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gordian/curve.hpp"

using namespace gordian;

namespace {

ClosedCurve square(double half = 1.0) {
  return ClosedCurve({{-half, -half, 0}, {half, -half, 0}, {half, half, 0}, {-half, half, 0}});
}

ClosedCurve circle(double radius, std::size_t n, Vec3 center = {0, 0, 0}) {
  std::vector<Vec3> vs;
  vs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a = 2.0 * kPi * double(i) / double(n);
    vs.push_back(center + Vec3{radius * std::cos(a), radius * std::sin(a), 0.0});
  }
  return ClosedCurve(std::move(vs));
}

// Rectangles glued into an L: (0,0) (2,0) (2,1) (1,1) (1,2) (0,2).
ClosedCurve l_hexagon() {
  return ClosedCurve({{0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {1, 1, 0}, {1, 2, 0}, {0, 2, 0}});
}

}  // namespace

TEST_CASE("constructor validates invariants") {
  CHECK_THROWS_AS(ClosedCurve({{0, 0, 0}, {1, 0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ClosedCurve({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 1, 0}}),
                  std::invalid_argument);
  // Spike: the path doubles back along its own edge.
  CHECK_THROWS_AS(ClosedCurve({{0, 0, 0}, {2, 0, 0}, {1, 0, 0}, {0, 1, 0}}),
                  std::invalid_argument);
  Vec3 bad{0, 0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(ClosedCurve({{0, 0, 0}, {1, 0, 0}, bad}), std::invalid_argument);
}

TEST_CASE("length on reference curves") {
  CHECK(square().length() == Catch::Approx(8.0).epsilon(1e-15));
  // Regular hexagon inscribed in the unit circle has six unit edges.
  CHECK(circle(1.0, 6).length() == Catch::Approx(6.0).epsilon(1e-12));
  // Cumulative table is consistent.
  auto c = circle(2.0, 257);
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += c.edge_length(i);
  CHECK(sum == Catch::Approx(c.length()).epsilon(1e-14));
}

TEST_CASE("centroid is the arc-length-weighted first moment") {
  auto sq = square();
  CHECK(norm(sq.centroid()) == Catch::Approx(0.0).margin(1e-15));

  auto c = circle(1.0, 4096, {3, 0, 0});
  CHECK(norm(c.centroid() - Vec3{3, 0, 0}) == Catch::Approx(0.0).margin(1e-6));

  // Frozen line-integral value for the L-shaped hexagon, confirmed by the
  // dense-subdivision oracle below: (7/8, 7/8, 0).
  auto hexa = l_hexagon();
  Vec3 cen = hexa.centroid();
  CHECK(cen.x == Catch::Approx(0.875).margin(1e-12));
  CHECK(cen.y == Catch::Approx(0.875).margin(1e-12));

  // Oracle: subdivide every edge 10^4 times and average positions weighted
  // by local arc length.
  Vec3 acc{0, 0, 0};
  double wsum = 0.0;
  for (std::size_t i = 0; i < hexa.size(); ++i) {
    Vec3 a = hexa.vertex(i), b = hexa.vertex(i + 1);
    double w = dist(a, b) / 1e4;
    for (int k = 0; k < 10000; ++k) {
      double t = (k + 0.5) / 1e4;
      acc += (a + (b - a) * t) * w;
      wsum += w;
    }
  }
  Vec3 oracle = acc / wsum;
  CHECK(norm(cen - oracle) == Catch::Approx(0.0).margin(1e-6));
}

TEST_CASE("resample") {
  SECTION("square at its own vertices is unchanged") {
    auto sq = ClosedCurve({{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}});
    auto rs = sq.resample(4);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(norm(rs.vertex(i) - sq.vertex(i)) == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("resampling a fine circle gives the inscribed-polygon length") {
    auto fine = circle(1.0, 4096);
    auto hexa = fine.resample(6);
    CHECK(hexa.length() == Catch::Approx(6.0).margin(1e-4));
  }
  SECTION("length never increases and converges at rate 1/n^2") {
    auto fine = circle(1.0, 8192);
    double d64 = fine.length() - fine.resample(64).length();
    double d128 = fine.length() - fine.resample(128).length();
    CHECK(d64 > 0.0);
    CHECK(d128 > 0.0);
    CHECK(d64 / d128 == Catch::Approx(4.0).epsilon(0.15));
  }
  SECTION("n < 3 rejected") {
    CHECK_THROWS_AS(square().resample(2), std::invalid_argument);
  }
}

TEST_CASE("transform scales length and maps the centroid") {
  auto sq = square();
  CHECK(sq.transformed(Similarity::uniform_scale(2.0)).length() == Catch::Approx(16.0));

  auto rigid = Similarity::rotation({0.3, -1, 2}, 0.77) * Similarity::translation({5, -2, 1});
  CHECK(sq.transformed(rigid).length() == Catch::Approx(sq.length()).epsilon(1e-12));

  auto c = circle(1.5, 801, {1, 2, 3});
  auto t = Similarity::uniform_scale(1.7) * Similarity::rotation({1, 1, 0}, 0.4) *
           Similarity::translation({-2, 0, 4});
  Vec3 lhs = c.transformed(t).centroid();
  Vec3 rhs = t.apply(c.centroid());
  CHECK(norm(lhs - rhs) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("arc_distance") {
  auto c = circle(1.0, 4096);
  double L = c.length();
  auto [a, b] = c.arc_distance(0.0, L / 2.0);
  CHECK(a == Catch::Approx(L / 2).epsilon(1e-12));
  CHECK(b == Catch::Approx(L / 2).epsilon(1e-12));

  auto sq = square();
  auto [f, r] = sq.arc_distance(0.0, 2.0);
  CHECK(f == Catch::Approx(2.0));
  CHECK(r == Catch::Approx(6.0));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, sq.length());
  for (int i = 0; i < 100; ++i) {
    auto [x, y] = sq.arc_distance(u(rng), u(rng));
    CHECK(x + y == Catch::Approx(sq.length()).margin(1e-12));
  }
  CHECK_THROWS_AS(sq.arc_distance(-0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sq.arc_distance(0.0, sq.length() + 0.1), std::invalid_argument);
}

TEST_CASE("point_at and tangent_at address by arc length") {
  auto sq = ClosedCurve({{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}});
  CHECK(norm(sq.point_at(1.0) - Vec3{1, 0, 0}) == Catch::Approx(0.0).margin(1e-12));
  CHECK(norm(sq.point_at(3.0) - Vec3{2, 1, 0}) == Catch::Approx(0.0).margin(1e-12));
  CHECK(norm(sq.point_at(8.0) - sq.vertex(0)) == Catch::Approx(0.0).margin(1e-12));
  CHECK(norm(sq.tangent_at(0.5) - Vec3{1, 0, 0}) == Catch::Approx(0.0).margin(1e-12));
  CHECK(norm(sq.tangent_at(2.5) - Vec3{0, 1, 0}) == Catch::Approx(0.0).margin(1e-12));
}
