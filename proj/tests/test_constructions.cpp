#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "gordian/constructions.hpp"

using namespace gordian;
using Catch::Matchers::ContainsSubstring;

namespace {

bool same_vertices(const ClosedCurve& a, const ClosedCurve& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec3 va = a.vertices()[i], vb = b.vertices()[i];
    if (va.x != vb.x || va.y != vb.y || va.z != vb.z) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("flat component has the exact smooth length at any resolution") {
  for (std::size_t segs : {128u, 512u, 1024u}) {
    auto beta = constructions::make_beta(kPi / 2.0, segs);
    CHECK(std::abs(beta.curve.length() - constructions::kBetaLength) < 1e-9);
  }
  auto skew = constructions::make_beta(kPi / 3.0, 512);
  CHECK(std::abs(skew.curve.length() - constructions::kBetaLength) < 1e-9);
}

TEST_CASE("flat component is a planar offset of the corner parallelogram") {
  auto beta = constructions::make_beta(kPi / 2.0, 512);

  std::array<Vec3, 4> expect = {Vec3{-1, -1, 0}, Vec3{-1, 1, 0}, Vec3{1, 1, 0}, Vec3{1, -1, 0}};
  for (int i = 0; i < 4; ++i) CHECK(dist(beta.corners[i], expect[i]) < 1e-12);

  for (const Vec3& v : beta.curve.vertices()) CHECK(std::abs(v.z) < 1e-12);

  // Every corner sits at distance 2 from the offset boundary (up to the
  // length-preserving rescale) and the centroid is the center.
  for (const Vec3& c : beta.corners) {
    double d = beta.curve.distance_to(c);
    CHECK(std::abs(d - 2.0) < 2e-3);
  }
  CHECK(norm(beta.curve.centroid()) < 1e-9);
}

TEST_CASE("flat component cone angle is one full turn") {
  for (double phi : {kPi / 3.0, kPi / 2.0, 2.0 * kPi / 3.0}) {
    auto beta = constructions::make_beta(phi, 512);
    cones::Cone cone = cones::build_cone(beta.curve);
    CHECK(std::abs(cones::cone_angle(cone) - 2.0 * kPi) < 1e-6);
  }
}

TEST_CASE("corner angles outside the supported range are rejected") {
  CHECK_THROWS_AS(constructions::make_beta(kPi / 4.0), std::invalid_argument);
  CHECK_THROWS_AS(constructions::make_beta(3.0 * kPi / 4.0), std::invalid_argument);
  CHECK_THROWS_AS(constructions::make_beta(kPi / 2.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(constructions::plan_weave(0, 1, kPi / 2.0), std::invalid_argument);
  CHECK_THROWS_AS(constructions::plan_weave(1, 0, kPi / 2.0), std::invalid_argument);
  CHECK_THROWS_AS(constructions::plan_weave(1, 1, kPi / 2.0, -1.0), std::invalid_argument);
}

TEST_CASE("weave plan stacks its axial levels in order") {
  auto p = constructions::plan_weave(2, 3, kPi / 2.0);
  CHECK(p.z_n0 > 0.0);
  CHECK(p.z_n1 > p.z_n0);
  CHECK(p.z_m0 > p.z_n1);
  CHECK(p.z_m1 > p.z_m0);
  CHECK(p.z_a3 > p.z_m1);
  CHECK(p.z_a1 > p.z_a3 + 1.0);
  CHECK(p.z_stub_bot < 0.0);
  CHECK(p.z_q0 < p.z_stub_bot);
  CHECK(p.z_q1 < p.z_q0);
  CHECK(p.z_b4 < p.z_q1);
  CHECK(p.z_b2 < p.z_b4 - 1.0);
  CHECK(p.span_n == constructions::coil_span(3, p.kit));
  CHECK(p.span_m == constructions::coil_span(2, p.kit));
}

TEST_CASE("weaving component pieces tile the vertex range with ascending marks") {
  auto alpha = constructions::make_alpha(1, 1, 512);

  std::size_t covered = 0;
  for (const auto& r : alpha.pieces) {
    CHECK(r.first_vertex == covered);
    covered += r.count;
  }
  CHECK(covered == alpha.curve.size());

  CHECK(alpha.marks[0] < alpha.marks[1]);
  CHECK(alpha.marks[1] < alpha.marks[2]);
  CHECK(alpha.marks[2] < alpha.marks[3]);
  CHECK(alpha.marks[3] < alpha.curve.length());
  CHECK(alpha.marks[0] > 1.0);

  // Plane passages happen exactly at the corners, moving vertically.
  std::array<Vec3, 4> expect = {Vec3{-1, -1, 0}, Vec3{-1, 1, 0}, Vec3{1, 1, 0}, Vec3{1, -1, 0}};
  for (int i = 0; i < 4; ++i) {
    CHECK(dist(alpha.curve.point_at(alpha.marks[i]), expect[i]) < 1e-9);
    CHECK(std::abs(alpha.curve.tangent_at(alpha.marks[i]).z) > 1.0 - 1e-9);
  }
}

TEST_CASE("built link passes its own gate and reports the requested twists") {
  auto b = constructions::make_L(-1, 1);
  REQUIRE(b.link.components.size() == 2);
  CHECK(b.marks.alpha == 0);
  REQUIRE(b.marks.betas == std::vector<std::size_t>{1});

  auto rb = thickness::reach(b.link);
  CHECK(rb.reach >= 1.0 - 1e-2);

  auto rep = isotopy::monitor(b.link, b.marks);
  CHECK(rep.all_conditions());
  CHECK(rep.conclusions_hold());
  CHECK(rep.lk13 == -1);
  CHECK(rep.lk24 == 1);
  CHECK(rep.min_arc_len > 2.0 * kPi * std::sqrt(3.0) - 2.0);
  CHECK(rep.four_point.pass);
  CHECK(std::abs(rep.theta - 2.0 * kPi) < 1e-6);
}

TEST_CASE("gate holds across twist counts and corner angles") {
  auto tight = constructions::make_L(3, -2, 512, kPi / 3.0);
  auto rep1 = isotopy::monitor(tight.link, tight.marks);
  CHECK(rep1.all_conditions());
  CHECK(rep1.lk13 == 3);
  CHECK(rep1.lk24 == -2);

  auto wide = constructions::make_L(-2, -1, 512, 2.0 * kPi / 3.0);
  auto rep2 = isotopy::monitor(wide.link, wide.marks);
  CHECK(rep2.all_conditions());
  CHECK(rep2.lk13 == -2);
  CHECK(rep2.lk24 == -1);
}

TEST_CASE("degenerate twist counts are rejected before any assembly") {
  CHECK_THROWS_AS(constructions::make_L(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(constructions::make_L(1, 0), std::invalid_argument);
  CHECK_THROWS_WITH(constructions::make_L(0, 2), ContainsSubstring("m must be nonzero"));
}

TEST_CASE("weaving component is certified trivial by diagram reduction") {
  auto alpha = constructions::make_alpha(1, 1, 384);
  CHECK(topology::unknot_by_reduction(alpha.curve, 64));
}

TEST_CASE("construction is deterministic") {
  auto a = constructions::make_L(1, 1, 256);
  auto b = constructions::make_L(1, 1, 256);
  CHECK(same_vertices(a.link.components[0], b.link.components[0]));
  CHECK(same_vertices(a.link.components[1], b.link.components[1]));
  CHECK(a.marks.marks == b.marks.marks);
}

TEST_CASE("stacked variant weaves every copy with the same twists") {
  auto st = constructions::make_stacked(3, 1, 1);
  REQUIRE(st.link.components.size() == 3);
  REQUIRE(st.marks.betas.size() == 2);

  for (std::size_t j = 0; j < st.marks.betas.size(); ++j) {
    auto rep = isotopy::monitor(st.link, st.marks.alpha, st.marks.betas[j]);
    CHECK(rep.all_conditions());
    CHECK(rep.lk13 == 1);
    CHECK(rep.lk24 == 1);
  }

  for (std::size_t a = 0; a + 1 < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      auto g = topology::gauss_linking(st.link.components[a], st.link.components[b]);
      CHECK(g.rounded == 0);
    }

  CHECK_FALSE(topology::find_any_split(st.link).has_value());
}

TEST_CASE("two-high stack is the plain construction") {
  auto plain = constructions::make_L(1, 2, 256);
  auto st = constructions::make_stacked(2, 1, 2, 256);
  REQUIRE(st.link.components.size() == 2);
  CHECK(same_vertices(plain.link.components[0], st.link.components[0]));
  CHECK(same_vertices(plain.link.components[1], st.link.components[1]));
  CHECK(st.marks.marks == plain.marks.marks);
}

TEST_CASE("stack sizes outside the supported range are rejected") {
  CHECK_THROWS_AS(constructions::make_stacked(1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(constructions::make_stacked(13, 1, 1), std::invalid_argument);
}
