#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gordian/thickness.hpp"

using namespace gordian;
using thickness::ball_overlap_property;
using thickness::brute_reach;
using thickness::reach;

namespace {

ClosedCurve make_circle(double r, std::size_t n, Vec3 center = {0, 0, 0}) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2.0 * kPi * double(i) / double(n);
    pts.push_back(center + Vec3{r * std::cos(t), r * std::sin(t), 0.0});
  }
  return ClosedCurve(pts);
}

// Unit-radius caps at x = +-2 joined by straights at y = +-1; length 8 + 2*pi.
ClosedCurve make_stadium(double spacing) {
  std::vector<Vec3> pts;
  auto straight = [&](Vec3 a, Vec3 b) {
    std::size_t k = std::size_t(std::ceil(dist(a, b) / spacing));
    for (std::size_t i = 0; i < k; ++i) {
      double t = double(i) / double(k);
      pts.push_back(a + t * (b - a));
    }
  };
  auto cap = [&](Vec3 center, double from) {
    std::size_t k = std::size_t(std::ceil(kPi / spacing));
    for (std::size_t i = 0; i < k; ++i) {
      double t = from - kPi * double(i) / double(k);
      pts.push_back(center + Vec3{std::cos(t), std::sin(t), 0.0});
    }
  };
  straight({-2, 1, 0}, {2, 1, 0});
  cap({2, 0, 0}, kPi / 2.0);
  straight({2, -1, 0}, {-2, -1, 0});
  cap({-2, 0, 0}, 3.0 * kPi / 2.0);
  return ClosedCurve(pts);
}

ClosedCurve make_ellipse(double a, double b, std::size_t n) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2.0 * kPi * double(i) / double(n);
    pts.push_back({a * std::cos(t), b * std::sin(t), 0.0});
  }
  return ClosedCurve(pts);
}

}  // namespace

TEST_CASE("reach of a radius-2 circle is 2") {
  ThickLink link({make_circle(2.0, 1024)});
  auto r = reach(link);
  CHECK(r.reach == Catch::Approx(2.0).margin(1e-3));
  // Inscribed triples are concyclic with the circle itself.
  CHECK(r.min_local_radius == Catch::Approx(2.0).margin(1e-9));
  // A round circle has no doubly-critical pair: the self-distance landscape
  // is monotone in arc separation, so the pair term is vacuous.
  CHECK(r.min_pair_half_distance == thickness::kInf);
}

TEST_CASE("reach of the unit stadium is 1") {
  // ~1024 vertices at uniform spacing.
  ThickLink link({make_stadium((8.0 + 2.0 * kPi) / 1024.0)});
  auto r = reach(link);
  CHECK(r.reach == Catch::Approx(1.0).margin(1e-3));
  CHECK(r.min_local_radius == Catch::Approx(1.0).margin(1e-6));
  CHECK(r.min_pair_half_distance == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("reach report serializes to JSON") {
  ThickLink link({make_stadium(0.05)});
  auto r = reach(link);
  std::string json = thickness::reach_report_json(r);
  CHECK(json.find("\"reach\"") != std::string::npos);
  CHECK(json.find("\"local_term\"") != std::string::npos);
  CHECK(json.find("\"pair_term\"") != std::string::npos);
  CHECK(json.find("\"witness\"") != std::string::npos);
  CHECK(json.find("inf") == std::string::npos);

  // No doubly-critical pair on a circle: the pair witness must be null.
  std::string round = thickness::reach_report_json(reach(ThickLink({make_circle(2.0, 128)})));
  CHECK(round.find("\"pair_term\": null") != std::string::npos);
}

TEST_CASE("reach matches the brute-force oracle") {
  std::vector<ThickLink> cases;
  cases.emplace_back(std::vector<ClosedCurve>{make_circle(2.0, 256)});
  cases.emplace_back(std::vector<ClosedCurve>{make_stadium(0.1)});
  cases.emplace_back(std::vector<ClosedCurve>{make_ellipse(4.0, 2.0, 256)});
  cases.emplace_back(
      std::vector<ClosedCurve>{make_circle(2.0, 192), make_circle(2.0, 192, {0, 0, 5})});
  for (const auto& link : cases) {
    double fast = reach(link).reach;
    double brute = brute_reach(link);
    CAPTURE(fast, brute);
    CHECK(std::abs(fast - brute) < 1e-3);
  }
}

TEST_CASE("reach scales with the curve") {
  ThickLink base({make_stadium(0.05)});
  double r0 = reach(base).reach;
  for (double lambda : {2.0, 1.37}) {
    std::vector<ClosedCurve> scaled;
    for (const auto& c : base.components)
      scaled.push_back(c.transformed(Similarity::uniform_scale(lambda)));
    double r1 = reach(ThickLink(scaled)).reach;
    CHECK(r1 == Catch::Approx(lambda * r0).margin(1e-9));
  }
}

TEST_CASE("reach witnesses re-evaluate to the reported values") {
  ThickLink link(
      {make_ellipse(4.0, 2.0, 256), make_circle(2.0, 192, {0, 0, 9})});
  auto r = reach(link);

  const ClosedCurve& lc = link.components[r.local.component];
  std::size_t n = lc.size();
  double rad = circumradius(lc.vertex(r.local.vertex + n - 1), lc.vertex(r.local.vertex),
                            lc.vertex(r.local.vertex + 1));
  CHECK(rad == Catch::Approx(r.min_local_radius).margin(1e-9));

  const ClosedCurve& ca = link.components[r.pair.comp_a];
  const ClosedCurve& cb = link.components[r.pair.comp_b];
  double chord = dist(ca.point_at(r.pair.s_a), cb.point_at(r.pair.s_b));
  CHECK(chord == Catch::Approx(r.pair.distance).margin(1e-9));
  CHECK(r.min_pair_half_distance == Catch::Approx(r.pair.distance / 2.0).margin(1e-12));
}

TEST_CASE("cross-component distances set the pair term") {
  ThickLink link({make_circle(2.0, 192), make_circle(2.0, 192, {0, 0, 1})});
  auto r = reach(link);
  CHECK(r.min_pair_half_distance == Catch::Approx(0.5).margin(1e-6));
  CHECK(r.reach == Catch::Approx(0.5).margin(1e-6));
  CHECK(r.pair.comp_a != r.pair.comp_b);
}

TEST_CASE("coarse circles still report no spurious pair") {
  // Even at 64 vertices no edge pair of a convex curve is a local minimum
  // of the distance landscape, so the reach comes from the local term alone.
  ThickLink link({make_circle(2.0, 64)});
  auto r = reach(link);
  CHECK(r.min_pair_half_distance == thickness::kInf);
  CHECK(r.reach == Catch::Approx(2.0).margin(1e-9));
  CHECK(r.reach == r.min_local_radius);
}

TEST_CASE("reach refines toward the smooth limit") {
  // Ellipse with semi-axes 4 and 2: minimum curvature radius b^2/a = 1.
  double err256 = std::abs(reach(ThickLink({make_ellipse(4, 2, 256)})).reach - 1.0);
  double err1024 = std::abs(reach(ThickLink({make_ellipse(4, 2, 1024)})).reach - 1.0);
  CHECK(err1024 < 5e-5);
  CHECK(err1024 < err256 / 4.0);
}

TEST_CASE("ball overlap holds on thick circles") {
  // On the unit circle only near-antipodal pairs qualify; widen the arc
  // admission band so 20k samples land some.
  auto report = ball_overlap_property(make_circle(1.0, 1024), 20000, 7, 1e-3, 1e-2);
  CHECK(report.pass);
  CHECK(report.qualifying > 0);
  CHECK(report.min_chord >= 2.0 - 1e-3);
  CHECK(report.min_chord <= 2.0 + 1e-3);
  // The witness pair re-evaluates to the reported chord.
  ClosedCurve c = make_circle(1.0, 1024);
  CHECK(dist(c.point_at(report.s1), c.point_at(report.s2)) ==
        Catch::Approx(report.min_chord).margin(1e-12));

  // Strictly thicker circle: qualifying chords subtend at least a quarter
  // turn, so they stay well above 2.
  auto thick = ball_overlap_property(make_circle(2.0, 1024), 20000, 7);
  CHECK(thick.pass);
  CHECK(thick.qualifying > 0);
  CHECK(thick.min_chord >= 2.0 * 2.0 * std::sin(kPi / 4.0) - 1e-2);
}

TEST_CASE("ball overlap equality is attained at antipodes") {
  // Build the unit circle with an exactly mirrored second half so antipodal
  // vertices are exact negations.
  const std::size_t n = 1024;
  std::vector<Vec3> pts(n);
  for (std::size_t i = 0; i < n / 2; ++i) {
    double t = 2.0 * kPi * double(i) / double(n);
    pts[i] = {std::cos(t), std::sin(t), 0.0};
    pts[i + n / 2] = -pts[i];
  }
  ClosedCurve c(pts);
  double lo = thickness::kInf, hi = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    double chord = dist(c.vertex(i), c.vertex(i + n / 2));
    lo = std::min(lo, chord);
    hi = std::max(hi, chord);
  }
  CHECK(lo >= 2.0 - 1e-9);
  CHECK(hi <= 2.0 + 1e-9);
}

TEST_CASE("ball overlap rejects thin curves") {
  CHECK_THROWS_AS(ball_overlap_property(make_circle(0.9, 512), 100),
                  std::invalid_argument);
}
