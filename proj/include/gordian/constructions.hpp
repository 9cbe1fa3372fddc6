#pragma once

// Builders for the doubly-woven thick link family. The flat component is a
// rounded parallelogram (four straight sides joined by radius-2 corner
// arcs); the weaving component rises and falls through its plane at the
// four corner points, alternating over and under, with two coil blocks
// that twist paired strands around each other a prescribed number of full
// turns above the plane and one mirrored coil block below. All clearances
// are laid out for a unit tube radius and confirmed numerically after
// assembly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cones.hpp"
#include "curve.hpp"
#include "diagram.hpp"
#include "geometry.hpp"
#include "isotopy.hpp"
#include "link.hpp"
#include "thickness.hpp"
#include "topology.hpp"

namespace gordian::constructions {

/// Smooth boundary length of the flat component: four sides of length 2
/// plus full-turn corner arcs of radius 2.
constexpr double kBetaLength = 8.0 + 4.0 * kPi;

/// Handedness of the two coil blocks, fixed so that the reported linking
/// numbers equal the requested twist counts (see the calibration test).
constexpr double kTwistSignM = -1.0;
constexpr double kTwistSignN = 1.0;

/// Layout constants of the weave, in tube-radius units.
struct WeaveKit {
  double stub = 2.0;          // straight vertical run at each corner before any feature
  double pitch = 1.2;         // axial distance per radian of coil rotation
  double ramp = 2.5;          // rotation-rate ramp length at each coil end
  double gap = 0.5;           // axial clearance between stacked features
  double escape = 1.8;        // lateral offset of a rail stepping around a feature
  double jog_radius = 1.3;    // bend radius of the step-aside arc pair
  double arch_stagger = 3.0;  // axial separation between arches on crossing sides
};

/// Axial extent of a coil twisting |k| full turns: plateau rotation rate
/// 1/pitch with linear ramps, so the span is pitch * 2pi|k| + ramp.
inline double coil_span(int k, const WeaveKit& kit) {
  return kit.pitch * 2.0 * kPi * std::abs(k) + kit.ramp;
}

/// Resolved geometry of one weave: corner frame, coil axes, escape
/// points, and every axial level, ready for emission.
struct WeavePlan {
  int m = 1;
  int n = 1;
  double phi = kPi / 2.0;
  double below_extension = 0.0;  // extra straight depth below the plane
  WeaveKit kit;

  Vec3 u1, u2;                  // corner half-diagonals (unit, in the plane)
  std::array<Vec3, 4> corner;   // p1..p4, clockwise
  Vec3 axis_n, axis_m;          // coil axes (in-plane points)
  std::array<Vec3, 4> escape;   // E1..E4, outward of each corner
  double jog_rise = 0.0;        // axial rise of one step-aside jog

  double twist_m = 0.0;         // total coil rotation angles (signed)
  double twist_n = 0.0;
  double span_m = 0.0;
  double span_n = 0.0;

  double z_n0 = 0.0, z_n1 = 0.0;      // first coil band above the plane
  double z_m0 = 0.0, z_m1 = 0.0;      // second coil band above the plane
  double z_a3 = 0.0, z_a1 = 0.0;      // arch base levels above
  double z_stub_bot = 0.0;            // bottom of the straight runs below
  double z_q0 = 0.0, z_q1 = 0.0;      // mirrored coil band below the plane
  double z_b4 = 0.0, z_b2 = 0.0;      // arch base levels below
};

inline WeavePlan plan_weave(int m, int n, double phi, double below_extension = 0.0) {
  if (m == 0 || n == 0) throw std::invalid_argument("plan_weave: twist counts must be nonzero");
  if (!(phi >= kPi / 3.0 - 1e-12 && phi <= 2.0 * kPi / 3.0 + 1e-12))
    throw std::invalid_argument("plan_weave: corner angle outside [pi/3, 2pi/3]");
  if (below_extension < 0.0)
    throw std::invalid_argument("plan_weave: negative below extension");

  WeavePlan p;
  p.m = m;
  p.n = n;
  p.phi = phi;
  p.below_extension = below_extension;

  Vec3 w{std::cos(kPi / 4.0), std::sin(kPi / 4.0), 0.0};
  auto rot_z = [](Vec3 v, double a) {
    return Vec3{v.x * std::cos(a) - v.y * std::sin(a), v.x * std::sin(a) + v.y * std::cos(a),
                0.0};
  };
  p.u1 = rot_z(w, -phi / 2.0);
  p.u2 = rot_z(w, phi / 2.0);
  p.corner = {-1.0 * p.u1 - p.u2, -1.0 * p.u1 + p.u2, p.u1 + p.u2, p.u1 - p.u2};
  p.axis_n = -1.0 * p.u1;  // midpoint of the p1-p2 side
  p.axis_m = -1.0 * p.u2;  // midpoint of the p4-p1 side

  auto outward = [&](Vec3 dir) {
    double nn = norm(dir);
    return (p.kit.escape / nn) * dir;
  };
  p.escape = {p.corner[0] + outward(-1.0 * p.u1 - p.u2),
              p.corner[1] + outward(-1.0 * p.u1 + p.u2),
              p.corner[2] + outward(p.u1 + p.u2), p.corner[3] + outward(p.u1 - p.u2)};

  double chi = std::acos(1.0 - p.kit.escape / (2.0 * p.kit.jog_radius));
  p.jog_rise = 2.0 * p.kit.jog_radius * std::sin(chi);

  p.twist_m = kTwistSignM * 2.0 * kPi * double(m);
  p.twist_n = kTwistSignN * 2.0 * kPi * double(n);
  p.span_m = coil_span(m, p.kit);
  p.span_n = coil_span(n, p.kit);

  double h = p.jog_rise, g = p.kit.gap, s = p.kit.stub;
  p.z_n0 = s + h + g;
  p.z_n1 = p.z_n0 + p.span_n;
  p.z_m0 = p.z_n1 + h + g;
  p.z_m1 = p.z_m0 + p.span_m;
  p.z_a3 = p.z_m1 + 1.0;
  p.z_a1 = p.z_m1 + 2.0 * h + g;
  p.z_stub_bot = -(s + below_extension);
  p.z_q0 = p.z_stub_bot - (h + g);
  p.z_q1 = p.z_q0 - p.span_n;
  p.z_b4 = p.z_q1 - (h + g);
  p.z_b2 = p.z_b4 - p.kit.arch_stagger;
  return p;
}

/// Flat component: the outward offset at distance 2 of the corner
/// parallelogram, sampled uniformly and rescaled so the polyline length
/// equals the smooth length exactly.
struct BetaShape {
  ClosedCurve curve;
  std::array<Vec3, 4> corners;
  double phi = 0.0;
};

inline BetaShape make_beta(double phi = kPi / 2.0, std::size_t segments = 512) {
  if (!(phi >= kPi / 3.0 - 1e-12 && phi <= 2.0 * kPi / 3.0 + 1e-12))
    throw std::invalid_argument("make_beta: corner angle outside [pi/3, 2pi/3]");
  if (segments < 64) throw std::invalid_argument("make_beta: fewer than 64 segments");

  WeavePlan frame = plan_weave(1, 1, phi);
  const auto& c = frame.corner;

  // Boundary pieces: offset side, then a corner arc turning through the
  // exterior angle, repeated around the clockwise traversal.
  struct Side {
    Vec3 from, to;
  };
  struct Arc {
    Vec3 center;
    double start_angle, turn;  // clockwise turn (negative direction)
  };
  std::array<Vec3, 4> nrm;
  for (int i = 0; i < 4; ++i) {
    Vec3 e = c[(i + 1) % 4] - c[i];
    Vec3 left{-e.y, e.x, 0.0};
    nrm[i] = (1.0 / norm(left)) * left;
  }
  std::array<Side, 4> sides;
  std::array<Arc, 4> arcs;
  double total = 0.0;
  std::array<double, 8> cumulative{};  // side, arc, side, arc, ...
  for (int i = 0; i < 4; ++i) {
    sides[i] = {c[i] + 2.0 * nrm[i], c[(i + 1) % 4] + 2.0 * nrm[i]};
    Vec3 a = nrm[i], b = nrm[(i + 1) % 4];
    double turn = std::acos(std::clamp(dot(a, b), -1.0, 1.0));
    arcs[i] = {c[(i + 1) % 4], std::atan2(a.y, a.x), turn};
    cumulative[2 * i] = total += 2.0;
    cumulative[2 * i + 1] = total += 2.0 * turn;
  }

  std::vector<Vec3> pts(segments);
  for (std::size_t k = 0; k < segments; ++k) {
    double s = double(k) * total / double(segments);
    int piece = 0;
    while (piece < 7 && s >= cumulative[piece]) ++piece;
    double begin = piece == 0 ? 0.0 : cumulative[piece - 1];
    double local = s - begin;
    if (piece % 2 == 0) {
      const Side& sd = sides[piece / 2];
      pts[k] = sd.from + (local / 2.0) * (sd.to - sd.from);
    } else {
      const Arc& ar = arcs[piece / 2];
      double ang = ar.start_angle - local / 2.0;  // clockwise, radius 2
      pts[k] = ar.center + Vec3{2.0 * std::cos(ang), 2.0 * std::sin(ang), 0.0};
    }
  }
  double poly = 0.0;
  for (std::size_t k = 0; k < segments; ++k) poly += dist(pts[k], pts[(k + 1) % segments]);
  double scale = total / poly;
  for (Vec3& v : pts) v = scale * v;

  return BetaShape{ClosedCurve(pts), c, phi};
}

namespace detail {

/// One emitted route piece: name plus its polyline including both ends.
struct Piece {
  std::string name;
  std::vector<Vec3> points;
};

struct Sampler {
  double straight, curve;  // target vertex spacing
};

inline Vec3 at_z(Vec3 xy, double z) { return {xy.x, xy.y, z}; }

inline Piece vseg(const std::string& name, Vec3 xy, double z0, double z1, const Sampler& sp) {
  std::size_t n = std::max<std::size_t>(1, std::size_t(std::ceil(std::abs(z1 - z0) / sp.straight)));
  Piece p{name, {}};
  for (std::size_t i = 0; i <= n; ++i)
    p.points.push_back(at_z(xy, z0 + (z1 - z0) * double(i) / double(n)));
  return p;
}

/// Step-aside jog: two tangent arcs of equal radius carrying a vertical
/// strand from corner column `a` to column `b` (or back) while the height
/// changes by the plan's jog rise in direction `dz`.
inline Piece jog(const std::string& name, Vec3 a, Vec3 b, double z0, double dz,
                 const WeavePlan& plan, const Sampler& sp) {
  double e = norm(b - a);
  Vec3 d = (1.0 / e) * (b - a);
  double R = plan.kit.jog_radius;
  double chi = std::acos(1.0 - e / (2.0 * R));
  std::size_t half = std::max<std::size_t>(2, std::size_t(std::ceil(chi * R / sp.curve)));
  Piece p{name, {}};
  for (std::size_t i = 0; i <= half; ++i) {
    double t = chi * double(i) / double(half);
    p.points.push_back(at_z(a + (R * (1.0 - std::cos(t))) * d, z0 + dz * R * std::sin(t)));
  }
  for (std::size_t i = 1; i <= half; ++i) {
    double t = chi * (1.0 - double(i) / double(half));
    p.points.push_back(
        at_z(a + (e - R * (1.0 - std::cos(t))) * d, z0 + dz * (plan.jog_rise - R * std::sin(t))));
  }
  return p;
}

/// Radius-1 semicircle joining two corner columns over (dir = +1) or
/// under (dir = -1) their connecting side; the columns are 2 apart so the
/// arc meets both with a vertical tangent.
inline Piece arch(const std::string& name, Vec3 from, Vec3 to, double z_base, double dir,
                  const Sampler& sp) {
  Vec3 mid = 0.5 * (from + to);
  Vec3 half = 0.5 * (to - from);
  std::size_t n = std::max<std::size_t>(4, std::size_t(std::ceil(kPi / sp.curve)));
  Piece p{name, {}};
  for (std::size_t i = 0; i <= n; ++i) {
    double t = kPi * double(i) / double(n);
    p.points.push_back(at_z(mid + (-std::cos(t)) * half, z_base + dir * std::sin(t)));
  }
  return p;
}

/// Rotation angle of a coil at height z above its band bottom: linear-ramp
/// trapezoid rate profile integrating to the full twist, with zero rate
/// (vertical strand tangents) at both ends.
inline double coil_angle(double z, double span, double total, double ramp) {
  double rate = total / (span - ramp);
  if (z <= 0.0) return 0.0;
  if (z >= span) return total;
  if (z < ramp) return rate * z * z / (2.0 * ramp);
  if (z <= span - ramp) return rate * (ramp / 2.0 + (z - ramp));
  double back = span - z;
  return total - rate * back * back / (2.0 * ramp);
}

/// One strand of a coil band: the home column rotated rigidly about the
/// axis by the height-dependent coil angle. Both strands of a band share
/// the angle profile, so their separation stays exactly 2.
inline Piece coil(const std::string& name, const WeavePlan& plan, Vec3 axis, Vec3 home, double z0,
                  double z1, double total, bool ascending, const Sampler& sp) {
  double span = z1 - z0;
  double speed = std::sqrt(1.0 + std::pow(std::abs(total) / (span - plan.kit.ramp), 2));
  std::size_t n = std::max<std::size_t>(4, std::size_t(std::ceil(span * speed / sp.curve)));
  Vec3 arm = home - axis;
  Piece p{name, {}};
  for (std::size_t i = 0; i <= n; ++i) {
    double f = double(i) / double(n);
    double z = ascending ? z0 + span * f : z1 - span * f;
    double a = coil_angle(z - z0, span, total, plan.kit.ramp);
    Vec3 turned{arm.x * std::cos(a) - arm.y * std::sin(a),
                arm.x * std::sin(a) + arm.y * std::cos(a), 0.0};
    p.points.push_back(at_z(axis + turned, z));
  }
  return p;
}

}  // namespace detail

/// Index range of one route piece in the assembled weaving component.
struct PieceRecord {
  std::string name;
  std::size_t first_vertex = 0;
  std::size_t count = 0;
};

struct AlphaBuild {
  ClosedCurve curve;
  std::array<double, 4> marks;  // parameters of the four plane passages, ascending
  std::vector<PieceRecord> pieces;
  WeavePlan plan;
};

/// Emits the weaving component for a plan. The route climbs through both
/// coil blocks at the first corner, crosses the top arch, returns through
/// the first coil, dives through the mirrored coil below, crosses the two
/// bottom arches, and closes over the second top arch; rails that would
/// pass a feature too closely step aside to the corner's escape column.
inline AlphaBuild make_alpha(const WeavePlan& plan, std::size_t segments = 512) {
  if (segments < 64) throw std::invalid_argument("make_alpha: fewer than 64 segments");
  double f = 512.0 / double(segments);
  detail::Sampler sp{0.85 * f, 0.18 * f};
  detail::Sampler sj{0.85 * f, 0.25 * f};  // jogs and arches bend at radius >= 1

  const auto& c = plan.corner;
  const auto& e = plan.escape;
  const double h = plan.jog_rise;
  const double s = plan.kit.stub;

  std::vector<detail::Piece> route;
  auto add = [&](detail::Piece p) { route.push_back(std::move(p)); };

  // First quarter: corner 1 up and over to corner 2.
  add(detail::vseg("a1-stub-up", c[0], 0.0, plan.z_n0, sp));
  add(detail::coil("a1-coil-n-up", plan, plan.axis_n, c[0], plan.z_n0, plan.z_n1, plan.twist_n,
                   true, sp));
  add(detail::vseg("a1-rail-mid", c[0], plan.z_n1, plan.z_m0, sp));
  add(detail::coil("a1-coil-m-up", plan, plan.axis_m, c[0], plan.z_m0, plan.z_m1, plan.twist_m,
                   true, sp));
  add(detail::jog("a1-jog-out-e1", c[0], e[0], plan.z_m1, 1.0, plan, sj));
  add(detail::vseg("a1-rail-e1", e[0], plan.z_m1 + h, plan.z_a1 - h, sp));
  add(detail::jog("a1-jog-in-e1", e[0], c[0], plan.z_a1 - h, 1.0, plan, sj));
  add(detail::arch("a1-arch-a1", c[0], c[1], plan.z_a1, 1.0, sj));
  add(detail::jog("a1-jog-out-e2", c[1], e[1], plan.z_a1, -1.0, plan, sj));
  add(detail::vseg("a1-rail-e2", e[1], plan.z_a1 - h, plan.z_n1 + h, sp));
  add(detail::jog("a1-jog-in-e2", e[1], c[1], plan.z_n1 + h, -1.0, plan, sj));
  add(detail::coil("a1-coil-n-down", plan, plan.axis_n, c[1], plan.z_n0, plan.z_n1, plan.twist_n,
                   false, sp));
  add(detail::vseg("a1-return", c[1], plan.z_n0, 0.0, sp));

  // Second quarter: corner 2 down and under to corner 3.
  add(detail::vseg("a2-stub-down", c[1], 0.0, plan.z_q0, sp));
  add(detail::coil("a2-coil-q-down", plan, plan.axis_n, c[1], plan.z_q1, plan.z_q0, -plan.twist_n,
                   false, sp));
  add(detail::jog("a2-jog-out-e2", c[1], e[1], plan.z_q1, -1.0, plan, sj));
  add(detail::vseg("a2-rail-e2", e[1], plan.z_q1 - h, plan.z_b2 + h, sp));
  add(detail::jog("a2-jog-in-e2", e[1], c[1], plan.z_b2 + h, -1.0, plan, sj));
  add(detail::arch("a2-arch-b2", c[1], c[2], plan.z_b2, -1.0, sj));
  add(detail::jog("a2-jog-out-e3", c[2], e[2], plan.z_b2, 1.0, plan, sj));
  add(detail::vseg("a2-rail-e3", e[2], plan.z_b2 + h, plan.z_stub_bot - h, sp));
  add(detail::jog("a2-jog-in-e3", e[2], c[2], plan.z_stub_bot - h, 1.0, plan, sj));
  add(detail::vseg("a2-return", c[2], plan.z_stub_bot, 0.0, sp));

  // Third quarter: corner 3 up and over to corner 4.
  add(detail::vseg("a3-stub-up", c[2], 0.0, s, sp));
  add(detail::jog("a3-jog-out-e3", c[2], e[2], s, 1.0, plan, sj));
  add(detail::vseg("a3-rail-e3", e[2], s + h, plan.z_a3 - h, sp));
  add(detail::jog("a3-jog-in-e3", e[2], c[2], plan.z_a3 - h, 1.0, plan, sj));
  add(detail::arch("a3-arch-a3", c[2], c[3], plan.z_a3, 1.0, sj));
  add(detail::vseg("a3-rail-top", c[3], plan.z_a3, plan.z_m1, sp));
  add(detail::coil("a3-coil-m-down", plan, plan.axis_m, c[3], plan.z_m0, plan.z_m1, plan.twist_m,
                   false, sp));
  add(detail::jog("a3-jog-out-e4", c[3], e[3], plan.z_m0, -1.0, plan, sj));
  add(detail::vseg("a3-rail-e4", e[3], plan.z_m0 - h, s + h, sp));
  add(detail::jog("a3-jog-in-e4", e[3], c[3], s + h, -1.0, plan, sj));
  add(detail::vseg("a3-return", c[3], s, 0.0, sp));

  // Fourth quarter: corner 4 down and under back to corner 1.
  add(detail::vseg("a4-stub-down", c[3], 0.0, plan.z_stub_bot, sp));
  add(detail::jog("a4-jog-out-e4", c[3], e[3], plan.z_stub_bot, -1.0, plan, sj));
  add(detail::vseg("a4-rail-e4", e[3], plan.z_stub_bot - h, plan.z_b4 + h, sp));
  add(detail::jog("a4-jog-in-e4", e[3], c[3], plan.z_b4 + h, -1.0, plan, sj));
  add(detail::arch("a4-arch-b4", c[3], c[0], plan.z_b4, -1.0, sj));
  add(detail::vseg("a4-rail-low", c[0], plan.z_b4, plan.z_q1, sp));
  add(detail::coil("a4-coil-q-up", plan, plan.axis_n, c[0], plan.z_q1, plan.z_q0, -plan.twist_n,
                   true, sp));
  add(detail::vseg("a4-return", c[0], plan.z_q0, 0.0, sp));

  // Start the vertex numbering at the lowest arch so the plane passages
  // sit well inside the parameter range (never straddling parameter 0).
  std::size_t start = 0;
  while (route[start].name != "a4-arch-b4") ++start;
  std::rotate(route.begin(), route.begin() + long(start), route.end());

  std::vector<Vec3> verts;
  std::vector<PieceRecord> records;
  for (std::size_t i = 0; i < route.size(); ++i) {
    const auto& piece = route[i];
    const auto& next = route[(i + 1) % route.size()];
    if (dist(piece.points.back(), next.points.front()) > 1e-9)
      throw std::logic_error("make_alpha: route discontinuity at " + piece.name);
    records.push_back({piece.name, verts.size(), piece.points.size() - 1});
    verts.insert(verts.end(), piece.points.begin(), piece.points.end() - 1);
  }

  AlphaBuild out{ClosedCurve(verts), {}, std::move(records), plan};
  auto mark_at = [&](const std::string& name) {
    for (const PieceRecord& r : out.pieces)
      if (r.name == name) return out.curve.vertex_param(r.first_vertex);
    throw std::logic_error("make_alpha: missing route piece " + name);
  };
  out.marks = {mark_at("a1-stub-up"), mark_at("a2-stub-down"), mark_at("a3-stub-up"),
               mark_at("a4-stub-down")};
  return out;
}

inline AlphaBuild make_alpha(int m, int n, std::size_t segments = 512, double phi = kPi / 2.0) {
  return make_alpha(plan_weave(m, n, phi), segments);
}

struct LinkBuild {
  ThickLink link;
  LinkMarks marks;
};

namespace detail {

/// Full verification gate shared by the link builders; throws a
/// runtime_error naming the first violated requirement.
inline void verify_build(const std::string& who, const ThickLink& link, const LinkMarks& marks,
                         int m, int n) {
  auto fail = [&](const std::string& what) { throw std::runtime_error(who + ": " + what); };

  auto rb = thickness::reach(link);
  if (rb.reach < 1.0 - 1e-2)
    fail("reach " + io::format_double(rb.reach) + " below 0.99");

  const ClosedCurve& alpha = link.components[marks.alpha];
  for (std::size_t j = 0; j < marks.betas.size(); ++j) {
    std::size_t bi = marks.betas[j];
    const ClosedCurve& beta = link.components[bi];

    if (std::abs(beta.length() - kBetaLength) > 1e-3)
      fail("flat component length deviates from 8 + 4pi");

    auto rep = isotopy::monitor(link, marks.alpha, bi);
    if (!rep.condition1) fail("disk crossing count is not four");
    if (!rep.condition2) fail("crossing feet arcs not all above pi");
    if (!rep.condition3) fail("crossing quadrilateral not convex with sides >= 2");
    if (!rep.condition4) fail("cone apex not interior to the crossing quadrilateral");
    if (!rep.condition5) fail("closed quarters do not link");
    if (std::abs(rep.theta - 2.0 * kPi) > 1e-3) fail("cone angle deviates from 2pi");
    if (rep.min_arc_len < 2.0 * kPi * std::sqrt(3.0) - 2.0)
      fail("weaving arc below the 2pi*sqrt(3) - 2 bound");
    if (!rep.four_point.pass) fail("four-point clearance check failed");
    if (rep.lk13 != m || rep.lk24 != n) fail("linking numbers differ from the twist counts");

    // Independent linking route: signed crossings of a generic projection
    // must agree with the quadrature.
    cones::Cone cone = cones::build_cone(beta);
    auto closures = topology::build_closures(alpha, cone, marks.marks[j], /*audit=*/true);
    Vec3 dir{0.213, 0.456, 0.862};
    if (topology::crossing_linking(closures[0].closed, closures[2].closed, dir) != m)
      fail("projection count disagrees on the first linking number");
    if (topology::crossing_linking(closures[1].closed, closures[3].closed, dir) != n)
      fail("projection count disagrees on the second linking number");

    for (double mk : marks.marks[j])
      if (std::abs(alpha.tangent_at(mk).z) < 1.0 - 1e-6)
        fail("weaving component not orthogonal to the plane at a passage");

    if (topology::curve_pair_min_distance(alpha, beta) < 2.0 - 1e-2)
      fail("weaving and flat tubes closer than 2");
  }

  for (std::size_t a = 0; a + 1 < link.components.size(); ++a)
    for (std::size_t b = a + 1; b < link.components.size(); ++b) {
      auto g = topology::gauss_linking(link.components[a], link.components[b]);
      if (g.rounded != 0 || g.residual > 0.1)
        fail("component pair has nonzero linking number");
    }

  if (!topology::unknot_by_reduction(alpha, 64))
    fail("no projection reduces the weaving component to a trivial diagram");

  if (link.components.size() <= 12 && topology::find_any_split(link))
    fail("a plane separates the components");
}

}  // namespace detail

/// Builds the two-component link with twist counts (m, n): the flat
/// rounded parallelogram plus the weaving unknot, both with tube radius 1,
/// then verifies every geometric requirement numerically.
inline LinkBuild make_L(int m, int n, std::size_t segments = 512, double phi = kPi / 2.0) {
  if (m == 0) throw std::invalid_argument("make_L: m must be nonzero");
  if (n == 0) throw std::invalid_argument("make_L: n must be nonzero");
  AlphaBuild alpha = make_alpha(plan_weave(m, n, phi), segments);
  BetaShape beta = make_beta(phi, segments);
  ThickLink link({alpha.curve, beta.curve}, 1.0);
  LinkMarks marks{0, {1}, {alpha.marks}};
  detail::verify_build("make_L", link, marks, m, n);
  return {std::move(link), std::move(marks)};
}

/// Builds the stacked variant with `copies` total components: the single
/// weaving component plus copies-1 flat components at successive depths
/// 2.5 apart, every one woven with the same twist counts.
inline LinkBuild make_stacked(std::size_t copies, int m, int n, std::size_t segments = 512,
                              double phi = kPi / 2.0) {
  if (copies < 2) throw std::invalid_argument("make_stacked: need at least two components");
  if (copies > 12) throw std::invalid_argument("make_stacked: more than 12 components");
  if (m == 0) throw std::invalid_argument("make_stacked: m must be nonzero");
  if (n == 0) throw std::invalid_argument("make_stacked: n must be nonzero");

  const double spacing = 2.5;
  double extension = spacing * double(copies - 2);
  AlphaBuild alpha = make_alpha(plan_weave(m, n, phi, extension), segments);
  BetaShape beta = make_beta(phi, segments);

  std::vector<ClosedCurve> comps{alpha.curve};
  LinkMarks marks{0, {}, {}};
  for (std::size_t j = 0; j + 1 < copies; ++j) {
    double depth = spacing * double(j);
    std::vector<Vec3> pts = beta.curve.vertices();
    for (Vec3& v : pts) v.z -= depth;
    comps.emplace_back(pts);
    marks.betas.push_back(j + 1);
    // The plane passages sit on straight vertical rails, so each deeper
    // copy's passage parameters are exact arc-length offsets of the first.
    marks.marks.push_back({alpha.marks[0] - depth, alpha.marks[1] + depth,
                           alpha.marks[2] - depth, alpha.marks[3] + depth});
  }
  ThickLink link(std::move(comps), 1.0);
  detail::verify_build("make_stacked", link, marks, m, n);
  return {std::move(link), std::move(marks)};
}

}  // namespace gordian::constructions
