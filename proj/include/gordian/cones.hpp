#pragma once
// Cone surface over a closed curve: cone angle, isometric development,
// intrinsic geodesics, geodesic quadrilaterals, offset hulls of disks,
// areas, and Monte-Carlo spherical length via random great circles.
//
// The development cuts the sector along the ray through vertex 0; every
// intrinsic computation re-cuts as needed, so results are cut-invariant.

#include <array>
#include <random>
#include <string>
#include <vector>

#include "gordian/curve.hpp"
#include "gordian/link.hpp"

namespace gordian::cones {

/// Coordinates in the developed (unrolled) chart of a cone.
struct Dev2 {
  double x = 0.0, y = 0.0;
};

inline Dev2 operator+(Dev2 a, Dev2 b) { return {a.x + b.x, a.y + b.y}; }
inline Dev2 operator-(Dev2 a, Dev2 b) { return {a.x - b.x, a.y - b.y}; }
inline Dev2 operator*(double k, Dev2 a) { return {k * a.x, k * a.y}; }
inline double dot2(Dev2 a, Dev2 b) { return a.x * b.x + a.y * b.y; }
inline double cross2(Dev2 a, Dev2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2d(Dev2 a) { return std::sqrt(dot2(a, a)); }

/// Point on a cone: base arc parameter s and radial fraction t
/// (0 = apex, 1 = on the base curve; t may exceed 1 on the infinite cone).
struct ConePoint {
  double s = 0.0;
  double t = 1.0;
};

class Cone {
 public:
  Cone(ClosedCurve base_curve, Vec3 apex_point)
      : base_(std::move(base_curve)), apex_(apex_point) {
    if (base_.distance_to(apex_) < 1e-9)
      throw std::invalid_argument("Cone: apex lies on the base curve");
    const std::size_t n = base_.size();
    radii_.resize(n + 1);
    psi_.resize(n + 1);
    psi_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      radii_[i] = dist(base_.vertex(i), apex_);
      psi_[i + 1] =
          psi_[i] + angle_between(base_.vertex(i) - apex_, base_.vertex(i + 1) - apex_);
    }
    radii_[n] = radii_[0];
  }

  const ClosedCurve& base() const { return base_; }
  const Vec3& apex() const { return apex_; }
  double cone_angle() const { return psi_.back(); }
  /// Cumulative developed angle of base vertex i (psi[n] = cone angle).
  double vertex_angle(std::size_t i) const { return psi_[i]; }
  double vertex_radius(std::size_t i) const { return radii_[i]; }

  /// Developed image of base vertex i: |w_i| = |v_i - apex| exactly.
  Dev2 developed_vertex(std::size_t i) const {
    return {radii_[i] * std::cos(psi_[i]), radii_[i] * std::sin(psi_[i])};
  }

  Vec3 position(const ConePoint& p) const {
    if (p.t < 0.0) throw std::invalid_argument("ConePoint: negative radial fraction");
    return apex_ + p.t * (base_.point_at(p.s) - apex_);
  }

  /// Intrinsic polar coordinates (radius from apex, cumulative developed
  /// angle in [0, cone_angle)) of a cone point.
  void polar(const ConePoint& p, double& radius, double& angle) const {
    auto [i, offset] = base_.locate(base_.wrap(p.s));
    double u = offset / base_.edge_length(i);
    Dev2 a = developed_vertex(i), b = developed_vertex(i + 1);
    Dev2 w = a + u * (b - a);
    radius = p.t * norm2d(w);
    angle = psi_[i] + std::atan2(std::abs(cross2(a, w)), dot2(a, w));
  }

  /// Base radius and ambient base point of the generating ray at cumulative
  /// developed angle psi (taken mod cone_angle).
  void ray_at(double psi, double& base_radius, Vec3& base_point, double& s) const {
    double theta = cone_angle();
    psi -= theta * std::floor(psi / theta);
    std::size_t lo = 0, hi = base_.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (psi_[mid] <= psi ? lo : hi) = mid;
    }
    Dev2 a = developed_vertex(lo), b = developed_vertex(lo + 1);
    Dev2 dir{std::cos(psi), std::sin(psi)};
    double denom = cross2(dir, b - a);
    double u = std::abs(denom) < 1e-300 ? 0.0 : -cross2(dir, a) / denom;
    u = std::clamp(u, 0.0, 1.0);
    Dev2 hit = a + u * (b - a);
    base_radius = norm2d(hit);
    base_point = base_.vertex(lo) + u * (base_.vertex(lo + 1) - base_.vertex(lo));
    s = base_.vertex_param(lo) + u * base_.edge_length(lo);
  }

 private:
  ClosedCurve base_;
  Vec3 apex_;
  std::vector<double> radii_;
  std::vector<double> psi_;
};

/// Cone over the curve with apex at its arc-length centroid.
inline Cone build_cone(const ClosedCurve& c) { return Cone(c, c.centroid()); }

inline double cone_angle(const Cone& cone) { return cone.cone_angle(); }

namespace detail {

inline Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  double denom = 1.0 / (va + vb + vc);
  return a + (vb * denom) * ab + (vc * denom) * ac;
}

}  // namespace detail

/// Nearest cone point to an ambient position, with the residual distance.
/// Scans the fan triangles (apex, v_i, v_{i+1}).
inline std::pair<ConePoint, double> cone_locate(const Cone& cone, const Vec3& x) {
  const ClosedCurve& base = cone.base();
  const Vec3& P = cone.apex();
  double best = std::numeric_limits<double>::infinity();
  ConePoint out;
  for (std::size_t i = 0; i < base.size(); ++i) {
    Vec3 a = base.vertex(i), b = base.vertex(i + 1);
    Vec3 y = detail::closest_on_triangle(x, P, a, b);
    double d = dist(x, y);
    if (d >= best) continue;
    best = d;
    // Barycentric split of y = P + t*((1-u) a + u b - P).
    Vec3 e1 = a - P, e2 = b - P, w = y - P;
    double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
    double h1 = dot(w, e1), h2 = dot(w, e2);
    double det = g11 * g22 - g12 * g12;
    double alpha = det > 1e-300 ? (h1 * g22 - h2 * g12) / det : 0.0;
    double beta = det > 1e-300 ? (h2 * g11 - h1 * g12) / det : 0.0;
    double t = alpha + beta;
    double u = t > 1e-300 ? beta / t : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    out.s = base.vertex_param(i) + u * base.edge_length(i);
    out.t = std::max(t, 0.0);
  }
  return {out, best};
}

/// Shortest intrinsic path on the cone.
struct Geodesic {
  std::vector<ConePoint> path;  // endpoints included; apex encoded as t = 0
  double length = 0.0;
  bool through_apex = false;
};

/// Shortest path between two cone points, computed in the development.
/// Both angular routes around the apex contribute a straight-chord candidate
/// when shorter than a half turn; the radial through-apex path is always a
/// candidate and wins when the angular separation exceeds pi.
inline Geodesic cone_geodesic(const Cone& cone, const ConePoint& a, const ConePoint& b) {
  if (a.t < 0.0 || b.t < 0.0)
    throw std::invalid_argument("cone_geodesic: negative radial fraction");
  double ra, pa, rb, pb;
  cone.polar(a, ra, pa);
  cone.polar(b, rb, pb);
  const double theta = cone.cone_angle();

  Geodesic best;
  best.length = ra + rb;  // through the apex; exact when either point is the apex
  best.through_apex = true;

  double fwd = pb - pa;
  fwd -= theta * std::floor(fwd / theta);  // in [0, theta)
  const ClosedCurve& base = cone.base();
  for (int route = 0; route < 2; ++route) {
    double delta = route == 0 ? fwd : theta - fwd;
    double sign = route == 0 ? 1.0 : -1.0;
    if (delta >= kPi || ra + rb < 1e-15) continue;
    double len = std::sqrt(std::max(0.0, ra * ra + rb * rb - 2.0 * ra * rb * std::cos(delta)));
    if (len >= best.length) continue;
    best.length = len;
    best.through_apex = false;
    best.path.clear();
    best.path.push_back(a);
    // Crossings with the generating rays of base vertices strictly between
    // the two angular positions, mapped back through each ray's base radius.
    // Chart: a at angle 0, b at angle +delta.
    Dev2 A{ra, 0.0}, B{rb * std::cos(delta), rb * std::sin(delta)};
    const std::size_t n = base.size();
    std::size_t ia = base.locate(base.wrap(a.s)).first;
    double off;
    std::size_t v;
    if (sign > 0) {
      off = cone.vertex_angle(ia + 1) - pa;
      v = (ia + 1) % n;
    } else {
      off = pa - cone.vertex_angle(ia);
      v = ia;
    }
    for (std::size_t guard = 0; guard <= n + 2 && off < delta - 1e-15; ++guard) {
      if (off > 1e-15) {
        Dev2 dir{std::cos(off), std::sin(off)};
        double denom = cross2(dir, B - A);
        if (std::abs(denom) > 1e-300) {
          double w = std::clamp(-cross2(dir, A) / denom, 0.0, 1.0);
          Dev2 hit = A + w * (B - A);
          double rad = cone.vertex_radius(v);
          best.path.push_back({base.vertex_param(v), rad > 1e-300 ? norm2d(hit) / rad : 0.0});
        }
      }
      if (sign > 0) {
        off += cone.vertex_angle(v + 1) - cone.vertex_angle(v);
        v = (v + 1) % n;
      } else {
        std::size_t prev = (v + n - 1) % n;
        off += cone.vertex_angle(prev + 1) - cone.vertex_angle(prev);
        v = prev;
      }
    }
    best.path.push_back(b);
  }
  if (best.through_apex) best.path = {a, ConePoint{0.0, 0.0}, b};
  return best;
}

inline double cone_distance(const Cone& cone, const ConePoint& a, const ConePoint& b) {
  return cone_geodesic(cone, a, b).length;
}

/// Geodesic quadrilateral through four cone points, in cyclic order of the
/// developed angle; reports sides, diagonals, interior angles, convexity
/// and whether the apex lies inside.
struct ConePolygon {
  std::array<ConePoint, 4> vertices;  // in cyclic order used below
  std::array<std::size_t, 4> order;   // permutation of the input points
  std::array<double, 4> sides{};
  std::array<double, 2> diagonals{};
  std::array<double, 4> interior_angles{};
  double perimeter = 0.0;
  double angle_sum = 0.0;
  bool apex_inside = false;
  bool convex = false;
};

inline ConePolygon convex_hull_4(const Cone& cone, const std::array<ConePoint, 4>& pts) {
  ConePolygon poly;
  std::array<double, 4> rad, ang;
  for (int i = 0; i < 4; ++i) cone.polar(pts[i], rad[i], ang[i]);

  std::array<std::size_t, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });
  const double theta = cone.cone_angle();

  std::array<double, 4> gap;
  bool inside = true;
  for (int i = 0; i < 4; ++i) {
    double g = ang[idx[(i + 1) % 4]] - ang[idx[i]];
    if (i == 3) g += theta;
    gap[i] = g;
    if (!(g < kPi - 1e-12)) inside = false;
  }
  poly.apex_inside = inside;
  poly.order = idx;
  for (int i = 0; i < 4; ++i) poly.vertices[i] = pts[idx[i]];

  for (int i = 0; i < 4; ++i)
    poly.sides[i] = cone_distance(cone, pts[idx[i]], pts[idx[(i + 1) % 4]]);
  poly.diagonals[0] = cone_distance(cone, pts[idx[0]], pts[idx[2]]);
  poly.diagonals[1] = cone_distance(cone, pts[idx[1]], pts[idx[3]]);
  poly.perimeter = poly.sides[0] + poly.sides[1] + poly.sides[2] + poly.sides[3];

  if (inside) {
    // Interior angle at each vertex, measured through the apex side in the
    // local two-neighbor chart.
    for (int i = 0; i < 4; ++i) {
      double rho = rad[idx[i]];
      double dn = gap[i], dp = gap[(i + 3) % 4];
      double rn = rad[idx[(i + 1) % 4]], rp = rad[idx[(i + 3) % 4]];
      double phin = std::atan2(rn * std::sin(dn), rn * std::cos(dn) - rho);
      double phip = std::atan2(-rp * std::sin(dp), rp * std::cos(dp) - rho);
      poly.interior_angles[i] = 2.0 * kPi - (phin - phip);
    }
  } else {
    // Apex outside: develop the four points into one flat chart cut at the
    // widest gap, re-order them around their own centroid, and use plain
    // planar polygon geometry there.
    int wide = 0;
    for (int i = 1; i < 4; ++i)
      if (gap[i] > gap[wide]) wide = i;
    std::array<Dev2, 4> z;
    std::array<std::size_t, 4> chart;  // input indices in chart order
    double base_ang = 0.0;
    for (int k = 0; k < 4; ++k) {
      int i = (wide + 1 + k) % 4;
      if (k > 0) base_ang += gap[(wide + k) % 4];
      chart[k] = idx[i];
      z[k] = {rad[idx[i]] * std::cos(base_ang), rad[idx[i]] * std::sin(base_ang)};
    }
    Dev2 c = 0.25 * (z[0] + z[1] + z[2] + z[3]);
    std::array<int, 4> ord{0, 1, 2, 3};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) {
      return std::atan2(z[a].y - c.y, z[a].x - c.x) < std::atan2(z[b].y - c.y, z[b].x - c.x);
    });
    for (int k = 0; k < 4; ++k) {
      poly.order[k] = chart[ord[k]];
      poly.vertices[k] = pts[chart[ord[k]]];
    }
    for (int k = 0; k < 4; ++k)
      poly.sides[k] = cone_distance(cone, poly.vertices[k], poly.vertices[(k + 1) % 4]);
    poly.diagonals[0] = cone_distance(cone, poly.vertices[0], poly.vertices[2]);
    poly.diagonals[1] = cone_distance(cone, poly.vertices[1], poly.vertices[3]);
    poly.perimeter = poly.sides[0] + poly.sides[1] + poly.sides[2] + poly.sides[3];
    for (int k = 0; k < 4; ++k) {
      Dev2 u = z[ord[(k + 3) % 4]] - z[ord[k]], v = z[ord[(k + 1) % 4]] - z[ord[k]];
      poly.interior_angles[k] = std::atan2(std::abs(cross2(u, v)), dot2(u, v));
    }
  }
  poly.angle_sum = poly.interior_angles[0] + poly.interior_angles[1] +
                   poly.interior_angles[2] + poly.interior_angles[3];
  poly.convex = true;
  for (double a : poly.interior_angles)
    if (!(a <= kPi - 1e-9)) poly.convex = false;
  for (int i = 0; i < 4; ++i)
    if (poly.sides[i] < 1e-12) poly.convex = false;
  return poly;
}

/// Four-point property: pairwise intrinsic distances >= 2 - tol, intrinsic
/// distance from each point to the base curve >= 2 - tol, hull convex,
/// apex interior.
struct FourPointReport {
  bool pass = false;
  double min_pairwise = 0.0;
  double min_to_curve = 0.0;
  double apex_margin = 0.0;  // developed distance from the apex to the hull sides
  ConePolygon quad;
};

inline double to_curve_distance(const Cone& cone, const ConePoint& p) {
  double best = std::numeric_limits<double>::infinity();
  const ClosedCurve& base = cone.base();
  for (std::size_t i = 0; i < base.size(); ++i)
    best = std::min(best, cone_distance(cone, p, ConePoint{base.vertex_param(i), 1.0}));
  return best;
}

inline FourPointReport four_point_property(const Cone& cone, const std::array<ConePoint, 4>& pts,
                                           double tol = 1e-3) {
  FourPointReport rep;
  rep.quad = convex_hull_4(cone, pts);
  rep.min_pairwise = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      rep.min_pairwise = std::min(rep.min_pairwise, cone_distance(cone, pts[i], pts[j]));
  rep.min_to_curve = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    rep.min_to_curve = std::min(rep.min_to_curve, to_curve_distance(cone, pts[i]));

  rep.apex_margin = std::numeric_limits<double>::infinity();
  if (rep.quad.apex_inside) {
    std::array<double, 4> rad, ang;
    for (int i = 0; i < 4; ++i) cone.polar(pts[i], rad[i], ang[i]);
    for (int i = 0; i < 4; ++i) {
      double r1 = rad[rep.quad.order[i]], r2 = rad[rep.quad.order[(i + 1) % 4]];
      double d = ang[rep.quad.order[(i + 1) % 4]] - ang[rep.quad.order[i]];
      if (i == 3) d += cone.cone_angle();
      Dev2 A{r1, 0.0}, B{r2 * std::cos(d), r2 * std::sin(d)};
      Dev2 ab = B - A;
      double t = std::clamp(-dot2(A, ab) / dot2(ab, ab), 0.0, 1.0);
      rep.apex_margin = std::min(rep.apex_margin, norm2d(A + t * ab));
    }
  }
  rep.pass = rep.min_pairwise >= 2.0 - tol && rep.min_to_curve >= 2.0 - tol &&
             rep.quad.convex && rep.quad.apex_inside;
  return rep;
}

/// Boundary of the convex hull of the four radius-r disks centered at the
/// quad vertices: the outward offset of the geodesic quad. Four straight
/// pieces of total length l(K) and four arcs of total length r * theta.
struct DiskHull {
  std::array<double, 4> segment_lengths{};
  std::array<double, 4> arc_lengths{};
  double total_length = 0.0;
  std::vector<Vec3> boundary;  // closed ambient polyline; last point repeats the first
};

inline DiskHull hull_of_disks(const Cone& cone, const std::array<ConePoint, 4>& pts, double r,
                              std::size_t arc_samples = 24) {
  auto rep = four_point_property(cone, pts);
  if (!rep.pass)
    throw std::invalid_argument("hull_of_disks: four-point property fails for these points");
  if (!(r > 0.0) || r > rep.min_to_curve + 1e-3)
    throw std::invalid_argument("hull_of_disks: radius must be in (0, distance to base curve]");

  const ConePolygon& q = rep.quad;
  std::array<double, 4> rad, ang;
  for (int i = 0; i < 4; ++i) cone.polar(q.vertices[i], rad[i], ang[i]);
  const double theta = cone.cone_angle();

  DiskHull hull;
  auto emit = [&](double rho, double psi) {
    double base_r, s;
    Vec3 base_pt;
    cone.ray_at(psi, base_r, base_pt, s);
    hull.boundary.push_back(cone.apex() + (rho / base_r) * (base_pt - cone.apex()));
  };

  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    double d = ang[j] - ang[i];
    if (i == 3) d += theta;
    Dev2 A{rad[i], 0.0}, B{rad[j] * std::cos(d), rad[j] * std::sin(d)};
    Dev2 ab = B - A;
    Dev2 nrm{ab.y, -ab.x};  // rotate -90: outward when the apex is to the left
    double nn = norm2d(nrm);
    nrm = (1.0 / nn) * nrm;
    if (dot2(nrm, A + B) < 0.0) nrm = -1.0 * nrm;
    hull.segment_lengths[i] = nn;

    std::size_t seg_samples = std::max<std::size_t>(8, arc_samples);
    for (std::size_t k = 0; k <= seg_samples; ++k) {
      Dev2 p = A + (double(k) / double(seg_samples)) * ab + r * nrm;
      emit(norm2d(p), ang[i] + std::atan2(p.y, p.x));
    }
    // Arc around vertex j sweeping from this side's offset normal to the
    // next side's; the turn equals the exterior angle there.
    double turn = kPi - q.interior_angles[j];
    Dev2 Bv{rad[j], 0.0};
    double a0 = std::atan2(nrm.y, nrm.x) - d;  // incoming normal in vertex j's chart
    hull.arc_lengths[j] = r * turn;
    for (std::size_t k = 1; k <= arc_samples; ++k) {
      double a = a0 + turn * double(k) / double(arc_samples);
      Dev2 p = Bv + Dev2{r * std::cos(a), r * std::sin(a)};
      emit(norm2d(p), ang[j] + std::atan2(p.y, p.x));
    }
  }
  hull.total_length = 0.0;
  for (int i = 0; i < 4; ++i)
    hull.total_length += hull.segment_lengths[i] + hull.arc_lengths[i];
  return hull;
}

/// Area of the cone disk: sum of the fan triangle areas (apex, v_i, v_{i+1}).
inline double disk_area(const Cone& cone) {
  CompensatedSum area;
  const ClosedCurve& base = cone.base();
  for (std::size_t i = 0; i < base.size(); ++i)
    area.add(0.5 * norm(cross(base.vertex(i) - cone.apex(), base.vertex(i + 1) - cone.apex())));
  return area.value();
}

struct IsoperimetricResult {
  double ratio = 0.0;
  bool pass = false;
};

/// 4*pi*area / length^2 of the cone disk; at most 1 for any closed base.
inline IsoperimetricResult isoperimetric_check(const Cone& cone, double tol = 1e-6) {
  double l = cone.base().length();
  double ratio = 4.0 * kPi * disk_area(cone) / (l * l);
  return {ratio, ratio <= 1.0 + tol};
}

/// Unit-sphere radial projection of the base curve around the apex.
inline std::vector<Vec3> spherical_projection(const Cone& cone) {
  std::vector<Vec3> out;
  out.reserve(cone.base().size());
  for (std::size_t i = 0; i < cone.base().size(); ++i)
    out.push_back(normalized(cone.base().vertex(i) - cone.apex()));
  return out;
}

/// Great-arc length of a closed spherical polyline.
inline double spherical_length(const std::vector<Vec3>& pts) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < pts.size(); ++i)
    sum.add(angle_between(pts[i], pts[(i + 1) % pts.size()]));
  return sum.value();
}

struct CroftonEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double mean_crossings = 0.0;
};

/// Monte-Carlo spherical length: pi times the mean number of crossings with
/// uniformly random great circles. A great circle itself crosses every
/// random great circle twice, giving 2*pi.
inline CroftonEstimate crofton_estimate(const std::vector<Vec3>& pts, std::size_t trials,
                                        std::uint64_t seed) {
  if (pts.size() < 2 || trials == 0)
    throw std::invalid_argument("crofton_estimate: need >= 2 points and >= 1 trial");
  for (const Vec3& p : pts)
    if (std::abs(norm(p) - 1.0) > 1e-9)
      throw std::invalid_argument("crofton_estimate: points must lie on the unit sphere");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Vec3 n{gauss(rng), gauss(rng), gauss(rng)};
    while (norm(n) < 1e-12) n = {gauss(rng), gauss(rng), gauss(rng)};
    n = normalized(n);
    std::size_t crossings = 0;
    double prev = dot(pts.back(), n);
    for (const Vec3& p : pts) {
      double cur = dot(p, n);
      if ((prev > 0.0) != (cur > 0.0)) ++crossings;
      prev = cur;
    }
    sum += double(crossings);
    sumsq += double(crossings) * double(crossings);
  }
  double mean = sum / double(trials);
  double var = std::max(0.0, sumsq / double(trials) - mean * mean);
  CroftonEstimate est;
  est.mean_crossings = mean;
  est.estimate = kPi * mean;
  est.standard_error = kPi * std::sqrt(var / double(trials));
  return est;
}

/// SVG rendering of the development: the unrolled base curve, the sector
/// cut rays, and the apex.
inline std::string development_svg(const Cone& cone) {
  const ClosedCurve& base = cone.base();
  std::vector<Dev2> pts;
  pts.reserve(base.size() + 1);
  double rmax = 0.0;
  for (std::size_t i = 0; i <= base.size(); ++i) {
    double rr = cone.vertex_radius(i == base.size() ? 0 : i);
    double aa = i == base.size() ? cone.cone_angle() : cone.vertex_angle(i);
    pts.push_back({rr * std::cos(aa), rr * std::sin(aa)});
    rmax = std::max(rmax, rr);
  }
  double pad = 1.1 * rmax;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" +
                    io::format_double(-pad) + " " + io::format_double(-pad) + " " +
                    io::format_double(2 * pad) + " " + io::format_double(2 * pad) + "\">\n";
  auto y = [](double v) { return -v; };  // SVG y grows downward
  svg += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" +
         io::format_double(rmax / 200.0) + "\" points=\"";
  for (const Dev2& p : pts)
    svg += io::format_double(p.x) + "," + io::format_double(y(p.y)) + " ";
  svg += "\"/>\n";
  for (const Dev2& p : {pts.front(), pts.back()})
    svg += "<line x1=\"0\" y1=\"0\" x2=\"" + io::format_double(p.x) + "\" y2=\"" +
           io::format_double(y(p.y)) + "\" stroke=\"gray\" stroke-width=\"" +
           io::format_double(rmax / 400.0) + "\"/>\n";
  svg += "<circle cx=\"0\" cy=\"0\" r=\"" + io::format_double(rmax / 100.0) + "\"/>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace gordian::cones
