#pragma once

// Linking numbers by two independent routes (Gauss double sum and signed
// projection crossings), arc-plus-geodesic closures over a cone, and a
// maximum-margin plane-separation detector for thick links.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gordian/cones.hpp"
#include "gordian/link.hpp"

namespace gordian::topology {

inline constexpr double kGoldenAngle = 2.39996322972865332;

namespace detail {

/// Deterministic projection-direction schedule: rotate the base direction
/// by golden-angle increments about a fixed axis tilted 45 degrees away
/// from it, so the attempts sweep a small circle on the direction sphere
/// rather than a great circle (a great circle can stay inside a symmetry
/// plane of the input and never become generic). Attempt 0 is the base
/// direction itself.
inline Vec3 schedule_direction(Vec3 base, int attempt) {
  if (attempt == 0) return base;
  double ax = std::abs(base.x), ay = std::abs(base.y), az = std::abs(base.z);
  Vec3 e{1, 0, 0};
  if (ay <= ax && ay <= az) e = {0, 1, 0};
  if (az <= ax && az <= ay) e = {0, 0, 1};
  Vec3 axis = normalized(base + e);
  return Mat3::rotation(axis, kGoldenAngle * double(attempt)).apply(base);
}

/// Orthonormal frame (u, v, d) with cross(u, v) = d.
inline void projection_basis(Vec3 d, Vec3& u, Vec3& v) {
  double ax = std::abs(d.x), ay = std::abs(d.y), az = std::abs(d.z);
  Vec3 pick{1, 0, 0};
  if (ay <= ax && ay <= az) pick = {0, 1, 0};
  if (az <= ax && az <= ay) pick = {0, 0, 1};
  u = normalized(cross(d, pick));
  v = cross(d, u);
}

/// Thrown (internally) when a projection fails a genericity margin; callers
/// advance the direction schedule and retry.
struct NonGeneric {};

struct Cross2D {
  double t = 0.0;   // parameter on the first segment
  double u = 0.0;   // parameter on the second segment
  double za = 0.0;  // height of the first strand at the crossing
  double zb = 0.0;  // height of the second strand
};

/// Transversal interior intersection of two projected segments, or nullopt.
/// Throws NonGeneric for endpoint grazes, near-parallel overlap, and
/// height ties, all relative to `scale` (a typical ambient length).
inline std::optional<Cross2D> segment_cross(double px, double py, double rx, double ry,
                                            double qx, double qy, double sx, double sy,
                                            double za0, double za1, double zb0, double zb1,
                                            double scale) {
  double denom = rx * sy - ry * sx;
  double rlen = std::hypot(rx, ry), slen = std::hypot(sx, sy);
  double ax = qx - px, ay = qy - py;
  if (std::abs(denom) <= 1e-12 * rlen * slen) {
    double off = std::abs(ax * ry - ay * rx) / std::max(rlen, 1e-300);
    if (off < 1e-9 * scale) {
      double t0 = (ax * rx + ay * ry) / (rlen * rlen);
      double t1 = t0 + (sx * rx + sy * ry) / (rlen * rlen);
      if (std::max(t0, t1) > -1e-9 && std::min(t0, t1) < 1.0 + 1e-9) throw NonGeneric{};
    }
    return std::nullopt;
  }
  double t = (ax * sy - ay * sx) / denom;
  double w = (ax * ry - ay * rx) / denom;
  const double eps = 1e-9;
  bool t_in = t > eps && t < 1.0 - eps;
  bool w_in = w > eps && w < 1.0 - eps;
  if (t > -eps && t < 1.0 + eps && w > -eps && w < 1.0 + eps && !(t_in && w_in))
    throw NonGeneric{};
  if (!(t_in && w_in)) return std::nullopt;
  Cross2D c;
  c.t = t;
  c.u = w;
  c.za = za0 + t * (za1 - za0);
  c.zb = zb0 + w * (zb1 - zb0);
  if (std::abs(c.za - c.zb) < 1e-9 * std::max(1.0, scale)) throw NonGeneric{};
  return c;
}

struct ProjectedCurve {
  std::vector<double> x, y, z;
};

/// Projects vertices into the (u, v, d) frame; throws NonGeneric if any
/// edge is nearly parallel to the viewing direction.
inline ProjectedCurve project_vertices(const ClosedCurve& c, Vec3 u, Vec3 v, Vec3 d) {
  ProjectedCurve p;
  std::size_t n = c.size();
  p.x.resize(n);
  p.y.resize(n);
  p.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& q = c.vertex(i);
    p.x[i] = dot(q, u);
    p.y[i] = dot(q, v);
    p.z[i] = dot(q, d);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = (i + 1) % n;
    double flat = std::hypot(p.x[j] - p.x[i], p.y[j] - p.y[i]);
    if (flat < 1e-12 * c.edge_length(i)) throw NonGeneric{};
  }
  return p;
}

}  // namespace detail

/// Gauss double-sum estimate of the linking number of two disjoint closed
/// curves: `value` is the raw sum, `rounded` the nearest integer, and
/// `residual` the distance to it (an accuracy gauge for the quadrature).
struct GaussLinking {
  double value = 0.0;
  double residual = 0.0;
  long long rounded = 0;
  double min_distance = 0.0;
};

inline double curve_pair_min_distance(const ClosedCurve& a, const ClosedCurve& b) {
  std::size_t na = a.size(), nb = b.size();
  // Squared vertex distances give an upper bound first; the exact
  // segment-segment pass then only needs pairs that could beat it.
  double ub2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      Vec3 d = a.vertex(i) - b.vertex(j);
      ub2 = std::min(ub2, dot(d, d));
    }
  double ea = 0.0, eb = 0.0;
  for (std::size_t i = 0; i < na; ++i) ea = std::max(ea, a.edge_length(i));
  for (std::size_t j = 0; j < nb; ++j) eb = std::max(eb, b.edge_length(j));
  double margin = std::sqrt(ub2) + ea + eb;
  double margin2 = margin * margin;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      Vec3 d = a.vertex(i) - b.vertex(j);
      if (dot(d, d) > margin2) continue;
      auto c = segment_segment_closest(a.vertex(i), a.vertex(i + 1), b.vertex(j), b.vertex(j + 1));
      best = std::min(best, c.distance);
    }
  return best;
}

inline GaussLinking gauss_linking(const ClosedCurve& a, const ClosedCurve& b) {
  GaussLinking out;
  out.min_distance = curve_pair_min_distance(a, b);
  if (out.min_distance < 1e-6)
    throw std::invalid_argument("gauss_linking: curves touch (min distance < 1e-6)");
  std::size_t na = a.size(), nb = b.size();
  std::vector<Vec3> mida(na), dira(na), midb(nb), dirb(nb);
  for (std::size_t i = 0; i < na; ++i) {
    mida[i] = 0.5 * (a.vertex(i) + a.vertex(i + 1));
    dira[i] = a.edge_vector(i);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    midb[j] = 0.5 * (b.vertex(j) + b.vertex(j + 1));
    dirb[j] = b.edge_vector(j);
  }
  CompensatedSum sum;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      Vec3 r = mida[i] - midb[j];
      double rn = norm(r);
      sum.add(dot(cross(dira[i], dirb[j]), r) / (rn * rn * rn));
    }
  out.value = sum.value() / (4.0 * kPi);
  out.rounded = std::llround(out.value);
  out.residual = std::abs(out.value - double(out.rounded));
  return out;
}

/// Exact linking number via signed crossings of a generic projection.
/// Non-generic directions are replaced by the deterministic golden-angle
/// schedule; after 100 failed attempts the call errors out.
inline int crossing_linking(const ClosedCurve& a, const ClosedCurve& b, Vec3 direction) {
  double n0 = norm(direction);
  if (!(n0 > 1e-12)) throw std::invalid_argument("crossing_linking: zero direction");
  Vec3 d0 = (1.0 / n0) * direction;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) scale = std::max(scale, norm(a.vertex(i)));
  for (std::size_t j = 0; j < b.size(); ++j) scale = std::max(scale, norm(b.vertex(j)));
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vec3 d = detail::schedule_direction(d0, attempt);
    Vec3 u, v;
    detail::projection_basis(d, u, v);
    try {
      auto pa = detail::project_vertices(a, u, v, d);
      auto pb = detail::project_vertices(b, u, v, d);
      long long sum = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t i2 = (i + 1) % a.size();
        for (std::size_t j = 0; j < b.size(); ++j) {
          std::size_t j2 = (j + 1) % b.size();
          auto c = detail::segment_cross(pa.x[i], pa.y[i], pa.x[i2] - pa.x[i], pa.y[i2] - pa.y[i],
                                         pb.x[j], pb.y[j], pb.x[j2] - pb.x[j], pb.y[j2] - pb.y[j],
                                         pa.z[i], pa.z[i2], pb.z[j], pb.z[j2], scale);
          if (!c) continue;
          double rx = pa.x[i2] - pa.x[i], ry = pa.y[i2] - pa.y[i];
          double sx = pb.x[j2] - pb.x[j], sy = pb.y[j2] - pb.y[j];
          double cr = c->za > c->zb ? rx * sy - ry * sx : sx * ry - sy * rx;
          sum += cr > 0.0 ? 1 : -1;
        }
      }
      if (sum % 2 != 0) continue;
      return int(sum / 2);
    } catch (const detail::NonGeneric&) {
      continue;
    }
  }
  throw std::runtime_error("crossing_linking: no generic projection after 100 attempts");
}

/// One quarter of a marked curve together with the cone geodesic that
/// closes it into a simple closed loop.
struct ArcClosure {
  std::vector<Vec3> arc;     // along the marked curve, mark i to mark i+1
  std::vector<Vec3> closer;  // along the cone, mark i+1 back to mark i
  ClosedCurve closed;
};

/// Splits `alpha` at four marks (arc-length parameters, cyclically ordered)
/// and closes each piece with the cone geodesic between its endpoints.
/// Marks must lie on the cone surface within 1e-3. With `audit` set each
/// closure is checked for embeddedness with clearance 1e-6 (quadratic in
/// the closure size; callers on a hot path may disable it).
inline std::vector<ArcClosure> build_closures(const ClosedCurve& alpha,
                                              const cones::Cone& beta_cone,
                                              const std::array<double, 4>& marks,
                                              bool audit = true) {
  std::array<double, 4> w;
  for (int i = 0; i < 4; ++i) w[i] = alpha.wrap(marks[i]);
  int descents = 0, bad = -1;
  for (int i = 0; i < 4; ++i)
    if (w[(i + 1) % 4] <= w[i]) {
      ++descents;
      bad = (i + 1) % 4;
    }
  if (descents != 1)
    throw std::invalid_argument("build_closures: marks out of cyclic order near mark " +
                                std::to_string(bad));

  std::array<cones::ConePoint, 4> cp;
  for (int i = 0; i < 4; ++i) {
    auto [p, residual] = cones::cone_locate(beta_cone, alpha.point_at(marks[i]));
    if (residual > 1e-3)
      throw std::invalid_argument("build_closures: mark " + std::to_string(i) +
                                  " lies off the cone (distance " + std::to_string(residual) +
                                  ")");
    cp[i] = p;
  }

  std::vector<ArcClosure> out;
  out.reserve(4);
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    double si = w[std::size_t(i)], sj = w[std::size_t(j)];
    double span = sj - si;
    if (span <= 0) span += alpha.length();

    std::vector<Vec3> arc;
    arc.push_back(alpha.point_at(si));
    std::size_t e0 = alpha.locate(si).first;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      std::size_t vtx = (e0 + 1 + k) % alpha.size();
      double rel = alpha.vertex_param(vtx) - si;
      if (rel < 0) rel += alpha.length();
      if (rel <= 1e-12) continue;
      if (rel >= span - 1e-12) break;
      arc.push_back(alpha.vertex(vtx));
    }
    arc.push_back(alpha.point_at(sj));

    auto geo = cones::cone_geodesic(beta_cone, cp[std::size_t(j)], cp[std::size_t(i)]);
    std::vector<Vec3> raw;
    raw.reserve(geo.path.size());
    for (const auto& p : geo.path) raw.push_back(beta_cone.position(p));
    double target = std::max(geo.length / 32.0, 1e-9);
    std::vector<Vec3> closer;
    closer.push_back(raw.front());
    for (std::size_t k = 0; k + 1 < raw.size(); ++k) {
      double len = dist(raw[k], raw[k + 1]);
      auto pieces = std::max<std::size_t>(1, std::size_t(std::ceil(len / target)));
      for (std::size_t q = 1; q <= pieces; ++q)
        closer.push_back(raw[k] + (double(q) / double(pieces)) * (raw[k + 1] - raw[k]));
    }
    if (dist(closer.front(), arc.back()) > 1e-9 || dist(closer.back(), arc.front()) > 1e-9)
      throw std::runtime_error("build_closures: closure endpoints mismatch");

    std::vector<Vec3> poly = arc;
    for (std::size_t k = 1; k + 1 < closer.size(); ++k) poly.push_back(closer[k]);
    std::vector<Vec3> dedup;
    for (const Vec3& p : poly)
      if (dedup.empty() || dist(dedup.back(), p) > 1e-12) dedup.push_back(p);
    while (dedup.size() > 1 && dist(dedup.front(), dedup.back()) <= 1e-12) dedup.pop_back();
    ClosedCurve closed(dedup);

    if (audit) {
      std::size_t n = closed.size();
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 2; q < n; ++q) {
          if (p == 0 && q == n - 1) continue;
          auto cc = segment_segment_closest(closed.vertex(p), closed.vertex(p + 1),
                                            closed.vertex(q), closed.vertex(q + 1));
          if (cc.distance < 1e-6)
            throw std::runtime_error("build_closures: closure " + std::to_string(i) +
                                     " self-intersects");
        }
    }

    out.push_back(ArcClosure{std::move(arc), std::move(closer), std::move(closed)});
  }
  return out;
}

/// Plane separating two vertex sets: points x with dot(normal, x) >
/// dot(normal, point) lie on the second set's side. `margin` is the
/// distance between the convex hulls.
struct SeparatingPlane {
  Vec3 point;
  Vec3 normal;
  double margin = 0.0;
};

/// Maximum-margin separating plane between two groups of components, or
/// nullopt when the hull distance is below 2 * thickness (tubes touching
/// or interleaved). Uses Frank-Wolfe descent on the hull-difference
/// polytope with exact line search; the optimal plane is the perpendicular
/// bisector of the shortest hull-to-hull segment.
inline std::optional<SeparatingPlane> split_by_plane(const ThickLink& link,
                                                     const std::vector<std::size_t>& side_a,
                                                     const std::vector<std::size_t>& side_b) {
  if (side_a.empty() || side_b.empty())
    throw std::invalid_argument("split_by_plane: empty side");
  std::vector<char> seen(link.components.size(), 0);
  for (std::size_t idx : side_a) {
    if (idx >= link.components.size()) throw std::invalid_argument("split_by_plane: bad index");
    seen[idx] = 1;
  }
  for (std::size_t idx : side_b) {
    if (idx >= link.components.size()) throw std::invalid_argument("split_by_plane: bad index");
    if (seen[idx]) throw std::invalid_argument("split_by_plane: sides overlap");
  }
  std::vector<Vec3> A, B;
  for (std::size_t idx : side_a)
    for (const Vec3& p : link.components[idx].vertices()) A.push_back(p);
  for (std::size_t idx : side_b)
    for (const Vec3& p : link.components[idx].vertices()) B.push_back(p);

  double need = 2.0 * link.thickness;
  Vec3 xa = A[0], xb = B[0];
  Vec3 x = xa - xb;
  const int kMaxIter = 20000;
  for (int it = 0; it < kMaxIter; ++it) {
    if (norm(x) < need - 1e-9) return std::nullopt;
    const Vec3* va = &A[0];
    double besta = dot(x, A[0]);
    for (const Vec3& p : A) {
      double dcur = dot(x, p);
      if (dcur < besta) {
        besta = dcur;
        va = &p;
      }
    }
    const Vec3* vb = &B[0];
    double bestb = dot(x, B[0]);
    for (const Vec3& p : B) {
      double dcur = dot(x, p);
      if (dcur > bestb) {
        bestb = dcur;
        vb = &p;
      }
    }
    Vec3 s = *va - *vb;
    Vec3 diff = x - s;
    double gap = dot(x, diff);
    if (gap <= 1e-10 * std::max(1.0, dot(x, x))) break;
    double denom = dot(diff, diff);
    if (denom <= 0.0) break;
    double gamma = std::clamp(gap / denom, 0.0, 1.0);
    xa = xa + gamma * (*va - xa);
    xb = xb + gamma * (*vb - xb);
    x = xa - xb;
  }
  double margin = norm(x);
  if (margin < need - 1e-9) return std::nullopt;
  return SeparatingPlane{0.5 * (xa + xb), (1.0 / margin) * (xb - xa), margin};
}

struct SplitResult {
  std::vector<std::size_t> side_a, side_b;
  SeparatingPlane plane;
};

/// Scans every bipartition of the link's components for a separating
/// plane; returns the first hit. Component counts above 20 are rejected
/// (exponential enumeration).
inline std::optional<SplitResult> find_any_split(const ThickLink& link) {
  std::size_t k = link.components.size();
  if (k < 2) return std::nullopt;
  if (k > 20) throw std::invalid_argument("find_any_split: too many components");
  for (std::uint64_t mask = 0; mask < (1ull << (k - 1)); ++mask) {
    std::vector<std::size_t> side_a{0}, side_b;
    for (std::size_t i = 1; i < k; ++i) {
      if ((mask >> (i - 1)) & 1)
        side_a.push_back(i);
      else
        side_b.push_back(i);
    }
    if (side_b.empty()) continue;
    auto plane = split_by_plane(link, side_a, side_b);
    if (plane) return SplitResult{std::move(side_a), std::move(side_b), *plane};
  }
  return std::nullopt;
}

}  // namespace gordian::topology
