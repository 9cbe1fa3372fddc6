#pragma once
// Closed polyline curves: construction with invariant checks, arc-length
// addressing, measurement, resampling, and similarity transforms.
//
// Arc-length parameters are canonical: s = 0 at vertex 0, increasing along
// the vertex order, wrapping at the total length.

#include <cstddef>
#include <utility>
#include <vector>

#include "gordian/geometry.hpp"

namespace gordian {

class ClosedCurve {
 public:
  /// Takes ownership of an ordered cyclic vertex list.
  /// Rejects: fewer than 3 vertices, non-finite coordinates, zero-length
  /// edges, and exactly anti-parallel consecutive edges (cusps).
  explicit ClosedCurve(std::vector<Vec3> vertices) : verts_(std::move(vertices)) {
    const std::size_t n = verts_.size();
    if (n < 3) throw std::invalid_argument("ClosedCurve: needs at least 3 vertices");
    for (const Vec3& v : verts_)
      if (!finite(v)) throw std::invalid_argument("ClosedCurve: non-finite vertex");
    cum_.resize(n + 1);
    cum_[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double el = dist(verts_[i], verts_[(i + 1) % n]);
      if (!(el > 0.0)) throw std::invalid_argument("ClosedCurve: zero-length edge");
      cum_[i + 1] = cum_[i] + el;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 e0 = normalized(edge_vector(i == 0 ? n - 1 : i - 1));
      Vec3 e1 = normalized(edge_vector(i));
      if (dot(e0, e1) < -1.0 + 1e-12)
        throw std::invalid_argument("ClosedCurve: anti-parallel consecutive edges (cusp)");
    }
  }

  std::size_t size() const { return verts_.size(); }
  const std::vector<Vec3>& vertices() const { return verts_; }
  const Vec3& vertex(std::size_t i) const { return verts_[i % verts_.size()]; }

  double length() const { return cum_.back(); }
  double edge_length(std::size_t i) const { return cum_[i + 1] - cum_[i]; }
  Vec3 edge_vector(std::size_t i) const {
    return verts_[(i + 1) % verts_.size()] - verts_[i];
  }
  /// Arc-length position of vertex i (i may equal size(), giving length()).
  double vertex_param(std::size_t i) const { return cum_[i]; }

  /// Wraps an arbitrary parameter into [0, length).
  double wrap(double s) const {
    double L = length();
    double r = std::fmod(s, L);
    return r < 0.0 ? r + L : r;
  }

  /// Edge index containing parameter s, plus the offset into that edge.
  std::pair<std::size_t, double> locate(double s) const {
    double sw = wrap(s);
    // cum_ is strictly increasing; binary search for the containing edge.
    std::size_t lo = 0, hi = verts_.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cum_[mid] <= sw)
        lo = mid;
      else
        hi = mid;
    }
    return {lo, sw - cum_[lo]};
  }

  Vec3 point_at(double s) const {
    auto [i, off] = locate(s);
    return verts_[i] + edge_vector(i) * (off / edge_length(i));
  }

  /// Unit tangent on the edge containing s (right-continuous at vertices).
  Vec3 tangent_at(double s) const {
    auto [i, off] = locate(s);
    (void)off;
    return normalized(edge_vector(i));
  }

  /// Arc-length-weighted centroid (wire center of mass), not the vertex mean.
  Vec3 centroid() const {
    CompensatedSum cx, cy, cz;
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
      Vec3 mid = (verts_[i] + verts_[(i + 1) % n]) * 0.5;
      double w = edge_length(i);
      cx.add(mid.x * w);
      cy.add(mid.y * w);
      cz.add(mid.z * w);
    }
    double L = length();
    return {cx.value() / L, cy.value() / L, cz.value() / L};
  }

  /// n vertices at equal arc-length spacing, starting at vertex 0.
  /// Length never increases; the deficit vanishes as n grows.
  ClosedCurve resample(std::size_t n) const {
    if (n < 3) throw std::invalid_argument("resample: needs n >= 3");
    std::vector<Vec3> out;
    out.reserve(n);
    double L = length();
    for (std::size_t k = 0; k < n; ++k) out.push_back(point_at(L * double(k) / double(n)));
    return ClosedCurve(std::move(out));
  }

  ClosedCurve transformed(const Similarity& map) const {
    std::vector<Vec3> out;
    out.reserve(verts_.size());
    for (const Vec3& v : verts_) out.push_back(map.apply(v));
    return ClosedCurve(std::move(out));
  }

  /// Lengths of the two complementary arcs between parameters s1 and s2:
  /// first the arc from s1 forward to s2, then the remainder.
  std::pair<double, double> arc_distance(double s1, double s2) const {
    double L = length();
    if (!(s1 >= 0.0 && s1 <= L && s2 >= 0.0 && s2 <= L))
      throw std::invalid_argument("arc_distance: parameter out of [0, length]");
    double fwd = s2 - s1;
    if (fwd < 0.0) fwd += L;
    return {fwd, L - fwd};
  }

  /// Shorter of the two arcs between s1 and s2.
  double min_arc(double s1, double s2) const {
    auto [a, b] = arc_distance(wrap(s1), wrap(s2));
    return std::min(a, b);
  }

  /// Ambient distance from a point to the polyline.
  double distance_to(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i)
      best = std::min(best, point_segment_distance(p, verts_[i], verts_[(i + 1) % n]));
    return best;
  }

 private:
  std::vector<Vec3> verts_;
  std::vector<double> cum_;  // cum_[i] = arc length up to vertex i; cum_[n] = total
};

}  // namespace gordian
