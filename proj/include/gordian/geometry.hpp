#pragma once
// Small geometric primitives shared by every module: 3-vectors, distances
// between points and segments, circumradius, and similarity transforms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gordian {

inline constexpr double kPi = std::numbers::pi_v<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Unit vector in the direction of v. Throws on (near-)zero input.
inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("normalized: zero or non-finite vector");
  return v / n;
}

/// Angle between two nonzero vectors in [0, pi]. Stable near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  double c = norm(cross(a, b));
  double d = dot(a, b);
  return std::atan2(c, d);
}

/// Radius of the circle through three points; +inf when collinear.
/// Coincident points (any pair closer than 1e-12 relative) are rejected.
inline double circumradius(const Vec3& p, const Vec3& q, const Vec3& r) {
  if (!finite(p) || !finite(q) || !finite(r)) throw std::invalid_argument("circumradius: non-finite point");
  double a = dist(q, r), b = dist(p, r), c = dist(p, q);
  double scale = std::max({a, b, c});
  if (a <= 1e-12 * scale || b <= 1e-12 * scale || c <= 1e-12 * scale || scale == 0.0)
    throw std::invalid_argument("circumradius: coincident points");
  double twice_area = norm(cross(q - p, r - p));
  if (twice_area <= 1e-14 * scale * scale) return std::numeric_limits<double>::infinity();
  return a * b * c / (2.0 * twice_area);
}

/// Distance from point p to segment [a, b].
inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = norm2(ab);
  if (len2 == 0.0) return dist(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + ab * t);
}

struct SegmentClosest {
  double distance = 0.0;
  double s = 0.0;  // parameter on [p1, q1]
  double t = 0.0;  // parameter on [p2, q2]
  Vec3 c1, c2;     // realizing points
};

/// Closest points between segments [p1,q1] and [p2,q2]. Degenerate
/// (zero-length) segments are handled as points.
inline SegmentClosest segment_segment_closest(const Vec3& p1, const Vec3& q1,
                                              const Vec3& p2, const Vec3& q2) {
  Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  double a = norm2(d1), e = norm2(d2), f = dot(d2, r);
  double s = 0.0, t = 0.0;
  constexpr double eps = 1e-30;
  if (a <= eps && e <= eps) {
    s = t = 0.0;
  } else if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    double c = dot(d1, r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      double b = dot(d1, d2);
      double denom = a * e - b * b;
      if (denom > eps * a * e) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  SegmentClosest out;
  out.s = s;
  out.t = t;
  out.c1 = p1 + d1 * s;
  out.c2 = p2 + d2 * t;
  out.distance = dist(out.c1, out.c2);
  return out;
}

struct Mat3 {
  // Row-major.
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  Vec3 apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  /// Rodrigues rotation about a unit axis.
  static Mat3 rotation(const Vec3& axis, double angle) {
    Vec3 u = normalized(axis);
    double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 r;
    r.m[0][0] = c + u.x * u.x * t;
    r.m[0][1] = u.x * u.y * t - u.z * s;
    r.m[0][2] = u.x * u.z * t + u.y * s;
    r.m[1][0] = u.y * u.x * t + u.z * s;
    r.m[1][1] = c + u.y * u.y * t;
    r.m[1][2] = u.y * u.z * t - u.x * s;
    r.m[2][0] = u.z * u.x * t - u.y * s;
    r.m[2][1] = u.z * u.y * t + u.x * s;
    r.m[2][2] = c + u.z * u.z * t;
    return r;
  }
};

/// Orientation-preserving similarity: v -> scale * R v + t, scale > 0.
struct Similarity {
  double scale = 1.0;
  Mat3 rot;
  Vec3 trans;

  Similarity() = default;
  Similarity(double scale_, const Mat3& rot_, const Vec3& trans_)
      : scale(scale_), rot(rot_), trans(trans_) {
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw std::invalid_argument("Similarity: scale must be positive");
  }

  Vec3 apply(const Vec3& v) const { return rot.apply(v) * scale + trans; }

  /// this after other: (this * other)(v) = this(other(v)).
  Similarity operator*(const Similarity& o) const {
    return Similarity(scale * o.scale, rot * o.rot, rot.apply(o.trans) * scale + trans);
  }

  static Similarity identity() { return Similarity(); }
  static Similarity translation(const Vec3& t) { return Similarity(1.0, Mat3{}, t); }
  static Similarity uniform_scale(double s) { return Similarity(s, Mat3{}, Vec3{}); }
  static Similarity rotation(const Vec3& axis, double angle) {
    return Similarity(1.0, Mat3::rotation(axis, angle), Vec3{});
  }
  /// Dilation v -> 2v/(2 - delta), defined for delta < 2.
  static Similarity dilation(double delta) {
    if (!(delta < 2.0)) throw std::invalid_argument("dilation: requires delta < 2");
    return uniform_scale(2.0 / (2.0 - delta));
  }
};

/// Neumaier compensated accumulator; order-stable summation for long sums.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace gordian
