#pragma once

// Curve generators shared by the test suites.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gordian/curve.hpp"
#include "gordian/geometry.hpp"

namespace testsupport {

using gordian::ClosedCurve;
using gordian::Vec3;

inline ClosedCurve circle(double r, std::size_t n, Vec3 center = {0, 0, 0},
                          Vec3 axis_u = {1, 0, 0}, Vec3 axis_v = {0, 1, 0}) {
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2.0 * gordian::kPi * double(i) / double(n);
    pts.push_back(center + r * std::cos(t) * axis_u + r * std::sin(t) * axis_v);
  }
  return ClosedCurve(pts);
}

inline ClosedCurve ellipse(double a, double b, std::size_t n) {
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2.0 * gordian::kPi * double(i) / double(n);
    pts.push_back({a * std::cos(t), b * std::sin(t), 0.0});
  }
  return ClosedCurve(pts);
}

inline ClosedCurve square4(double half) {
  return ClosedCurve({{half, -half, 0}, {half, half, 0}, {-half, half, 0}, {-half, -half, 0}});
}

// Square with one vertex lifted out of the plane, optionally subdivided.
inline ClosedCurve lifted_square(double half, double lift, std::size_t per_edge) {
  std::vector<Vec3> corners{
      {half, -half, 0}, {half, half, 0}, {-half, half, 0}, {-half, -half, lift}};
  std::vector<Vec3> pts;
  for (std::size_t c = 0; c < 4; ++c)
    for (std::size_t k = 0; k < per_edge; ++k) {
      double u = double(k) / double(per_edge);
      pts.push_back(corners[c] + u * (corners[(c + 1) % 4] - corners[c]));
    }
  return ClosedCurve(pts);
}

// Outward offset of a planar convex polygon (CCW, z = 0): straight sides
// plus corner arcs of radius r.
inline ClosedCurve offset_polygon(const std::vector<Vec3>& poly, double r, double spacing) {
  std::vector<Vec3> pts;
  std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    Vec3 a = poly[i], b = poly[(i + 1) % m], c = poly[(i + 2) % m];
    Vec3 e1 = gordian::normalized(b - a), e2 = gordian::normalized(c - b);
    Vec3 n1{e1.y, -e1.x, 0}, n2{e2.y, -e2.x, 0};  // outward for CCW
    std::size_t k =
        std::max<std::size_t>(2, std::size_t(std::ceil(gordian::dist(a, b) / spacing)));
    for (std::size_t j = 0; j < k; ++j)
      pts.push_back(a + r * n1 + (double(j) / double(k)) * (b - a));
    double a1 = std::atan2(n1.y, n1.x), a2 = std::atan2(n2.y, n2.x);
    double turn = a2 - a1;
    while (turn < 0) turn += 2.0 * gordian::kPi;
    std::size_t ka = std::max<std::size_t>(2, std::size_t(std::ceil(r * turn / spacing)));
    for (std::size_t j = 0; j < ka; ++j) {
      double ang = a1 + turn * double(j) / double(ka);
      pts.push_back(b + Vec3{r * std::cos(ang), r * std::sin(ang), 0});
    }
  }
  return ClosedCurve(pts);
}

// Random smooth loop: unit circle plus low-order Fourier perturbations.
inline ClosedCurve fourier_loop(std::uint64_t seed, std::size_t n, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  std::array<std::array<double, 6>, 3> coef;
  for (auto& c : coef)
    for (auto& v : c) v = u(rng);
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2.0 * gordian::kPi * double(i) / double(n);
    Vec3 p{std::cos(t), std::sin(t), 0.0};
    for (int k = 1; k <= 3; ++k) {
      p.x += coef[0][2 * k - 2] * std::cos(k * t) + coef[0][2 * k - 1] * std::sin(k * t);
      p.y += coef[1][2 * k - 2] * std::cos(k * t) + coef[1][2 * k - 1] * std::sin(k * t);
      p.z += coef[2][2 * k - 2] * std::cos(k * t) + coef[2][2 * k - 1] * std::sin(k * t);
    }
    pts.push_back(p);
  }
  return ClosedCurve(pts);
}

}  // namespace testsupport
