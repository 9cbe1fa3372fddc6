#pragma once
// Reach (thickness) of polyline links, split into the curvature-controlled
// local radius term and the doubly-critical self-distance term, plus the
// unit-ball overlap property of thick curves.
//
// The pair term keeps only local minima of the edge-pair distance landscape
// (discrete doubly-critical pairs). Same-component pairs whose shorter
// connecting arc is below pi never count: for a curve of unit reach such a
// chord cannot be doubly critical, and on polylines that band is full of
// near-adjacency artifacts.

#include <cstdint>
#include <limits>
#include <random>
#include <unordered_map>
#include <vector>

#include "gordian/link.hpp"

namespace gordian::thickness {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LocalWitness {
  std::size_t component = 0;
  std::size_t vertex = 0;  // center of the consecutive triple
  double radius = kInf;
};

struct PairWitness {
  std::size_t comp_a = 0, comp_b = 0;
  double s_a = 0.0, s_b = 0.0;  // arc-length positions of the closest points
  double distance = kInf;       // full chord length (twice the half-distance)
};

struct ReachBreakdown {
  double min_local_radius = kInf;
  double min_pair_half_distance = kInf;
  double reach = kInf;
  LocalWitness local;
  PairWitness pair;
};

namespace detail {

struct EdgeRef {
  std::uint32_t comp;
  std::uint32_t index;
};

inline bool edges_adjacent(const ThickLink& link, const EdgeRef& a, const EdgeRef& b) {
  if (a.comp != b.comp) return false;
  if (a.index == b.index) return true;
  std::size_t n = link.components[a.comp].size();
  std::size_t d = a.index > b.index ? a.index - b.index : b.index - a.index;
  return d == 1 || d == n - 1;
}

inline double edge_pair_distance(const ThickLink& link, const EdgeRef& a, const EdgeRef& b,
                                 SegmentClosest* out = nullptr) {
  const ClosedCurve& ca = link.components[a.comp];
  const ClosedCurve& cb = link.components[b.comp];
  auto close = segment_segment_closest(ca.vertex(a.index), ca.vertex(a.index + 1),
                                       cb.vertex(b.index), cb.vertex(b.index + 1));
  if (out) *out = close;
  return close.distance;
}

/// A pair participates in the half-distance term only if it is a 2D local
/// minimum of the (i, j) distance landscape (plateaus kept) and, within one
/// component, only if the shorter arc between the closest points is >= pi.
inline bool retained_pair(const ThickLink& link, const EdgeRef& a, const EdgeRef& b,
                          double center_dist, const SegmentClosest& close) {
  const ClosedCurve& ca = link.components[a.comp];
  const ClosedCurve& cb = link.components[b.comp];
  if (a.comp == b.comp) {
    double s_a = ca.vertex_param(a.index) + close.s * ca.edge_length(a.index);
    double s_b = cb.vertex_param(b.index) + close.t * cb.edge_length(b.index);
    if (ca.min_arc(s_a, s_b) < kPi - 1e-12) return false;
  }
  const std::size_t na = ca.size(), nb = cb.size();
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj) {
      if (di == 0 && dj == 0) continue;
      EdgeRef ni{a.comp, std::uint32_t((a.index + na + std::size_t(di + 1) - 1) % na)};
      EdgeRef nj{b.comp, std::uint32_t((b.index + nb + std::size_t(dj + 1) - 1) % nb)};
      if (edges_adjacent(link, ni, nj)) continue;  // off the landscape's domain
      if (edge_pair_distance(link, ni, nj) < center_dist - 1e-12) return false;
    }
  return true;
}

struct Grid {
  double cell = 1.0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells;

  static std::uint64_t key(std::int64_t ix, std::int64_t iy, std::int64_t iz) {
    constexpr std::int64_t off = 1 << 20;
    return (std::uint64_t(ix + off) << 42) | (std::uint64_t(iy + off) << 21) |
           std::uint64_t(iz + off);
  }

  std::int64_t coord(double v) const { return std::int64_t(std::floor(v / cell)); }

  void insert_edge(std::uint32_t id, const Vec3& a, const Vec3& b) {
    std::int64_t x0 = coord(std::min(a.x, b.x)), x1 = coord(std::max(a.x, b.x));
    std::int64_t y0 = coord(std::min(a.y, b.y)), y1 = coord(std::max(a.y, b.y));
    std::int64_t z0 = coord(std::min(a.z, b.z)), z1 = coord(std::max(a.z, b.z));
    for (std::int64_t x = x0; x <= x1; ++x)
      for (std::int64_t y = y0; y <= y1; ++y)
        for (std::int64_t z = z0; z <= z1; ++z) cells[key(x, y, z)].push_back(id);
  }
};

}  // namespace detail

/// Minimum circumradius over consecutive vertex triples.
inline LocalWitness local_radius_term(const ThickLink& link) {
  LocalWitness best;
  for (std::size_t c = 0; c < link.components.size(); ++c) {
    const ClosedCurve& curve = link.components[c];
    const std::size_t n = curve.size();
    for (std::size_t i = 0; i < n; ++i) {
      double r = circumradius(curve.vertex(i + n - 1), curve.vertex(i), curve.vertex(i + 1));
      if (r < best.radius) best = {c, i, r};
    }
  }
  return best;
}

/// Reach of a polyline link: min of the local radius term and half the
/// doubly-critical pair distance. Exact over the retained-pair definition;
/// the spatial grid only prunes pairs that cannot attain the minimum.
inline ReachBreakdown reach(const ThickLink& link) {
  ReachBreakdown out;
  out.local = local_radius_term(link);
  out.min_local_radius = out.local.radius;

  std::vector<detail::EdgeRef> edges;
  double diag = 0.0;
  {
    Vec3 lo{kInf, kInf, kInf}, hi{-kInf, -kInf, -kInf};
    for (std::size_t c = 0; c < link.components.size(); ++c) {
      const auto& vs = link.components[c].vertices();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        edges.push_back({std::uint32_t(c), std::uint32_t(i)});
        lo.x = std::min(lo.x, vs[i].x); hi.x = std::max(hi.x, vs[i].x);
        lo.y = std::min(lo.y, vs[i].y); hi.y = std::max(hi.y, vs[i].y);
        lo.z = std::min(lo.z, vs[i].z); hi.z = std::max(hi.z, vs[i].z);
      }
    }
    diag = dist(lo, hi);
  }

  double cutoff = out.min_local_radius < kInf ? 2.0 * out.min_local_radius : diag;
  cutoff = std::min(std::max(cutoff, 1e-6), 2.0 * diag + 1e-6);

  PairWitness best;
  while (true) {
    detail::Grid grid;
    grid.cell = cutoff;
    for (std::uint32_t id = 0; id < edges.size(); ++id) {
      const auto& e = edges[id];
      const ClosedCurve& curve = link.components[e.comp];
      grid.insert_edge(id, curve.vertex(e.index), curve.vertex(e.index + 1));
    }
    for (std::uint32_t id = 0; id < edges.size(); ++id) {
      const auto& e = edges[id];
      const ClosedCurve& curve = link.components[e.comp];
      Vec3 a = curve.vertex(e.index), b = curve.vertex(e.index + 1);
      std::int64_t x0 = grid.coord(std::min(a.x, b.x)) - 1, x1 = grid.coord(std::max(a.x, b.x)) + 1;
      std::int64_t y0 = grid.coord(std::min(a.y, b.y)) - 1, y1 = grid.coord(std::max(a.y, b.y)) + 1;
      std::int64_t z0 = grid.coord(std::min(a.z, b.z)) - 1, z1 = grid.coord(std::max(a.z, b.z)) + 1;
      for (std::int64_t x = x0; x <= x1; ++x)
        for (std::int64_t y = y0; y <= y1; ++y)
          for (std::int64_t z = z0; z <= z1; ++z) {
            auto it = grid.cells.find(detail::Grid::key(x, y, z));
            if (it == grid.cells.end()) continue;
            for (std::uint32_t other : it->second) {
              if (other <= id) continue;
              const auto& f = edges[other];
              if (detail::edges_adjacent(link, e, f)) continue;
              SegmentClosest close;
              double d = detail::edge_pair_distance(link, e, f, &close);
              if (d >= cutoff || d >= best.distance) continue;
              if (!detail::retained_pair(link, e, f, d, close)) continue;
              const ClosedCurve& cb = link.components[f.comp];
              best.comp_a = e.comp;
              best.comp_b = f.comp;
              best.s_a = curve.vertex_param(e.index) + close.s * curve.edge_length(e.index);
              best.s_b = cb.vertex_param(f.index) + close.t * cb.edge_length(f.index);
              best.distance = d;
            }
          }
    }
    if (best.distance < kInf || cutoff > 2.0 * diag) break;
    cutoff *= 2.0;
  }

  out.pair = best;
  out.min_pair_half_distance = best.distance / 2.0;
  out.reach = std::min(out.min_local_radius, out.min_pair_half_distance);
  return out;
}

/// Brute-force reference: circumradius over all vertex triples within each
/// component (the global radius of curvature) plus half the minimum
/// cross-component vertex distance. O(n^3); test oracle only.
inline double brute_reach(const ThickLink& link) {
  double best = kInf;
  for (const ClosedCurve& c : link.components) {
    const auto& v = c.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          double r = circumradius(v[i], v[j], v[k]);
          if (r < best) best = r;
        }
  }
  for (std::size_t a = 0; a + 1 < link.components.size(); ++a)
    for (std::size_t b = a + 1; b < link.components.size(); ++b)
      for (const Vec3& p : link.components[a].vertices())
        for (const Vec3& q : link.components[b].vertices())
          best = std::min(best, dist(p, q) / 2.0);
  return best;
}

/// JSON report with the reach value, both terms and their witnesses.
/// Absent terms (a round curve has no doubly-critical pair) appear as null.
inline std::string reach_report_json(const ReachBreakdown& r) {
  using io::format_double;
  std::string out = "{\n  \"reach\": " + format_double(r.reach);
  out += ",\n  \"local_term\": " + format_double(r.min_local_radius);
  out += ",\n  \"pair_term\": ";
  out += r.min_pair_half_distance < kInf ? format_double(r.min_pair_half_distance) : "null";
  out += ",\n  \"witness\": {\n    \"local\": {\"component\": " +
         std::to_string(r.local.component) + ", \"vertex\": " + std::to_string(r.local.vertex) +
         ", \"radius\": " + format_double(r.local.radius) + "},\n    \"pair\": ";
  if (r.pair.distance < kInf) {
    out += "{\"component_a\": " + std::to_string(r.pair.comp_a) +
           ", \"component_b\": " + std::to_string(r.pair.comp_b) +
           ", \"s_a\": " + format_double(r.pair.s_a) + ", \"s_b\": " + format_double(r.pair.s_b) +
           ", \"distance\": " + format_double(r.pair.distance) + "}";
  } else {
    out += "null";
  }
  out += "\n  }\n}\n";
  return out;
}

struct BallOverlapReport {
  std::size_t qualifying = 0;
  double min_chord = kInf;
  double s1 = 0.0, s2 = 0.0;  // pair realizing min_chord
  bool pass = true;
};

/// Samples random parameter pairs whose two connecting arcs are both at
/// least pi (minus arc_tol, which admits the discretization deficit of
/// inscribed polylines) and checks the chord is >= 2 - chord_tol.
/// Rejects curves that are not thick to within reach_tol.
inline BallOverlapReport ball_overlap_property(const ClosedCurve& c, std::size_t samples,
                                               std::uint64_t seed = 0,
                                               double chord_tol = 1e-3,
                                               double arc_tol = 1e-4,
                                               double reach_tol = 1e-2) {
  ThickLink link({c}, 1.0);
  double rho = reach(link).reach;
  if (rho < 1.0 - reach_tol)
    throw std::invalid_argument("ball_overlap_property: curve is not thick (reach < 1 - tol)");

  BallOverlapReport report;
  double L = c.length();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, L);
  for (std::size_t i = 0; i < samples; ++i) {
    double s1 = u(rng), s2 = u(rng);
    auto [fwd, back] = c.arc_distance(s1, s2);
    if (std::min(fwd, back) < kPi - arc_tol) continue;
    ++report.qualifying;
    double chord = dist(c.point_at(s1), c.point_at(s2));
    if (chord < report.min_chord) {
      report.min_chord = chord;
      report.s1 = s1;
      report.s2 = s2;
    }
  }
  report.pass = report.qualifying == 0 || report.min_chord >= 2.0 - chord_tol;
  return report;
}

}  // namespace gordian::thickness
