#pragma once

// Monitored relaxation of thick links. A monitor intersects the weaving
// component with the disk spanned by a flat component's cone, evaluates the
// five disk-weave conditions, and derives the cone-angle and arc-length
// consequences. An evolution loop applies a bounded objective step, restores
// the thickness and length constraints by projection, and appends a report
// per accepted step; a certifier scans the resulting trace.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cones.hpp"
#include "curve.hpp"
#include "geometry.hpp"
#include "link.hpp"
#include "thickness.hpp"
#include "topology.hpp"

namespace gordian::isotopy {

/// One transverse passage of the weaving component through the cone disk.
struct DiskCrossing {
  double alpha_param = 0.0;      // arc length along the weaving component
  cones::ConePoint on_cone;      // same point in cone coordinates
  Vec3 point;                    // ambient position
  Vec3 disk_normal;              // unit normal of the crossed cone triangle
  double tangent_angle = 0.0;    // angle between curve tangent and disk normal
};

namespace detail {

/// All transverse crossings of `alpha` with the cone's triangle fan,
/// sorted by parameter along `alpha`. Edge parameters are half-open so a
/// crossing at a shared vertex or fan seam counts once.
inline std::vector<DiskCrossing> disk_crossings(const ClosedCurve& alpha,
                                                const cones::Cone& cone) {
  const ClosedCurve& base = cone.base();
  const Vec3 apex = cone.apex();
  const std::size_t nb = base.size();

  Vec3 lo = apex, hi = apex;
  for (const Vec3& v : base.vertices()) {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
  }

  std::vector<DiskCrossing> out;
  const double kBary = 1e-12;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    Vec3 p0 = alpha.vertex(i), p1 = alpha.vertex(i + 1);
    Vec3 elo{std::min(p0.x, p1.x), std::min(p0.y, p1.y), std::min(p0.z, p1.z)};
    Vec3 ehi{std::max(p0.x, p1.x), std::max(p0.y, p1.y), std::max(p0.z, p1.z)};
    if (elo.x > hi.x || ehi.x < lo.x || elo.y > hi.y || ehi.y < lo.y || elo.z > hi.z ||
        ehi.z < lo.z)
      continue;
    Vec3 dir = p1 - p0;
    for (std::size_t j = 0; j < nb; ++j) {
      Vec3 b = base.vertex(j), c = base.vertex(j + 1);
      Vec3 e1 = b - apex, e2 = c - apex;
      Vec3 h = cross(dir, e2);
      double det = dot(e1, h);
      if (std::abs(det) < 1e-14) continue;  // edge parallel to the triangle
      double f = 1.0 / det;
      Vec3 s = p0 - apex;
      double u = f * dot(s, h);
      if (u < -kBary || u > 1.0 + kBary) continue;
      Vec3 q = cross(s, e1);
      double v = f * dot(dir, q);
      if (v < -kBary || u + v > 1.0 + kBary) continue;
      double t = f * dot(e2, q);
      if (t < 0.0 || t >= 1.0) continue;  // half-open along the curve edge

      DiskCrossing x;
      x.alpha_param = alpha.wrap(alpha.vertex_param(i) + t * alpha.edge_length(i));
      x.point = p0 + t * dir;
      double radial = u + v;  // 0 at the apex, 1 on the base curve
      double along = radial > 1e-12 ? std::clamp(v / radial, 0.0, 1.0) : 0.0;
      x.on_cone.s = base.wrap(base.vertex_param(j) + along * base.edge_length(j));
      x.on_cone.t = std::clamp(radial, 0.0, 1.0);
      Vec3 n = cross(e1, e2);
      double nn = norm(n);
      x.disk_normal = nn > 0.0 ? (1.0 / nn) * n : Vec3{0.0, 0.0, 1.0};
      double dn = norm(dir);
      double cosang = dn > 0.0 ? std::abs(dot(dir, x.disk_normal)) / dn : 0.0;
      x.tangent_angle = std::acos(std::clamp(cosang, 0.0, 1.0));
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const DiskCrossing& a, const DiskCrossing& b) { return a.alpha_param < b.alpha_param; });
  // A passage through a fan seam satisfies both adjacent triangles; keep one.
  std::vector<DiskCrossing> dedup;
  for (const DiskCrossing& x : out)
    if (dedup.empty() || x.alpha_param - dedup.back().alpha_param > 1e-9)
      dedup.push_back(x);
  if (dedup.size() > 1 && alpha.length() - (dedup.back().alpha_param - dedup.front().alpha_param) < 1e-9)
    dedup.pop_back();
  return dedup;
}

/// Largest deviation of the curve's vertices from its best-fit plane
/// through the centroid (Newell normal).
inline double planarity_defect(const ClosedCurve& c) {
  Vec3 n{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < c.size(); ++i) n = n + cross(c.vertex(i), c.vertex(i + 1));
  double nn = norm(n);
  if (nn < 1e-14) return 0.0;
  n = (1.0 / nn) * n;
  Vec3 mid = c.centroid();
  double worst = 0.0;
  for (const Vec3& v : c.vertices()) worst = std::max(worst, std::abs(dot(v - mid, n)));
  return worst;
}

inline double polyline_length(const std::vector<Vec3>& pts) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) len += dist(pts[i], pts[i + 1]);
  return len;
}

}  // namespace detail

/// Outcome of one disk-weave inspection. The five conditions each pair a
/// verdict with the measured quantity it was judged on; the derived fields
/// capture the consequences re-checked when all five hold.
struct LemmaReport {
  double t = 0.0;  // trace time (step index) this report belongs to

  std::vector<DiskCrossing> crossings;  // sorted by weaving-curve parameter

  bool condition1 = false;          // exactly four disk crossings
  std::size_t crossing_count = 0;
  bool condition2 = false;          // crossing feet separated by arcs > pi
  double min_foot_gap = 0.0;        // least cyclic arc between feet on the flat curve
  bool condition3 = false;          // developed crossing quadrilateral convex, sides >= 2
  double min_side = 0.0;
  bool condition4 = false;          // apex interior to the quadrilateral
  double apex_margin = 0.0;         // developed distance from apex to its boundary
  bool condition5 = false;          // opposite closed quarters link the others
  long long lk13 = 0;
  long long lk24 = 0;

  double theta = 0.0;               // cone angle over the flat component
  double planarity_defect = 0.0;    // flat component's deviation from its mean plane
  double min_arc_len = 0.0;         // least length of the four weaving arcs
  double gamma13_distance = 0.0;    // least distance between the opposite quarters
  cones::FourPointReport four_point;

  bool all_conditions() const {
    return condition1 && condition2 && condition3 && condition4 && condition5;
  }

  /// Consequences implied by the five conditions: the cone is flat up to
  /// tolerance and every weaving arc clears the 8.8 length bound.
  bool conclusions_hold(double theta_tol = 1e-3) const {
    return all_conditions() && std::abs(theta - 2.0 * kPi) <= theta_tol && min_arc_len > 8.8;
  }
};

/// Inspects the weaving component `alpha_idx` against the cone disk of the
/// flat component `beta_idx`. Crossings are detected from scratch; no prior
/// marks are consulted.
inline LemmaReport monitor(const ThickLink& link, std::size_t alpha_idx, std::size_t beta_idx,
                           double t = 0.0) {
  if (alpha_idx >= link.components.size() || beta_idx >= link.components.size())
    throw std::invalid_argument("monitor: component index out of range");
  if (alpha_idx == beta_idx)
    throw std::invalid_argument("monitor: weaving and flat components must differ");
  const ClosedCurve& alpha = link.components[alpha_idx];
  const ClosedCurve& beta = link.components[beta_idx];

  cones::Cone cone = cones::build_cone(beta);
  LemmaReport rep;
  rep.t = t;
  rep.theta = cone.cone_angle();
  rep.planarity_defect = detail::planarity_defect(beta);

  rep.crossings = detail::disk_crossings(alpha, cone);
  rep.crossing_count = rep.crossings.size();
  rep.condition1 = rep.crossing_count == 4;
  if (!rep.condition1) return rep;

  std::array<double, 4> feet{};
  for (int i = 0; i < 4; ++i) feet[i] = beta.wrap(rep.crossings[i].on_cone.s);
  std::sort(feet.begin(), feet.end());
  rep.min_foot_gap = beta.length() - (feet[3] - feet[0]);
  for (int i = 0; i < 3; ++i) rep.min_foot_gap = std::min(rep.min_foot_gap, feet[i + 1] - feet[i]);
  rep.condition2 = rep.min_foot_gap > kPi - 1e-9;

  std::array<cones::ConePoint, 4> pts{};
  for (int i = 0; i < 4; ++i) pts[i] = rep.crossings[i].on_cone;
  rep.four_point = cones::four_point_property(cone, pts);
  rep.min_side = *std::min_element(rep.four_point.quad.sides.begin(), rep.four_point.quad.sides.end());
  rep.condition3 = rep.four_point.quad.convex && rep.min_side >= 2.0 - 1e-3;
  rep.condition4 = rep.four_point.quad.apex_inside;
  rep.apex_margin = rep.four_point.apex_margin;

  std::array<double, 4> marks{};
  for (int i = 0; i < 4; ++i) marks[i] = rep.crossings[i].alpha_param;
  auto closures = topology::build_closures(alpha, cone, marks, /*audit=*/false);
  rep.min_arc_len = std::numeric_limits<double>::infinity();
  for (const auto& cl : closures)
    rep.min_arc_len = std::min(rep.min_arc_len, detail::polyline_length(cl.arc));
  rep.gamma13_distance =
      topology::curve_pair_min_distance(closures[0].closed, closures[2].closed);
  try {
    auto g13 = topology::gauss_linking(closures[0].closed, closures[2].closed);
    auto g24 = topology::gauss_linking(closures[1].closed, closures[3].closed);
    rep.lk13 = g13.rounded;
    rep.lk24 = g24.rounded;
    rep.condition5 = g13.residual <= 0.25 && g24.residual <= 0.25 && rep.lk13 != 0 && rep.lk24 != 0;
  } catch (const std::invalid_argument&) {
    rep.condition5 = false;  // closed quarters touch; no linking verdict
  }
  return rep;
}

/// Marks-file overload: the sidecar names which components to inspect.
inline LemmaReport monitor(const ThickLink& link, const LinkMarks& marks, double t = 0.0) {
  if (marks.betas.empty()) throw std::invalid_argument("monitor: missing component designation");
  return monitor(link, marks.alpha, marks.betas.front(), t);
}

/// Per-crossing angles between the weaving tangent and the disk normal.
/// An angle near pi/2 means the curve grazes the disk instead of passing
/// through it; such crossings are flagged.
struct TransversalityReport {
  std::vector<double> angles;          // one per crossing, sorted by parameter
  double max_angle = 0.0;
  std::vector<std::size_t> flagged;    // indices with angle > pi/2 - 0.1
  bool all_transverse = true;
};

inline TransversalityReport transversality_check(const ThickLink& link, std::size_t alpha_idx,
                                                 std::size_t beta_idx) {
  if (alpha_idx >= link.components.size() || beta_idx >= link.components.size())
    throw std::invalid_argument("transversality_check: component index out of range");
  if (alpha_idx == beta_idx)
    throw std::invalid_argument("transversality_check: weaving and flat components must differ");
  cones::Cone cone = cones::build_cone(link.components[beta_idx]);
  auto crossings = detail::disk_crossings(link.components[alpha_idx], cone);
  TransversalityReport rep;
  for (std::size_t i = 0; i < crossings.size(); ++i) {
    rep.angles.push_back(crossings[i].tangent_angle);
    rep.max_angle = std::max(rep.max_angle, crossings[i].tangent_angle);
    if (crossings[i].tangent_angle > kPi / 2.0 - 0.1) {
      rep.flagged.push_back(i);
      rep.all_transverse = false;
    }
  }
  return rep;
}

/// What the evolution pushes toward. `split` drives the two sides apart
/// along the x axis, `shorten` runs curve-shortening on one component,
/// `jiggle` applies a bounded seeded random field.
struct Objective {
  enum class Kind { split, shorten, jiggle };
  Kind kind = Kind::split;
  std::vector<std::size_t> side_a;  // split: components pushed toward -x; the rest go +x
  std::size_t target = 0;           // shorten: the component whose length decreases
};

inline Objective split_objective(std::vector<std::size_t> side_a) {
  Objective o;
  o.kind = Objective::Kind::split;
  o.side_a = std::move(side_a);
  return o;
}

inline Objective shorten_objective(std::size_t target) {
  Objective o;
  o.kind = Objective::Kind::shorten;
  o.target = target;
  return o;
}

inline Objective jiggle_objective() {
  Objective o;
  o.kind = Objective::Kind::jiggle;
  return o;
}

struct EvolveConfig {
  double step_size = 0.01;          // objective displacement per step
  int sweeps = 50;                  // constraint-projection passes per step
  long long snapshot_every = 10;    // full-state snapshot cadence (steps)
  double tol = 1e-2;                // relative reach slack accepted after projection
  double length_tol = 1e-4;         // relative length drift allowed on preserved components
  double displacement_bound = 0.1;  // max vertex motion per accepted step
  std::uint64_t seed = 0;
  std::size_t alpha = 0;            // weaving component for the monitor
  std::size_t beta = 1;             // flat component for the monitor
};

/// One accepted step of the evolution.
struct TraceRow {
  long long step = 0;
  double reach = 0.0;
  std::vector<double> lengths;  // per component
  double objective_value = 0.0;
  std::string status;           // "ok", "separated", or "stuck"
  LemmaReport report;
};

struct Snapshot {
  long long step = 0;
  std::vector<ClosedCurve> components;
};

struct IsotopyTrace {
  EvolveConfig config;
  Objective objective;
  double thickness = 1.0;
  std::vector<TraceRow> rows;        // one per accepted step, including step 0
  std::vector<Snapshot> snapshots;   // step 0, every snapshot_every steps, final
  std::string final_status;          // "completed", "separated", or "stuck"
};

namespace detail {

/// Deterministic uniform double in [0, 1) from the raw generator stream.
inline double unit_double(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

inline Vec3 unit_vector(std::mt19937_64& rng) {
  // Rejection-sampled direction; deterministic for a given stream position.
  for (;;) {
    Vec3 v{2.0 * unit_double(rng) - 1.0, 2.0 * unit_double(rng) - 1.0,
           2.0 * unit_double(rng) - 1.0};
    double n2 = dot(v, v);
    if (n2 > 1e-6 && n2 <= 1.0) return (1.0 / std::sqrt(n2)) * v;
  }
}

inline Vec3 cap_norm(Vec3 v, double cap) {
  double n = norm(v);
  return n > cap ? (cap / n) * v : v;
}

struct EdgeId {
  std::size_t comp, index;
};

/// Uniform hash grid over edge midpoints used to collect candidate close
/// pairs once per projection attempt.
struct PairScan {
  double cell = 1.0;
  std::unordered_map<long long, std::vector<EdgeId>> cells;

  long long key(long long x, long long y, long long z) const {
    return (x * 73856093) ^ (y * 19349663) ^ (z * 83492791);
  }
  long long coord(double v) const { return (long long)std::floor(v / cell); }
};

struct ClosePair {
  EdgeId a, b;
};

/// Candidate edge pairs closer than `cutoff`, skipping neighborhoods along
/// the same component (arc separation below `arc_skip`).
inline std::vector<ClosePair> close_pairs(const std::vector<std::vector<Vec3>>& pts,
                                          const std::vector<const ClosedCurve*>& shapes,
                                          double cutoff, double arc_skip) {
  PairScan grid;
  grid.cell = cutoff;
  for (std::size_t c = 0; c < pts.size(); ++c) {
    const auto& p = pts[c];
    for (std::size_t i = 0; i < p.size(); ++i) {
      Vec3 mid = 0.5 * (p[i] + p[(i + 1) % p.size()]);
      grid.cells[grid.key(grid.coord(mid.x), grid.coord(mid.y), grid.coord(mid.z))].push_back(
          {c, i});
    }
  }
  std::vector<ClosePair> out;
  for (std::size_t c = 0; c < pts.size(); ++c) {
    const auto& p = pts[c];
    for (std::size_t i = 0; i < p.size(); ++i) {
      Vec3 a0 = p[i], a1 = p[(i + 1) % p.size()];
      Vec3 mid = 0.5 * (a0 + a1);
      long long cx = grid.coord(mid.x), cy = grid.coord(mid.y), cz = grid.coord(mid.z);
      for (long long dx = -1; dx <= 1; ++dx)
        for (long long dy = -1; dy <= 1; ++dy)
          for (long long dz = -1; dz <= 1; ++dz) {
            auto it = grid.cells.find(grid.key(cx + dx, cy + dy, cz + dz));
            if (it == grid.cells.end()) continue;
            for (const EdgeId& other : it->second) {
              if (other.comp < c || (other.comp == c && other.index <= i)) continue;
              if (other.comp == c) {
                const ClosedCurve& shape = *shapes[c];
                double sa = shape.vertex_param(i) + 0.5 * shape.edge_length(i);
                double sb =
                    shape.vertex_param(other.index) + 0.5 * shape.edge_length(other.index);
                if (shape.min_arc(sa, sb) < arc_skip) continue;
              }
              Vec3 b0 = pts[other.comp][other.index];
              Vec3 b1 = pts[other.comp][(other.index + 1) % pts[other.comp].size()];
              auto cl = segment_segment_closest(a0, a1, b0, b1);
              if (cl.distance < cutoff) out.push_back({{c, i}, other});
            }
          }
    }
  }
  return out;
}

}  // namespace detail

/// Evolves the link toward the objective. Each step applies a bounded
/// objective displacement, then projects back onto the constraint set
/// (edge lengths, pair clearance, local radius) and accepts the step only
/// if the exact reach and the preserved lengths recover; a failing step is
/// retried at half size, and a step that cannot be repaired ends the trace
/// with status "stuck". A split objective that achieves a separating plane
/// ends the trace with status "separated".
inline IsotopyTrace evolve(const ThickLink& link, const Objective& objective, long long steps,
                           const EvolveConfig& config = {}) {
  const double T = link.thickness;
  const std::size_t ncomp = link.components.size();
  if (steps < 0) throw std::invalid_argument("evolve: negative step count");
  if (config.step_size <= 0.0 || config.sweeps <= 0 || config.snapshot_every <= 0 ||
      config.tol <= 0.0)
    throw std::invalid_argument("evolve: config values must be positive");

  std::vector<std::size_t> side_a, side_b;
  if (objective.kind == Objective::Kind::split) {
    std::vector<char> in_a(ncomp, 0);
    for (std::size_t idx : objective.side_a) {
      if (idx >= ncomp) throw std::invalid_argument("evolve: split side index out of range");
      in_a[idx] = 1;
    }
    for (std::size_t i = 0; i < ncomp; ++i) (in_a[i] ? side_a : side_b).push_back(i);
    if (side_a.empty() || side_b.empty())
      throw std::invalid_argument("evolve: split requires a proper bipartition");
  }
  if (objective.kind == Objective::Kind::shorten && objective.target >= ncomp)
    throw std::invalid_argument("evolve: shorten target out of range");

  auto initial = thickness::reach(link);
  if (initial.reach < T * (1.0 - config.tol))
    throw std::runtime_error("evolve: initial link is not thick");

  const bool monitored = ncomp >= 2 && config.alpha < ncomp && config.beta < ncomp &&
                         config.alpha != config.beta;

  // Working state: raw vertex arrays plus the current curves for parameter
  // queries inside the pair scan.
  std::vector<std::vector<Vec3>> pts;
  std::vector<ClosedCurve> shapes;
  for (const ClosedCurve& c : link.components) {
    pts.push_back(c.vertices());
    shapes.push_back(c);
  }
  std::vector<double> initial_lengths;
  std::vector<std::vector<double>> rest;  // edge rest lengths per component
  for (const ClosedCurve& c : link.components) {
    initial_lengths.push_back(c.length());
    std::vector<double> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) r[i] = c.edge_length(i);
    rest.push_back(std::move(r));
  }

  IsotopyTrace trace;
  trace.config = config;
  trace.objective = objective;
  trace.thickness = T;
  trace.final_status = "completed";

  std::mt19937_64 rng(config.seed);
  // Same-component pairs within one tube circumference of arc are local
  // curvature structure, not contacts; the exact reach gate still rejects
  // any genuine violation the projection leaves unrepaired.
  const double arc_skip = 2.0 * kPi * T;
  const double cutoff = 2.0 * T + 0.1 * T;

  auto current_link = [&]() {
    std::vector<ClosedCurve> comps;
    comps.reserve(ncomp);
    for (const auto& p : pts) comps.emplace_back(p);
    return ThickLink(std::move(comps), T);
  };

  double last_cross_distance = 0.0;
  auto objective_value = [&](const ThickLink& state) {
    switch (objective.kind) {
      case Objective::Kind::split:
        return last_cross_distance;
      case Objective::Kind::shorten:
        return state.components[objective.target].length();
      case Objective::Kind::jiggle:
        return config.step_size;
    }
    return 0.0;
  };

  std::vector<char> in_a_flags(ncomp, 0);
  for (std::size_t idx : side_a) in_a_flags[idx] = 1;

  // Least distance between the two sides, capped at the scan cutoff.
  auto cross_side_distance = [&](const ThickLink& state) {
    std::vector<std::vector<Vec3>> vp;
    std::vector<const ClosedCurve*> sp;
    for (const ClosedCurve& c : state.components) {
      vp.push_back(c.vertices());
      sp.push_back(&c);
    }
    double best = cutoff;
    for (const auto& pr : detail::close_pairs(vp, sp, cutoff, arc_skip)) {
      if (in_a_flags[pr.a.comp] == in_a_flags[pr.b.comp]) continue;
      const ClosedCurve& a = state.components[pr.a.comp];
      const ClosedCurve& b = state.components[pr.b.comp];
      auto cl = segment_segment_closest(a.vertex(pr.a.index), a.vertex(pr.a.index + 1),
                                        b.vertex(pr.b.index), b.vertex(pr.b.index + 1));
      best = std::min(best, cl.distance);
    }
    return best;
  };

  auto append_row = [&](long long step, double reach_val, const ThickLink& state,
                        const std::string& status) {
    TraceRow row;
    row.step = step;
    row.reach = reach_val;
    for (const ClosedCurve& c : state.components) row.lengths.push_back(c.length());
    if (objective.kind == Objective::Kind::split) last_cross_distance = cross_side_distance(state);
    row.objective_value = objective_value(state);
    row.status = status;
    if (monitored) {
      try {
        row.report = monitor(state, config.alpha, config.beta, double(step));
      } catch (const std::exception&) {
        row.report = LemmaReport{};
        row.report.t = double(step);
      }
    }
    trace.rows.push_back(std::move(row));
  };
  auto append_snapshot = [&](long long step, const ThickLink& state) {
    trace.snapshots.push_back({step, state.components});
  };

  {
    ThickLink state = current_link();
    append_row(0, initial.reach, state, "ok");
    append_snapshot(0, state);
    if (objective.kind == Objective::Kind::split &&
        topology::split_by_plane(state, side_a, side_b)) {
      trace.rows.back().status = "separated";
      trace.final_status = "separated";
      return trace;
    }
  }

  for (long long step = 1; step <= steps; ++step) {
    // Random fields are drawn once per step so retries at smaller scale
    // reuse the same direction and the stream position is step-determined.
    std::vector<std::vector<Vec3>> field(ncomp);
    const bool jitter = objective.kind == Objective::Kind::split;
    if (jitter || objective.kind == Objective::Kind::jiggle)
      for (std::size_t c = 0; c < ncomp; ++c) {
        field[c].resize(pts[c].size());
        for (Vec3& v : field[c]) v = detail::unit_vector(rng);
        // Smooth the field along the curve so agitation bends at a scale
        // of several edges instead of spiking the discrete curvature.
        std::size_t n = field[c].size();
        for (int pass = 0; pass < 6; ++pass) {
          std::vector<Vec3> sm(n);
          for (std::size_t i = 0; i < n; ++i)
            sm[i] = 0.25 * field[c][(i + n - 1) % n] + 0.5 * field[c][i] +
                    0.25 * field[c][(i + 1) % n];
          field[c] = std::move(sm);
        }
        for (Vec3& v : field[c]) {
          double nn = norm(v);
          if (nn > 1e-12) v = (1.0 / nn) * v;
        }
      }

    bool accepted = false;
    bool was_separated = false;
    double accepted_reach = 0.0;
    std::vector<std::vector<Vec3>> cand;
    auto gedt_t0 = std::chrono::steady_clock::now();
    auto gedt = [&](const char* tag) {
      if (!getenv("GEDT")) return;
      auto now = std::chrono::steady_clock::now();
      fprintf(stderr, " %s=%.0fus", tag,
              std::chrono::duration<double, std::micro>(now - gedt_t0).count());
      gedt_t0 = now;
    };
    for (int attempt = 0; attempt < 9 && !accepted; ++attempt) {
      double h = config.step_size * std::ldexp(1.0, -attempt);
      cand = pts;

      switch (objective.kind) {
        case Objective::Kind::split: {
          std::vector<char> in_a(ncomp, 0);
          for (std::size_t idx : side_a) in_a[idx] = 1;
          for (std::size_t c = 0; c < ncomp; ++c) {
            Vec3 push{in_a[c] ? -h : h, 0.0, 0.0};
            std::size_t n = cand[c].size();
            for (std::size_t i = 0; i < n; ++i) {
              Vec3 lap = 0.5 * (cand[c][(i + n - 1) % n] + cand[c][(i + 1) % n]) - cand[c][i];
              cand[c][i] = cand[c][i] + push + detail::cap_norm(lap, 0.25 * h) +
                           (0.05 * h) * field[c][i];
            }
          }
          break;
        }
        case Objective::Kind::shorten: {
          std::size_t c = objective.target;
          std::size_t n = cand[c].size();
          std::vector<Vec3> moved(n);
          for (std::size_t i = 0; i < n; ++i) {
            Vec3 lap = 0.5 * (cand[c][(i + n - 1) % n] + cand[c][(i + 1) % n]) - cand[c][i];
            moved[i] = cand[c][i] + detail::cap_norm(0.45 * lap, h);
          }
          cand[c] = std::move(moved);
          break;
        }
        case Objective::Kind::jiggle: {
          for (std::size_t c = 0; c < ncomp; ++c) {
            std::size_t n = cand[c].size();
            for (std::size_t i = 0; i < n; ++i) {
              Vec3 lap = 0.5 * (cand[c][(i + n - 1) % n] + cand[c][(i + 1) % n]) - cand[c][i];
              cand[c][i] = cand[c][i] + h * field[c][i] + detail::cap_norm(lap, 0.25 * h);
            }
          }
          break;
        }
      }

      // The shortening target is exempt from length restoration: its rest
      // lengths follow the objective move instead of the initial state.
      if (objective.kind == Objective::Kind::shorten) {
        std::size_t c = objective.target;
        std::size_t n = cand[c].size();
        for (std::size_t i = 0; i < n; ++i)
          rest[c][i] = dist(cand[c][i], cand[c][(i + 1) % n]);
      }

      auto stage_move = [&](const char* tag) {
        if (!getenv("GED3")) return;
        double mm = 0.0;
        for (std::size_t c = 0; c < ncomp; ++c)
          for (std::size_t i = 0; i < pts[c].size(); ++i)
            mm = std::max(mm, dist(cand[c][i], pts[c][i]));
        fprintf(stderr, "    %s max_move %.4f\n", tag, mm);
      };
      stage_move("after-move");
      gedt("move");
      auto pairs = detail::close_pairs(
          cand,
          [&] {
            std::vector<const ClosedCurve*> s;
            for (const ClosedCurve& sc : shapes) s.push_back(&sc);
            return s;
          }(),
          cutoff, arc_skip);

      // Maintenance triggers sit above the acceptance floor (tol slack), so
      // contacts and bends are herded back into the interior instead of
      // resting exactly on the boundary where any fluctuation rejects the
      // step. Pair pushes are under-relaxed: a structurally pinched contact
      // that cannot reach the target must not escalate against the edge
      // constraints sweep after sweep.
      gedt("pairs");
      const double pair_trigger = 2.0 * T * 0.995;
      const double pair_target = 2.0 * T * 0.9975;
      const double pair_relax = 0.35;
      const double radius_trigger = T * 0.995;
      const double radius_target = T;  // hysteresis: the edge pullback must not sink it back under the trigger
      std::vector<std::vector<Vec3>> pair_corr(ncomp);
      std::vector<std::vector<double>> pair_count(ncomp);
      std::vector<std::vector<Vec3>> sweep_prev(ncomp);
      auto run_sweeps = [&](int sweep_begin, int sweep_count) {
      for (int sweep = sweep_begin; sweep < sweep_begin + sweep_count; ++sweep) {
        for (std::size_t c = 0; c < ncomp; ++c) sweep_prev[c] = cand[c];
        for (std::size_t c = 0; c < ncomp; ++c) {
          std::size_t n = cand[c].size();
          for (std::size_t i = 0; i < n; ++i) {
            Vec3& a = cand[c][i];
            Vec3& b = cand[c][(i + 1) % n];
            Vec3 d = b - a;
            double len = norm(d);
            if (len < 1e-12) continue;
            Vec3 corr = (0.5 * (len - rest[c][i]) / len) * d;
            a = a + corr;
            b = b - corr;
          }
        }
        // Pair pushes are gathered and applied as per-vertex averages: along
        // near-parallel runs one vertex sits in several overlapping pairs,
        // and applying each push in sequence would stack them into a large
        // displacement every sweep. Scanning the whole candidate list is the
        // costly phase, and a spring acting every third sweep holds contacts
        // just as well once the initial violations are resolved.
        const bool push_sweep = sweep < 10 || sweep % 3 == 0;
        for (std::size_t c = 0; c < ncomp; ++c) {
          pair_corr[c].assign(cand[c].size(), Vec3{0.0, 0.0, 0.0});
          pair_count[c].assign(cand[c].size(), 0.0);
        }
        bool any_push = false;
        if (push_sweep) for (const auto& pr : pairs) {
          std::size_t na = cand[pr.a.comp].size(), nb = cand[pr.b.comp].size();
          std::size_t a1i = (pr.a.index + 1) % na, b1i = (pr.b.index + 1) % nb;
          auto cl = segment_segment_closest(cand[pr.a.comp][pr.a.index], cand[pr.a.comp][a1i],
                                            cand[pr.b.comp][pr.b.index], cand[pr.b.comp][b1i]);
          if (cl.distance >= pair_trigger || cl.distance < 1e-9) continue;
          Vec3 pa = cand[pr.a.comp][pr.a.index] +
                    cl.s * (cand[pr.a.comp][a1i] - cand[pr.a.comp][pr.a.index]);
          Vec3 pb = cand[pr.b.comp][pr.b.index] +
                    cl.t * (cand[pr.b.comp][b1i] - cand[pr.b.comp][pr.b.index]);
          Vec3 nrm = (1.0 / cl.distance) * (pa - pb);
          double push = pair_relax * 0.5 * (pair_target - cl.distance);
          any_push = true;
          pair_corr[pr.a.comp][pr.a.index] = pair_corr[pr.a.comp][pr.a.index] +
                                             ((1.0 - cl.s) * push) * nrm;
          pair_count[pr.a.comp][pr.a.index] += 1.0 - cl.s;
          pair_corr[pr.a.comp][a1i] = pair_corr[pr.a.comp][a1i] + (cl.s * push) * nrm;
          pair_count[pr.a.comp][a1i] += cl.s;
          pair_corr[pr.b.comp][pr.b.index] = pair_corr[pr.b.comp][pr.b.index] -
                                             ((1.0 - cl.t) * push) * nrm;
          pair_count[pr.b.comp][pr.b.index] += 1.0 - cl.t;
          pair_corr[pr.b.comp][b1i] = pair_corr[pr.b.comp][b1i] - (cl.t * push) * nrm;
          pair_count[pr.b.comp][b1i] += cl.t;
        }
        if (any_push)
          for (std::size_t c = 0; c < ncomp; ++c)
            for (std::size_t i = 0; i < cand[c].size(); ++i)
              if (pair_count[c][i] > 1.0)
                cand[c][i] = cand[c][i] + (1.0 / pair_count[c][i]) * pair_corr[c][i];
              else if (pair_count[c][i] > 0.0)
                cand[c][i] = cand[c][i] + pair_corr[c][i];
        // Straightening moves a vertex the least distance that lifts its
        // circumradius back over the trigger; anything more starts a fight
        // with the edge restoration that never converges.
        for (std::size_t c = 0; c < ncomp; ++c) {
          std::size_t n = cand[c].size();
          for (std::size_t i = 0; i < n; ++i) {
            Vec3& prev = cand[c][(i + n - 1) % n];
            Vec3& mid = cand[c][i];
            Vec3& next = cand[c][(i + 1) % n];
            if (circumradius(prev, mid, next) >= radius_trigger) continue;
            Vec3 toward = 0.5 * (prev + next) - mid;
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 10; ++it) {
              double t = 0.5 * (lo + hi);
              if (circumradius(prev, mid + t * toward, next) < radius_target)
                lo = t;
              else
                hi = t;
            }
            mid = mid + hi * toward;
          }
        }
        // The projection is a contraction; once a sweep moves nothing, the
        // remaining budget buys nothing.
        double sweep_shift = 0.0;
        for (std::size_t c = 0; c < ncomp; ++c)
          for (std::size_t i = 0; i < cand[c].size(); ++i)
            sweep_shift = std::max(sweep_shift, dist(cand[c][i], sweep_prev[c][i]));
        if (sweep_shift < 1e-8) break;
      }
      };
      run_sweeps(0, config.sweeps);
      gedt("sweeps");

      stage_move("after-pbd");
      // The projection sweeps damp the length-changing mode too slowly, so
      // each preserved component gets its total length pinned back to the
      // initial value by Newton steps along the low-passed curvature field.
      // An effective field fixes the residual with displacements far below
      // the contact margins; the displacement clamp exists for states where
      // it is not, and a clamped-out deficit is left for the length gate.
      auto restore_lengths = [&] {
      for (std::size_t c = 0; c < ncomp; ++c) {
        if (objective.kind == Objective::Kind::shorten && c == objective.target) continue;
        std::size_t n = cand[c].size();
        for (int newton = 0; newton < 8; ++newton) {
          double len = 0.0;
          for (std::size_t i = 0; i < n; ++i) len += dist(cand[c][i], cand[c][(i + 1) % n]);
          double deficit = initial_lengths[c] - len;
          // Stop well inside the acceptance band; exact restoration buys
          // nothing and each extra iteration is displacement risk.
          if (std::abs(deficit) <= 0.2 * config.length_tol * initial_lengths[c]) break;
          std::vector<Vec3> dir(n);  // -Laplacian: outward where the curve bends
          for (std::size_t i = 0; i < n; ++i)
            dir[i] = cand[c][i] - 0.5 * (cand[c][(i + n - 1) % n] + cand[c][(i + 1) % n]);
          std::vector<Vec3> sm(n);
          for (int pass = 0; pass < 4; ++pass) {
            for (std::size_t i = 0; i < n; ++i)
              sm[i] = 0.25 * dir[(i + n - 1) % n] + 0.5 * dir[i] + 0.25 * dir[(i + 1) % n];
            dir.swap(sm);
          }
          double slope = 0.0, peak = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            Vec3 tin = cand[c][i] - cand[c][(i + n - 1) % n];
            Vec3 tout = cand[c][(i + 1) % n] - cand[c][i];
            double lin = norm(tin), lout = norm(tout);
            peak = std::max(peak, norm(dir[i]));
            if (lin < 1e-12 || lout < 1e-12) continue;
            slope += dot((1.0 / lin) * tin - (1.0 / lout) * tout, dir[i]);
          }
          if (getenv("GED2")) fprintf(stderr, "  c%zu newton%d deficit=%.3e slope=%.3e peak=%.3e\n", c, newton, deficit, slope, peak);
          if (slope < 1e-12 || peak < 1e-15) break;
          double mu = deficit / slope;
          mu = std::clamp(mu, -2e-3 / peak, 2e-3 / peak);
          for (std::size_t i = 0; i < n; ++i) cand[c][i] = cand[c][i] + mu * dir[i];
        }
      }
      };
      restore_lengths();
      // The restoration bends the curve after the last maintenance pass, so
      // a short cleanup round re-runs both; its residuals shrink each time.
      run_sweeps(config.sweeps, 10);
      restore_lengths();

      stage_move("after-restore");
      gedt("restore");
      // Acceptance: bounded motion, preserved lengths, exact reach.
      double max_move = 0.0;
      for (std::size_t c = 0; c < ncomp; ++c)
        for (std::size_t i = 0; i < pts[c].size(); ++i)
          max_move = std::max(max_move, dist(cand[c][i], pts[c][i]));
      if (max_move > config.displacement_bound) { if (getenv("GED")) fprintf(stderr, "s%lld a%d MOVE %.4f\n", step, attempt, max_move); continue; }

      bool lengths_ok = true;
      std::vector<double> new_lengths(ncomp);
      for (std::size_t c = 0; c < ncomp; ++c) {
        double len = 0.0;
        std::size_t n = cand[c].size();
        for (std::size_t i = 0; i < n; ++i) len += dist(cand[c][i], cand[c][(i + 1) % n]);
        new_lengths[c] = len;
        if (objective.kind == Objective::Kind::shorten && c == objective.target) {
          if (len > shapes[c].length() + 1e-9) lengths_ok = false;  // monotone decrease
        } else if (std::abs(len - initial_lengths[c]) > config.length_tol * initial_lengths[c]) {
          lengths_ok = false;
        }
      }
      if (!lengths_ok) { if (getenv("GED")) { fprintf(stderr, "s%lld a%d LEN", step, attempt); for (std::size_t c = 0; c < ncomp; ++c) fprintf(stderr, " %.2e", std::abs(new_lengths[c]-initial_lengths[c])/initial_lengths[c]); fprintf(stderr, "\n"); } continue; }

      try {
        std::vector<ClosedCurve> comps;
        comps.reserve(ncomp);
        for (const auto& p : cand) comps.emplace_back(p);
        ThickLink state(std::move(comps), T);
        gedt("mklink");
        auto rb = thickness::reach(state);
        gedt("reach");
        if (rb.reach < T * (1.0 - config.tol)) { if (getenv("GED")) fprintf(stderr, "s%lld a%d REACH %.5f local %.5f (c%zu v%zu) pair %.5f\n", step, attempt, rb.reach, rb.min_local_radius, rb.local.component, rb.local.vertex, rb.min_pair_half_distance); continue; }
        accepted = true;
        accepted_reach = rb.reach;
        pts = cand;
        shapes = state.components;
        if (objective.kind == Objective::Kind::split &&
            topology::split_by_plane(state, side_a, side_b))
          was_separated = true;
        append_row(step, accepted_reach, state, was_separated ? "separated" : "ok");
        gedt("row");
        if (getenv("GEDT")) fprintf(stderr, " [s%lld]\n", step);
        if (was_separated || step % config.snapshot_every == 0 || step == steps)
          append_snapshot(step, state);
      } catch (const std::invalid_argument& e) {
        if (getenv("GED")) fprintf(stderr, "s%lld a%d DEGEN %s\n", step, attempt, e.what());
        continue;  // degenerate candidate polygon; retry smaller
      }
    }

    if (!accepted) {
      ThickLink state = current_link();
      auto rb = thickness::reach(state);
      append_row(step, rb.reach, state, "stuck");
      append_snapshot(step, state);
      trace.final_status = "stuck";
      return trace;
    }
    if (was_separated) {
      trace.final_status = "separated";
      return trace;
    }
  }
  return trace;
}

/// Certificate over the trace window where all five conditions hold: the
/// arc-length, apex-margin, and quarter-distance bounds persist and the
/// linking numbers never change.
struct CertificateReport {
  bool applicable = false;     // false when no row satisfies all conditions
  bool holds = false;
  long long first_violation = -1;
  std::string detail;
};

inline CertificateReport certify_trace(const IsotopyTrace& trace, double tol = 1e-3) {
  CertificateReport out;
  const double root3 = std::sqrt(3.0);
  long long lk13 = 0, lk24 = 0;
  bool have_lk = false;
  for (const TraceRow& row : trace.rows) {
    if (!row.report.all_conditions()) continue;
    if (!out.applicable) {
      out.applicable = true;
      out.holds = true;
      out.detail = "ok";
    }
    const LemmaReport& rep = row.report;
    std::string reason;
    if (rep.min_arc_len < 8.8)
      reason = "weaving arc shorter than 8.8";
    else if (rep.apex_margin < root3 / 2.0 - tol)
      reason = "apex margin below sqrt(3)/2";
    else if (rep.gamma13_distance < root3 - tol)
      reason = "opposite quarters closer than sqrt(3)";
    else if (have_lk && (rep.lk13 != lk13 || rep.lk24 != lk24))
      reason = "linking numbers changed";
    if (!have_lk) {
      lk13 = rep.lk13;
      lk24 = rep.lk24;
      have_lk = true;
    }
    if (!reason.empty() && out.holds) {
      out.holds = false;
      out.first_violation = row.step;
      out.detail = reason;
    }
  }
  if (!out.applicable) out.detail = "not applicable";
  return out;
}

/// Writes the trace as CSV, one row per accepted step.
inline std::string trace_csv(const IsotopyTrace& trace) {
  std::ostringstream out;
  out << "step,reach,len_alpha,len_beta,theta,min_arc_len,lk13,lk24,"
         "cond1,cond2,cond3,cond4,cond5,objective_value,status\n";
  std::size_t ai = trace.config.alpha, bi = trace.config.beta;
  for (const TraceRow& row : trace.rows) {
    double la = ai < row.lengths.size() ? row.lengths[ai] : row.lengths.front();
    double lb = bi < row.lengths.size() ? row.lengths[bi] : 0.0;
    out << row.step << ',' << io::format_double(row.reach) << ',' << io::format_double(la) << ','
        << io::format_double(lb) << ',' << io::format_double(row.report.theta) << ','
        << io::format_double(row.report.min_arc_len) << ',' << row.report.lk13 << ','
        << row.report.lk24 << ',' << int(row.report.condition1) << ','
        << int(row.report.condition2) << ',' << int(row.report.condition3) << ','
        << int(row.report.condition4) << ',' << int(row.report.condition5) << ','
        << io::format_double(row.objective_value) << ',' << row.status << '\n';
  }
  return out.str();
}

inline void write_trace_csv(const IsotopyTrace& trace, const std::filesystem::path& path) {
  io::atomic_write(path, trace_csv(trace));
}

}  // namespace gordian::isotopy
