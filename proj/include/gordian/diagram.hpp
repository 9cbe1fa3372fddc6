#pragma once

// Self-crossing diagrams of a single closed curve under generic projection,
// and a greedy removal-only simplification that can certify unknottedness.
// The reducer never claims a curve is knotted: a nonempty residue is merely
// inconclusive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gordian/topology.hpp"

namespace gordian::topology {

/// One passage of the curve through a crossing of its own projection.
struct Passage {
  std::size_t crossing = 0;
  bool over = false;
  double param = 0.0;  // arc-length position along the curve
};

/// Projection diagram: passages in curve order (two per crossing).
struct Diagram {
  std::vector<Passage> word;
  std::size_t crossing_count = 0;
};

namespace detail {

inline std::optional<Diagram> try_project_diagram(const ClosedCurve& c, Vec3 d) {
  Vec3 u, v;
  projection_basis(d, u, v);
  double scale = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) scale = std::max(scale, norm(c.vertex(i)));
  try {
    auto p = project_vertices(c, u, v, d);
    Diagram dg;
    std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t i2 = (i + 1) % n;
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        std::size_t j2 = (j + 1) % n;
        auto cr = segment_cross(p.x[i], p.y[i], p.x[i2] - p.x[i], p.y[i2] - p.y[i],
                                p.x[j], p.y[j], p.x[j2] - p.x[j], p.y[j2] - p.y[j],
                                p.z[i], p.z[i2], p.z[j], p.z[j2], scale);
        if (!cr) continue;
        bool i_over = cr->za > cr->zb;
        dg.word.push_back({dg.crossing_count, i_over,
                           c.vertex_param(i) + cr->t * c.edge_length(i)});
        dg.word.push_back({dg.crossing_count, !i_over,
                           c.vertex_param(j) + cr->u * c.edge_length(j)});
        ++dg.crossing_count;
      }
    }
    std::sort(dg.word.begin(), dg.word.end(),
              [](const Passage& a, const Passage& b) { return a.param < b.param; });
    return dg;
  } catch (const NonGeneric&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Diagram of the curve projected along `direction`, with the direction
/// advanced through the golden-angle schedule until generic.
inline Diagram project_diagram(const ClosedCurve& c, Vec3 direction) {
  double n0 = norm(direction);
  if (!(n0 > 1e-12)) throw std::invalid_argument("project_diagram: zero direction");
  Vec3 d0 = (1.0 / n0) * direction;
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto dg = detail::try_project_diagram(c, detail::schedule_direction(d0, attempt));
    if (dg) return *dg;
  }
  throw std::runtime_error("project_diagram: no generic projection after 100 attempts");
}

/// Greedy removal-only simplification of a crossing word. A kink (the two
/// passages of one crossing cyclically adjacent) is removed outright; a
/// bigon (two crossings adjacent twice, one strand over at both and the
/// other under at both) removes both. Returns true iff the word empties.
inline bool reduce_to_trivial(std::vector<Passage> word) {
  auto erase_crossing = [&word](std::size_t id) {
    word.erase(std::remove_if(word.begin(), word.end(),
                              [id](const Passage& p) { return p.crossing == id; }),
               word.end());
  };
  bool changed = true;
  while (changed && !word.empty()) {
    changed = false;
    std::size_t n = word.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (word[k].crossing == word[(k + 1) % n].crossing) {
        erase_crossing(word[k].crossing);
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (std::size_t k = 0; k < n && !changed; ++k) {
      std::size_t k2 = (k + 1) % n;
      std::size_t c1 = word[k].crossing, c2 = word[k2].crossing;
      if (word[k].over != word[k2].over) continue;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == k) continue;
        std::size_t l2 = (l + 1) % n;
        std::size_t d1 = word[l].crossing, d2 = word[l2].crossing;
        if (!((d1 == c1 && d2 == c2) || (d1 == c2 && d2 == c1))) continue;
        if (word[l].over != word[l2].over) continue;
        if (word[l].over == word[k].over) continue;
        erase_crossing(c1);
        erase_crossing(c2);
        changed = true;
        break;
      }
    }
  }
  return word.empty();
}

/// Certifies a curve unknotted by finding a view whose diagram reduces to
/// zero crossings. Views are Fibonacci-sphere directions, each with a short
/// genericity-perturbation budget. False means "not certified", never
/// "knotted".
inline bool unknot_by_reduction(const ClosedCurve& c, int views = 24) {
  for (int view = 0; view < views; ++view) {
    double zz = 1.0 - 2.0 * (double(view) + 0.5) / double(views);
    double rr = std::sqrt(std::max(0.0, 1.0 - zz * zz));
    double ph = kGoldenAngle * double(view);
    Vec3 base{rr * std::cos(ph), rr * std::sin(ph), zz};
    for (int attempt = 0; attempt < 20; ++attempt) {
      auto dg = detail::try_project_diagram(c, detail::schedule_direction(base, attempt));
      if (!dg) continue;
      if (reduce_to_trivial(dg->word)) return true;
      break;
    }
  }
  return false;
}

}  // namespace gordian::topology
