#pragma once
// Thick links (curves plus a tube radius) and their JSON serialization.
//
// File format "gordian-link/1":
//   { "version": "gordian-link/1", "thickness": r,
//     "components": [ { "closed": true, "vertices": [[x,y,z], ...] }, ... ] }
// Numbers are written with %.17g so parsing reproduces coordinates bitwise.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gordian/curve.hpp"

namespace gordian {

struct ThickLink {
  std::vector<ClosedCurve> components;
  double thickness = 1.0;

  ThickLink(std::vector<ClosedCurve> comps, double thick = 1.0)
      : components(std::move(comps)), thickness(thick) {
    if (components.empty()) throw std::invalid_argument("ThickLink: no components");
    if (!(thickness > 0.0) || !std::isfinite(thickness))
      throw std::invalid_argument("ThickLink: thickness must be positive");
  }

  /// Pairwise component disjointness (as point sets). O(total edges^2);
  /// called by file loading and verification, not on every construction.
  bool components_disjoint(double clearance = 1e-9) const {
    for (std::size_t a = 0; a + 1 < components.size(); ++a)
      for (std::size_t b = a + 1; b < components.size(); ++b) {
        const ClosedCurve& ca = components[a];
        const ClosedCurve& cb = components[b];
        for (std::size_t i = 0; i < ca.size(); ++i)
          for (std::size_t j = 0; j < cb.size(); ++j) {
            auto close = segment_segment_closest(ca.vertex(i), ca.vertex(i + 1),
                                                 cb.vertex(j), cb.vertex(j + 1));
            if (close.distance <= clearance) return false;
          }
      }
    return true;
  }
};

/// Four arc-length marks per flat component, in cyclic order along the
/// weaving component. Sidecar format "gordian-marks/1".
struct LinkMarks {
  std::size_t alpha = 0;
  std::vector<std::size_t> betas;
  std::vector<std::array<double, 4>> marks;  // one quadruple per beta
};

namespace io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes content to path through a temp file and a rename, so readers never
/// observe a partially written file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace io

inline std::string serialize_link(const ThickLink& link) {
  std::ostringstream out;
  out << "{\n  \"version\": \"gordian-link/1\",\n  \"thickness\": "
      << io::format_double(link.thickness) << ",\n  \"components\": [\n";
  for (std::size_t c = 0; c < link.components.size(); ++c) {
    out << "    {\"closed\": true, \"vertices\": [\n";
    const auto& vs = link.components[c].vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      out << "      [" << io::format_double(vs[i].x) << ", " << io::format_double(vs[i].y)
          << ", " << io::format_double(vs[i].z) << "]";
      out << (i + 1 < vs.size() ? ",\n" : "\n");
    }
    out << "    ]}";
    out << (c + 1 < link.components.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

inline ThickLink parse_link(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);  // throws parse_error on bad input
  if (!j.is_object() || j.value("version", "") != std::string("gordian-link/1"))
    throw std::invalid_argument("parse_link: missing or unknown version");
  double thickness = j.at("thickness").get<double>();
  std::vector<ClosedCurve> comps;
  for (const auto& jc : j.at("components")) {
    if (!jc.value("closed", false))
      throw std::invalid_argument("parse_link: only closed components supported");
    std::vector<Vec3> verts;
    for (const auto& jv : jc.at("vertices")) {
      if (!jv.is_array() || jv.size() != 3)
        throw std::invalid_argument("parse_link: vertex is not a 3-array");
      verts.push_back({jv[0].get<double>(), jv[1].get<double>(), jv[2].get<double>()});
    }
    comps.emplace_back(std::move(verts));
  }
  return ThickLink(std::move(comps), thickness);
}

inline void save_link(const ThickLink& link, const std::filesystem::path& path) {
  io::atomic_write(path, serialize_link(link));
}

inline ThickLink load_link(const std::filesystem::path& path) {
  return parse_link(io::read_file(path));
}

inline std::string serialize_marks(const LinkMarks& m) {
  std::ostringstream out;
  out << "{\n  \"version\": \"gordian-marks/1\",\n  \"alpha\": " << m.alpha
      << ",\n  \"betas\": [";
  for (std::size_t i = 0; i < m.betas.size(); ++i)
    out << m.betas[i] << (i + 1 < m.betas.size() ? ", " : "");
  out << "],\n  \"marks\": [\n";
  for (std::size_t i = 0; i < m.marks.size(); ++i) {
    out << "    [";
    for (int k = 0; k < 4; ++k)
      out << io::format_double(m.marks[i][k]) << (k < 3 ? ", " : "");
    out << "]" << (i + 1 < m.marks.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

inline LinkMarks parse_marks(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object() || j.value("version", "") != std::string("gordian-marks/1"))
    throw std::invalid_argument("parse_marks: missing or unknown version");
  LinkMarks m;
  m.alpha = j.at("alpha").get<std::size_t>();
  for (const auto& b : j.at("betas")) m.betas.push_back(b.get<std::size_t>());
  for (const auto& q : j.at("marks")) {
    if (!q.is_array() || q.size() != 4)
      throw std::invalid_argument("parse_marks: mark entry is not a 4-array");
    m.marks.push_back({q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()});
  }
  return m;
}

inline void save_marks(const LinkMarks& m, const std::filesystem::path& path) {
  io::atomic_write(path, serialize_marks(m));
}

inline LinkMarks load_marks(const std::filesystem::path& path) {
  return parse_marks(io::read_file(path));
}

/// Conventional sidecar path: FILE.json -> FILE.marks.json.
inline std::filesystem::path marks_path_for(const std::filesystem::path& link_path) {
  std::filesystem::path p = link_path;
  p.replace_extension();
  p += ".marks.json";
  return p;
}

}  // namespace gordian
