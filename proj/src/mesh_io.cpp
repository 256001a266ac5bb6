// Copyright 2026 The hat-afem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hatafem/mesh_io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hatafem/error.hpp"

namespace hatafem::io {

namespace {

// Next line that is neither empty nor a '#' comment.
bool next_record(std::istream& is, std::istringstream& line) {
  std::string s;
  while (std::getline(is, s)) {
    const auto pos = s.find_first_not_of(" \t\r");
    if (pos == std::string::npos || s[pos] == '#') continue;
    line.clear();
    line.str(s);
    return true;
  }
  return false;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(fmt::format("cannot write {}", path.string()));
  return os;
}

BoundaryTag tag_from_position(const PolygonDomain& domain, const Point2& p) {
  const double tol = 1e-10 * domain.bbox().extent();
  if (auto c = domain.corner_at(p, tol)) return BoundaryTag::at_corner(*c);
  if (auto s = domain.segment_at(p, tol)) return BoundaryTag::on_segment(*s);
  return BoundaryTag::interior();
}

}  // namespace

void write_node(std::ostream& os, const Mesh& mesh) {
  fmt::print(os, "{} 2 0 1\n", mesh.vertex_count());
  for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
    const auto& p = mesh.vertex(v);
    fmt::print(os, "{} {:.17g} {:.17g} {}\n", v + 1, p.x, p.y, encode_boundary_tag(mesh.tag(v)));
  }
}

void write_ele(std::ostream& os, const Mesh& mesh) {
  fmt::print(os, "{} 3 1\n", mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto& tri = mesh.triangle(t);
    fmt::print(os, "{} {} {} {} {}\n", t + 1, tri[0] + 1, tri[1] + 1, tri[2] + 1,
               mesh.refinement_edge(t));
  }
}

void write_triangle_files(const std::filesystem::path& stem, const Mesh& mesh) {
  auto node = open_for_write(std::filesystem::path(stem).concat(".node"));
  write_node(node, mesh);
  auto ele = open_for_write(std::filesystem::path(stem).concat(".ele"));
  write_ele(ele, mesh);
}

Mesh read_triangle_files(std::istream& node, std::istream& ele,
                         std::shared_ptr<const PolygonDomain> domain) {
  std::istringstream line;
  if (!next_record(node, line)) throw Error("empty .node file");
  std::size_t nv = 0;
  int dim = 0, nattr = 0, nmark = 0;
  line >> nv >> dim >> nattr >> nmark;
  if (!line || dim != 2) throw Error("unsupported .node header");

  std::vector<Point2> vertices(nv);
  std::vector<BoundaryTag> tags(nv);
  int base = -1;
  for (std::size_t i = 0; i < nv; ++i) {
    if (!next_record(node, line)) throw Error("truncated .node file");
    int index = 0;
    Point2 p;
    line >> index >> p.x >> p.y;
    for (int a = 0; a < nattr; ++a) {
      double skip = 0.0;
      line >> skip;
    }
    int flag = 0;
    if (nmark > 0) line >> flag;
    if (!line) throw Error(fmt::format("malformed .node record {}", i));
    if (base < 0) base = index;
    const auto slot = static_cast<std::size_t>(index - base);
    if (slot >= nv) throw Error(fmt::format("vertex index {} out of range", index));
    vertices[slot] = p;
    tags[slot] = nmark > 0 ? decode_boundary_tag(flag) : tag_from_position(*domain, p);
  }

  if (!next_record(ele, line)) throw Error("empty .ele file");
  std::size_t nt = 0;
  int per = 0, eattr = 0;
  line >> nt >> per >> eattr;
  if (!line || per != 3) throw Error("unsupported .ele header");
  std::vector<Triangle> triangles(nt);
  std::vector<std::uint8_t> refine(nt, 0);
  bool have_refine = eattr > 0;
  for (std::size_t i = 0; i < nt; ++i) {
    if (!next_record(ele, line)) throw Error("truncated .ele file");
    int index = 0;
    Triangle tri{};
    line >> index >> tri[0] >> tri[1] >> tri[2];
    for (int& v : tri) v -= base;
    double r = 0.0;
    if (have_refine) line >> r;
    if (!line) throw Error(fmt::format("malformed .ele record {}", i));
    triangles[i] = tri;
    refine[i] = static_cast<std::uint8_t>(r);
  }
  if (!have_refine) return Mesh(std::move(domain), std::move(vertices), std::move(triangles), std::move(tags));
  return Mesh(std::move(domain), std::move(vertices), std::move(triangles), std::move(tags),
              std::move(refine));
}

Mesh read_triangle_files(const std::filesystem::path& stem,
                         std::shared_ptr<const PolygonDomain> domain) {
  std::ifstream node(std::filesystem::path(stem).concat(".node"));
  std::ifstream ele(std::filesystem::path(stem).concat(".ele"));
  if (!node || !ele) throw Error(fmt::format("cannot open {}.node/.ele", stem.string()));
  return read_triangle_files(node, ele, std::move(domain));
}

void write_vtk(std::ostream& os, const Mesh& mesh, std::span<const VtkField> point_data,
               std::span<const VtkField> cell_data) {
  const auto nv = mesh.vertex_count();
  const auto nt = mesh.triangle_count();
  fmt::print(os, "# vtk DataFile Version 3.0\nhat-afem mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  fmt::print(os, "POINTS {} double\n", nv);
  for (const auto& p : mesh.vertices()) fmt::print(os, "{:.17g} {:.17g} 0\n", p.x, p.y);
  fmt::print(os, "CELLS {} {}\n", nt, 4 * nt);
  for (const auto& t : mesh.triangles()) fmt::print(os, "3 {} {} {}\n", t[0], t[1], t[2]);
  fmt::print(os, "CELL_TYPES {}\n", nt);
  for (std::size_t t = 0; t < nt; ++t) os << "5\n";

  const auto emit = [&os](const VtkField& f, std::size_t expected) {
    if (f.values.size() != expected)
      throw Error(fmt::format("field '{}' has {} values, expected {}", f.name, f.values.size(), expected));
    fmt::print(os, "SCALARS {} double 1\nLOOKUP_TABLE default\n", f.name);
    for (double v : f.values) fmt::print(os, "{:.17g}\n", v);
  };
  if (!point_data.empty()) {
    fmt::print(os, "POINT_DATA {}\n", nv);
    for (const auto& f : point_data) emit(f, nv);
  }
  if (!cell_data.empty()) {
    fmt::print(os, "CELL_DATA {}\n", nt);
    for (const auto& f : cell_data) emit(f, nt);
  }
}

void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               std::span<const VtkField> point_data, std::span<const VtkField> cell_data) {
  auto os = open_for_write(path);
  write_vtk(os, mesh, point_data, cell_data);
}

Mesh read_vtk(std::istream& is, std::shared_ptr<const PolygonDomain> domain) {
  std::string word;
  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;
  while (is >> word) {
    if (word == "POINTS") {
      std::size_t n = 0;
      std::string type;
      is >> n >> type;
      vertices.resize(n);
      for (auto& p : vertices) {
        double z = 0.0;
        is >> p.x >> p.y >> z;
      }
    } else if (word == "CELLS") {
      std::size_t n = 0, total = 0;
      is >> n >> total;
      triangles.resize(n);
      for (auto& t : triangles) {
        int count = 0;
        is >> count;
        if (count != 3) throw Error("only triangle cells are supported");
        is >> t[0] >> t[1] >> t[2];
      }
    } else if (word == "CELL_TYPES") {
      break;
    }
  }
  if (!is || vertices.empty() || triangles.empty()) throw Error("malformed VTK file");
  std::vector<BoundaryTag> tags;
  tags.reserve(vertices.size());
  for (const auto& p : vertices) tags.push_back(tag_from_position(*domain, p));
  return Mesh(std::move(domain), std::move(vertices), std::move(triangles), std::move(tags));
}

}  // namespace hatafem::io
