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

#include "hatafem/mesh.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "hatafem/error.hpp"
#include "hatafem/predicates.hpp"

namespace hatafem {

namespace {

double loop_signed_area(const std::vector<Point2>& loop) {
  double a = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto& p = loop[i];
    const auto& q = loop[(i + 1) % loop.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Vec2 d = b - a;
  const double len2 = norm2(d);
  double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * d);
}

bool within_box(const Point2& a, const Point2& b, const Point2& p) {
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
         p.y <= std::max(a.y, b.y);
}

// Closed segments [a, b] and [c, d] share at least one point.
bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  using predicates::orient2d;
  const int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  const int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return (o1 == 0 && within_box(a, b, c)) || (o2 == 0 && within_box(a, b, d)) ||
         (o3 == 0 && within_box(c, d, a)) || (o4 == 0 && within_box(c, d, b));
}

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (std::uint64_t{lo} << 32) | hi;
}

}  // namespace

// ---------------------------------------------------------------------------
// PolygonDomain

PolygonDomain::PolygonDomain(std::vector<Point2> outer, std::vector<std::vector<Point2>> holes) {
  loops_.push_back(std::move(outer));
  for (auto& h : holes) loops_.push_back(std::move(h));

  for (std::size_t l = 0; l < loops_.size(); ++l) {
    const auto& loop = loops_[l];
    if (loop.size() < 3) throw GeometryError(fmt::format("loop {} has fewer than 3 points", l));
    const double a = loop_signed_area(loop);
    if (l == 0 && !(a > 0.0)) throw GeometryError("outer loop must be counter-clockwise");
    if (l > 0 && !(a < 0.0)) throw GeometryError(fmt::format("hole {} must be clockwise", l - 1));
    loop_start_.push_back(static_cast<int>(corners_.size()));
    for (const auto& p : loop) {
      corners_.push_back(p);
      loop_of_corner_.push_back(static_cast<int>(l));
    }
  }

  // Simplicity: non-adjacent segments must not touch.
  const int n = static_cast<int>(corners_.size());
  for (int s = 0; s < n; ++s) {
    const auto [a, b] = segment(s);
    for (int t = s + 1; t < n; ++t) {
      const auto sc = segment_corners(s), tc = segment_corners(t);
      const bool adjacent = sc[1] == tc[0] || tc[1] == sc[0];
      const auto [c, d] = segment(t);
      if (adjacent) {
        // Adjacent segments may only share their common corner.
        if (predicates::orient2d(a, b, c) == 0 && predicates::orient2d(a, b, d) == 0) {
          const Vec2 u = b - a, v = d - c;
          if (dot(u, v) < 0.0)
            throw GeometryError(fmt::format("segments {} and {} fold back", s, t));
        }
        continue;
      }
      if (segments_intersect(a, b, c, d))
        throw GeometryError(fmt::format("segments {} and {} intersect", s, t));
    }
  }

  // Holes strictly inside the outer loop and outside each other.
  for (std::size_t l = 1; l < loops_.size(); ++l) {
    for (const auto& p : loops_[l]) {
      int crossings = 0;
      const auto& outer_loop = loops_[0];
      for (std::size_t i = 0; i < outer_loop.size(); ++i) {
        const auto& a = outer_loop[i];
        const auto& b = outer_loop[(i + 1) % outer_loop.size()];
        if ((a.y > p.y) != (b.y > p.y)) {
          const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
          if (x > p.x) ++crossings;
        }
      }
      if (crossings % 2 == 0) throw GeometryError(fmt::format("hole {} leaves the outer loop", l - 1));
    }
  }
}

PolygonDomain PolygonDomain::rectangle(double x0, double y0, double x1, double y1) {
  return PolygonDomain({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

PolygonDomain PolygonDomain::l_shape() {
  return PolygonDomain({{-1.0, -1.0}, {0.0, -1.0}, {0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {-1.0, 1.0}});
}

PolygonDomain::Segment PolygonDomain::segment(int s) const {
  const auto c = segment_corners(s);
  return {corner(c[0]), corner(c[1])};
}

std::array<int, 2> PolygonDomain::segment_corners(int s) const {
  const int l = loop_of_corner_[static_cast<std::size_t>(s)];
  const int start = loop_start_[static_cast<std::size_t>(l)];
  const int size = static_cast<int>(loops_[static_cast<std::size_t>(l)].size());
  const int next = start + (s - start + 1) % size;
  return {s, next};
}

int PolygonDomain::previous_segment(int s) const {
  const int l = loop_of_corner_[static_cast<std::size_t>(s)];
  const int start = loop_start_[static_cast<std::size_t>(l)];
  const int size = static_cast<int>(loops_[static_cast<std::size_t>(l)].size());
  return start + (s - start + size - 1) % size;
}

bool PolygonDomain::contains(const Point2& p) const {
  bool inside = false;
  for (const auto& loop : loops_) {
    for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
      const auto& a = loop[i];
      const auto& b = loop[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) inside = !inside;
      }
    }
  }
  return inside;
}

double PolygonDomain::distance_to_boundary(const Point2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < static_cast<int>(segment_count()); ++s) {
    const auto [a, b] = segment(s);
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return best;
}

std::optional<int> PolygonDomain::corner_at(const Point2& p, double tol) const {
  for (std::size_t c = 0; c < corners_.size(); ++c)
    if (distance(p, corners_[c]) <= tol) return static_cast<int>(c);
  return std::nullopt;
}

std::optional<int> PolygonDomain::segment_at(const Point2& p, double tol) const {
  for (int s = 0; s < static_cast<int>(segment_count()); ++s) {
    const auto [a, b] = segment(s);
    if (point_segment_distance(p, a, b) <= tol) return s;
  }
  return std::nullopt;
}

Point2 PolygonDomain::project(const Point2& p, int s) const {
  const auto [a, b] = segment(s);
  const Vec2 d = b - a;
  // Axis-aligned segments project exactly.
  if (d.x == 0.0) return {a.x, std::clamp(p.y, std::min(a.y, b.y), std::max(a.y, b.y))};
  if (d.y == 0.0) return {std::clamp(p.x, std::min(a.x, b.x), std::max(a.x, b.x)), a.y};
  const double t = std::clamp(dot(p - a, d) / norm2(d), 0.0, 1.0);
  return a + t * d;
}

double PolygonDomain::area() const {
  double a = 0.0;
  for (const auto& loop : loops_) a += loop_signed_area(loop);
  return a;
}

double PolygonDomain::perimeter() const {
  double len = 0.0;
  for (int s = 0; s < static_cast<int>(segment_count()); ++s) {
    const auto [a, b] = segment(s);
    len += distance(a, b);
  }
  return len;
}

BoundingBox PolygonDomain::bbox() const {
  BoundingBox box{corners_.front(), corners_.front()};
  for (const auto& p : corners_) box.expand(p);
  return box;
}

// ---------------------------------------------------------------------------
// Boundary tags

int encode_boundary_tag(const BoundaryTag& tag) {
  switch (tag.kind) {
    case BoundaryTag::Kind::interior:
      return 0;
    case BoundaryTag::Kind::segment:
      return tag.index + 1;
    case BoundaryTag::Kind::corner:
      return -(tag.index + 1);
  }
  return 0;
}

BoundaryTag decode_boundary_tag(int code) {
  if (code == 0) return BoundaryTag::interior();
  if (code > 0) return BoundaryTag::on_segment(code - 1);
  return BoundaryTag::at_corner(-code - 1);
}

// ---------------------------------------------------------------------------
// Mesh

Mesh::Mesh(std::shared_ptr<const PolygonDomain> domain, std::vector<Point2> vertices,
           std::vector<Triangle> triangles, std::vector<BoundaryTag> tags,
           std::vector<std::uint8_t> refinement_edge)
    : domain_(std::move(domain)),
      vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      tags_(std::move(tags)),
      refinement_edge_(std::move(refinement_edge)) {
  if (!domain_) throw GeometryError("mesh requires a domain");
  if (tags_.size() != vertices_.size())
    throw TopologyError("boundary tag count differs from vertex count");
  if (refinement_edge_.size() != triangles_.size())
    throw TopologyError("refinement edge count differs from triangle count");
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t])
      if (v < 0 || v >= nv) throw TopologyError(fmt::format("triangle {} has invalid vertex {}", t, v));
    if (refinement_edge_[t] > 2)
      throw TopologyError(fmt::format("triangle {} has invalid refinement edge", t));
  }
}

Mesh::Mesh(std::shared_ptr<const PolygonDomain> domain, std::vector<Point2> vertices,
           std::vector<Triangle> triangles, std::vector<BoundaryTag> tags)
    : Mesh(std::move(domain), vertices, triangles, std::move(tags),
           longest_edges(vertices, triangles)) {}

std::array<Point2, 3> Mesh::corners(int t) const {
  const auto& tri = triangle(t);
  return {vertex(tri[0]), vertex(tri[1]), vertex(tri[2])};
}

double Mesh::area(int t) const {
  const auto [a, b, c] = corners(t);
  return 0.5 * signed_area2(a, b, c);
}

Point2 Mesh::centroid(int t) const {
  const auto [a, b, c] = corners(t);
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

double Mesh::diameter(int t) const {
  const auto [a, b, c] = corners(t);
  return std::max({distance(a, b), distance(b, c), distance(c, a)});
}

std::vector<std::uint8_t> longest_edges(std::span<const Point2> vertices,
                                        std::span<const Triangle> triangles) {
  std::vector<std::uint8_t> out(triangles.size(), 0);
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    double best = -1.0;
    for (int i = 0; i < 3; ++i) {
      const auto& a = vertices[static_cast<std::size_t>(tri[(i + 1) % 3])];
      const auto& b = vertices[static_cast<std::size_t>(tri[(i + 2) % 3])];
      const double len = norm2(b - a);
      if (len > best) {
        best = len;
        out[t] = static_cast<std::uint8_t>(i);
      }
    }
  }
  return out;
}

void validate(const Mesh& mesh) {
  const auto& domain = mesh.domain();
  const double scale = std::max(domain.bbox().extent(), 1e-300);
  const double tol = 1e-9 * scale;

  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    if (predicates::orient2d(a, b, c) <= 0)
      throw DegenerateElementError(fmt::format("triangle {} is not counter-clockwise", t));
  }

  const EdgeTable edges(mesh);

  std::vector<char> used(mesh.vertex_count(), 0);
  for (const auto& tri : mesh.triangles())
    for (int v : tri) used[static_cast<std::size_t>(v)] = 1;
  for (std::size_t v = 0; v < used.size(); ++v)
    if (!used[v]) throw TopologyError(fmt::format("vertex {} belongs to no triangle", v));

  for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
    const auto& tag = mesh.tag(v);
    const auto& p = mesh.vertex(v);
    if (tag.kind == BoundaryTag::Kind::corner) {
      if (tag.index < 0 || tag.index >= static_cast<int>(domain.corner_count()) ||
          distance(p, domain.corner(tag.index)) > tol)
        throw TopologyError(fmt::format("vertex {} is tagged as a corner it does not sit on", v));
    } else if (tag.kind == BoundaryTag::Kind::segment) {
      if (tag.index < 0 || tag.index >= static_cast<int>(domain.segment_count()))
        throw TopologyError(fmt::format("vertex {} has invalid segment tag", v));
      const auto [a, b] = domain.segment(tag.index);
      if (point_segment_distance(p, a, b) > tol)
        throw TopologyError(fmt::format("vertex {} is off its boundary segment", v));
    }
  }

  std::vector<double> covered(domain.segment_count(), 0.0);
  for (const auto& e : edges.edges()) {
    if (!e.on_boundary()) continue;
    const auto& ta = mesh.tag(e.v0);
    const auto& tb = mesh.tag(e.v1);
    if (!ta.on_boundary() || !tb.on_boundary())
      throw TopologyError(fmt::format("boundary edge ({}, {}) has an interior vertex", e.v0, e.v1));
    const auto seg = domain.segment_at(e.midpoint, tol);
    if (!seg) throw TopologyError(fmt::format("boundary edge ({}, {}) is not on the domain boundary", e.v0, e.v1));
    const auto [a, b] = domain.segment(*seg);
    if (point_segment_distance(mesh.vertex(e.v0), a, b) > tol ||
        point_segment_distance(mesh.vertex(e.v1), a, b) > tol)
      throw TopologyError(fmt::format("boundary edge ({}, {}) crosses a corner", e.v0, e.v1));
    covered[static_cast<std::size_t>(*seg)] += e.length;
  }
  for (int s = 0; s < static_cast<int>(domain.segment_count()); ++s) {
    const auto [a, b] = domain.segment(s);
    if (std::abs(covered[static_cast<std::size_t>(s)] - distance(a, b)) > 1e-9 * scale)
      throw TopologyError(fmt::format("boundary segment {} is not covered by mesh edges", s));
  }
  for (int c = 0; c < static_cast<int>(domain.corner_count()); ++c) {
    bool found = false;
    for (int v = 0; v < static_cast<int>(mesh.vertex_count()) && !found; ++v)
      found = mesh.tag(v) == BoundaryTag::at_corner(c);
    if (!found) throw TopologyError(fmt::format("domain corner {} is not a mesh vertex", c));
  }

  const long long euler = static_cast<long long>(mesh.vertex_count()) -
                          static_cast<long long>(edges.size()) +
                          static_cast<long long>(mesh.triangle_count());
  if (euler != 1 - static_cast<long long>(domain.hole_count()))
    throw TopologyError(fmt::format("Euler characteristic {} does not match the domain", euler));
}

// ---------------------------------------------------------------------------
// EdgeTable

EdgeTable::EdgeTable(const Mesh& mesh) {
  const auto nt = mesh.triangle_count();
  tri_edges_.resize(nt);
  std::unordered_map<std::uint64_t, int> index;
  index.reserve(nt * 2);
  edges_.reserve(nt * 2);

  for (int t = 0; t < static_cast<int>(nt); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const auto [it, inserted] = index.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        Edge e;
        e.v0 = std::min(a, b);
        e.v1 = std::max(a, b);
        e.t0 = t;
        const Point2& p0 = mesh.vertex(e.v0);
        const Point2& p1 = mesh.vertex(e.v1);
        const Vec2 d = p1 - p0;
        e.length = norm(d);
        e.normal = Vec2{-d.y / e.length, d.x / e.length};
        e.midpoint = midpoint(p0, p1);
        edges_.push_back(e);
      } else {
        auto& e = edges_[static_cast<std::size_t>(it->second)];
        if (e.t1 >= 0)
          throw TopologyError(
              fmt::format("edge ({}, {}) is shared by more than two triangles", e.v0, e.v1));
        e.t1 = t;
      }
      tri_edges_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = it->second;
    }
  }
  interior_ = static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return !e.on_boundary(); }));
}

EdgeTable build_edge_table(const Mesh& mesh) { return EdgeTable(mesh); }

// ---------------------------------------------------------------------------
// VertexPatches

VertexPatches::VertexPatches(const Mesh& mesh) {
  offsets_.assign(mesh.vertex_count() + 1, 0);
  for (const auto& tri : mesh.triangles())
    for (int v : tri) ++offsets_[static_cast<std::size_t>(v) + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  tris_.resize(static_cast<std::size_t>(offsets_.back()));
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t)
    for (int v : mesh.triangle(t)) tris_[static_cast<std::size_t>(fill[static_cast<std::size_t>(v)]++)] = t;
}

// ---------------------------------------------------------------------------
// Quality

double triangle_quality(const Point2& a, const Point2& b, const Point2& c) {
  const double area = 0.5 * signed_area2(a, b, c);
  const double sum = norm2(b - a) + norm2(c - b) + norm2(a - c);
  if (!(area > 0.0) || predicates::orient2d(a, b, c) <= 0)
    throw DegenerateElementError("triangle has zero or negative area");
  return 4.0 * std::numbers::sqrt3 * area / sum;
}

std::vector<double> triangle_quality(const Mesh& mesh) {
  std::vector<double> q(mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(q.size()); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    q[static_cast<std::size_t>(t)] = triangle_quality(a, b, c);
  }
  return q;
}

double mean_quality(const Mesh& mesh) {
  const auto q = triangle_quality(mesh);
  return q.empty() ? 0.0 : std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(q.size());
}

std::array<double, 3> triangle_angles(const Point2& a, const Point2& b, const Point2& c) {
  if (predicates::orient2d(a, b, c) == 0) throw DegenerateElementError("triangle has zero area");
  const auto angle = [](const Point2& p, const Point2& q, const Point2& r) {
    const Vec2 u = q - p, v = r - p;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  return {angle(a, b, c), angle(b, c, a), angle(c, a, b)};
}

double min_angle(const Mesh& mesh) {
  double best = std::numbers::pi;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    const auto ang = triangle_angles(a, b, c);
    best = std::min({best, ang[0], ang[1], ang[2]});
  }
  return best;
}

}  // namespace hatafem
