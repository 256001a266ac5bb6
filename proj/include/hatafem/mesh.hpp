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

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hatafem/geometry.hpp"

namespace hatafem {

/// Polygonal domain: one counter-clockwise outer loop and clockwise hole loops.
///
/// Boundary segments are numbered globally: the outer loop first, then each
/// hole in order. Segment s of a loop runs from loop[i] to loop[i + 1]. Domain
/// vertices ("corners") use the same global numbering, so segment s starts at
/// corner s.
class PolygonDomain {
 public:
  struct Segment {
    Point2 a;
    Point2 b;
  };

  /// Validates orientation, simplicity and hole placement; throws GeometryError.
  explicit PolygonDomain(std::vector<Point2> outer, std::vector<std::vector<Point2>> holes = {});

  static PolygonDomain rectangle(double x0, double y0, double x1, double y1);
  /// (-1,1)^2 minus (0,1)x(-1,0).
  static PolygonDomain l_shape();

  const std::vector<std::vector<Point2>>& loops() const { return loops_; }
  std::size_t hole_count() const { return loops_.size() - 1; }
  std::size_t segment_count() const { return corners_.size(); }
  std::size_t corner_count() const { return corners_.size(); }

  const Point2& corner(int c) const { return corners_[static_cast<std::size_t>(c)]; }
  Segment segment(int s) const;
  /// Corner ids at the start and end of segment s.
  std::array<int, 2> segment_corners(int s) const;
  /// The segment preceding segment s in its loop (the other segment at corner s).
  int previous_segment(int s) const;

  /// Point-in-polygon by ray casting; points on the boundary may go either way.
  bool contains(const Point2& p) const;
  double distance_to_boundary(const Point2& p) const;
  std::optional<int> corner_at(const Point2& p, double tol) const;
  /// A segment passing within tol of p (lowest id when several do).
  std::optional<int> segment_at(const Point2& p, double tol) const;
  /// Orthogonal projection of p onto segment s.
  Point2 project(const Point2& p, int s) const;
  double area() const;
  double perimeter() const;
  BoundingBox bbox() const;

 private:
  std::vector<std::vector<Point2>> loops_;
  std::vector<Point2> corners_;
  std::vector<int> loop_start_;
  std::vector<int> loop_of_corner_;
};

/// Where a mesh vertex sits relative to the domain boundary.
struct BoundaryTag {
  enum class Kind : std::uint8_t { interior, segment, corner };

  Kind kind = Kind::interior;
  int index = -1;  // segment id or corner id

  static constexpr BoundaryTag interior() { return {}; }
  static constexpr BoundaryTag on_segment(int s) { return {Kind::segment, s}; }
  static constexpr BoundaryTag at_corner(int c) { return {Kind::corner, c}; }

  bool on_boundary() const { return kind != Kind::interior; }
  bool is_corner() const { return kind == Kind::corner; }
  friend bool operator==(const BoundaryTag&, const BoundaryTag&) = default;
};

/// Integer encoding used by the .node format: 0 interior, s+1 for segment s,
/// -(c+1) for corner c.
int encode_boundary_tag(const BoundaryTag& tag);
BoundaryTag decode_boundary_tag(int code);

using Triangle = std::array<int, 3>;

/// Conforming triangulation of a PolygonDomain.
///
/// Triangles are counter-clockwise. Local edge i is the edge opposite local
/// vertex i; refinement_edge(t) names the edge newest-vertex bisection splits.
class Mesh {
 public:
  Mesh(std::shared_ptr<const PolygonDomain> domain, std::vector<Point2> vertices,
       std::vector<Triangle> triangles, std::vector<BoundaryTag> tags,
       std::vector<std::uint8_t> refinement_edge);

  /// Same, with refinement edges seeded on the longest edge of every triangle.
  Mesh(std::shared_ptr<const PolygonDomain> domain, std::vector<Point2> vertices,
       std::vector<Triangle> triangles, std::vector<BoundaryTag> tags);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<BoundaryTag>& tags() const { return tags_; }
  const std::vector<std::uint8_t>& refinement_edges() const { return refinement_edge_; }
  const PolygonDomain& domain() const { return *domain_; }
  const std::shared_ptr<const PolygonDomain>& domain_ptr() const { return domain_; }

  const Point2& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Triangle& triangle(int t) const { return triangles_[static_cast<std::size_t>(t)]; }
  const BoundaryTag& tag(int v) const { return tags_[static_cast<std::size_t>(v)]; }
  int refinement_edge(int t) const { return refinement_edge_[static_cast<std::size_t>(t)]; }

  std::array<Point2, 3> corners(int t) const;
  double area(int t) const;
  Point2 centroid(int t) const;
  /// Longest edge length.
  double diameter(int t) const;

 private:
  std::shared_ptr<const PolygonDomain> domain_;
  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryTag> tags_;
  std::vector<std::uint8_t> refinement_edge_;
};

/// Index of the longest edge of each triangle (lowest local index on ties).
std::vector<std::uint8_t> longest_edges(std::span<const Point2> vertices,
                                        std::span<const Triangle> triangles);

/// Checks every Mesh invariant (orientation, conformity, boundary coverage,
/// tag consistency); throws TopologyError or DegenerateElementError.
void validate(const Mesh& mesh);

/// Edges with incidence, fixed unit normals, lengths and midpoints.
class EdgeTable {
 public:
  struct Edge {
    int v0 = -1;  // lower vertex index
    int v1 = -1;
    int t0 = -1;
    int t1 = -1;  // -1 on the boundary
    Vec2 normal{};
    double length = 0.0;
    Point2 midpoint{};

    bool on_boundary() const { return t1 < 0; }
  };

  explicit EdgeTable(const Mesh& mesh);

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::size_t size() const { return edges_.size(); }
  /// Edge ids of triangle t, indexed by the local vertex they face.
  const std::array<int, 3>& triangle_edges(int t) const {
    return tri_edges_[static_cast<std::size_t>(t)];
  }
  std::size_t interior_count() const { return interior_; }
  std::size_t boundary_count() const { return edges_.size() - interior_; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::size_t interior_ = 0;
};

EdgeTable build_edge_table(const Mesh& mesh);

/// Vertex-to-triangle incidence in compressed form (the patches omega_z).
class VertexPatches {
 public:
  explicit VertexPatches(const Mesh& mesh);

  std::span<const int> triangles(int v) const {
    const auto b = offsets_[static_cast<std::size_t>(v)];
    const auto e = offsets_[static_cast<std::size_t>(v) + 1];
    return {tris_.data() + b, tris_.data() + e};
  }
  std::size_t size(int v) const { return triangles(v).size(); }

 private:
  std::vector<int> offsets_;
  std::vector<int> tris_;
};

/// Shape quality 4*sqrt(3)*area / (sum of squared edge lengths), 1 for equilateral.
double triangle_quality(const Point2& a, const Point2& b, const Point2& c);
std::vector<double> triangle_quality(const Mesh& mesh);
double mean_quality(const Mesh& mesh);
/// Smallest interior angle over all triangles, in radians.
double min_angle(const Mesh& mesh);
/// Interior angles of a triangle, in radians, in local-vertex order.
std::array<double, 3> triangle_angles(const Point2& a, const Point2& b, const Point2& c);

}  // namespace hatafem
