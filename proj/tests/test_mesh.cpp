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

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "generators.hpp"
#include "hatafem/adapt.hpp"
#include "hatafem/error.hpp"
#include "hatafem/mesh.hpp"

using namespace hatafem;

namespace {

std::shared_ptr<const PolygonDomain> unit_square() {
  return std::make_shared<const PolygonDomain>(PolygonDomain::rectangle(0, 0, 1, 1));
}

Mesh single_triangle(Point2 a, Point2 b, Point2 c) {
  auto domain = std::make_shared<const PolygonDomain>(std::vector<Point2>{a, b, c});
  return Mesh(domain, {a, b, c}, {{0, 1, 2}},
              {BoundaryTag::at_corner(0), BoundaryTag::at_corner(1), BoundaryTag::at_corner(2)});
}

Mesh two_triangle_square() {
  return Mesh(unit_square(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}},
              {BoundaryTag::at_corner(0), BoundaryTag::at_corner(1), BoundaryTag::at_corner(2),
               BoundaryTag::at_corner(3)});
}

// Unit square split into four right triangles around its centre.
Mesh four_triangle_square() {
  return Mesh(unit_square(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}},
              {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}},
              {BoundaryTag::at_corner(0), BoundaryTag::at_corner(1), BoundaryTag::at_corner(2),
               BoundaryTag::at_corner(3), BoundaryTag::interior()});
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("polygon domains") {
    const auto sq = PolygonDomain::rectangle(0, 0, 2, 1);
    CHECK(sq.area() == doctest::Approx(2.0));
    CHECK(sq.perimeter() == doctest::Approx(6.0));
    CHECK(sq.corner_count() == 4);

    const auto l = PolygonDomain::l_shape();
    CHECK(l.corner_count() == 6);
    CHECK(l.area() == doctest::Approx(3.0));
    CHECK(l.contains({-0.5, -0.5}));
    CHECK(l.contains({0.5, 0.5}));
    CHECK_FALSE(l.contains({0.5, -0.5}));
    CHECK(l.distance_to_boundary({-0.5, 0.5}) == doctest::Approx(0.5));
    const auto s = l.segment_at({0.0, -0.5}, 1e-12);
    REQUIRE(s);
    CHECK(l.project({0.1, -0.5}, *s).x == doctest::Approx(0.0));
  }

  TEST_CASE("invalid polygons are rejected") {
    CHECK_THROWS_AS(PolygonDomain({{0, 0}, {0, 1}, {1, 0}}), GeometryError);
    CHECK_THROWS_AS(PolygonDomain({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
    CHECK_THROWS_AS(PolygonDomain({{0, 0}, {1, 0}}), GeometryError);
    // A hole must be clockwise and inside.
    CHECK_NOTHROW(PolygonDomain({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{{1, 1}, {1, 2}, {2, 2}, {2, 1}}}));
    CHECK_THROWS_AS(PolygonDomain({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{{1, 1}, {2, 1}, {2, 2}, {1, 2}}}),
                    GeometryError);
    CHECK_THROWS_AS(PolygonDomain({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{{5, 5}, {5, 6}, {6, 6}, {6, 5}}}),
                    GeometryError);
  }

  TEST_CASE("boundary tags round trip through their integer code") {
    for (const auto tag : {BoundaryTag::interior(), BoundaryTag::on_segment(0), BoundaryTag::on_segment(7),
                           BoundaryTag::at_corner(0), BoundaryTag::at_corner(5)})
      CHECK(decode_boundary_tag(encode_boundary_tag(tag)) == tag);
    CHECK(encode_boundary_tag(BoundaryTag::interior()) == 0);
    CHECK(encode_boundary_tag(BoundaryTag::on_segment(2)) == 3);
    CHECK(encode_boundary_tag(BoundaryTag::at_corner(2)) == -3);
  }

  TEST_CASE("edge table of a single triangle") {
    const Mesh m = single_triangle({0, 0}, {1, 0}, {0, 1});
    const EdgeTable e(m);
    CHECK(e.size() == 3);
    CHECK(e.boundary_count() == 3);
    CHECK(e.interior_count() == 0);
  }

  TEST_CASE("edge table of two triangles sharing an edge") {
    const Mesh m = two_triangle_square();
    const EdgeTable e(m);
    CHECK(e.size() == 5);
    CHECK(e.interior_count() == 1);
    CHECK(e.boundary_count() == 4);
    for (const auto& edge : e.edges()) {
      CHECK(edge.v0 < edge.v1);
      const Vec2 d = m.vertex(edge.v1) - m.vertex(edge.v0);
      CHECK(edge.length == doctest::Approx(norm(d)));
      // Direction from the lower to the higher vertex, rotated by +90 degrees.
      CHECK(edge.normal.x == doctest::Approx(-d.y / norm(d)));
      CHECK(edge.normal.y == doctest::Approx(d.x / norm(d)));
      CHECK(edge.midpoint == midpoint(m.vertex(edge.v0), m.vertex(edge.v1)));
      if (!edge.on_boundary()) {
        CHECK(edge.v0 == 0);
        CHECK(edge.v1 == 2);
      }
    }
    // Local edge i faces local vertex i.
    for (int t = 0; t < 2; ++t)
      for (int i = 0; i < 3; ++i) {
        const auto& edge = e.edge(e.triangle_edges(t)[static_cast<std::size_t>(i)]);
        const int opposite = m.triangle(t)[static_cast<std::size_t>(i)];
        CHECK(edge.v0 != opposite);
        CHECK(edge.v1 != opposite);
      }
  }

  TEST_CASE("non-conforming connectivity is reported") {
    // Three triangles on one edge.
    auto domain = std::make_shared<const PolygonDomain>(PolygonDomain::rectangle(-1, -1, 1, 1));
    const Mesh m(domain, {{0, -1}, {0, 1}, {-1, 0}, {1, 0}, {0.5, 0}},
                 {{0, 1, 2}, {1, 0, 3}, {1, 0, 4}},
                 {BoundaryTag::interior(), BoundaryTag::interior(), BoundaryTag::interior(), BoundaryTag::interior(),
                  BoundaryTag::interior()});
    CHECK_THROWS_AS(EdgeTable{m}, TopologyError);
    CHECK_THROWS_AS(validate(m), Error);
  }

  TEST_CASE("validate detects broken invariants") {
    CHECK_NOTHROW(validate(two_triangle_square()));
    // Clockwise triangle.
    const Mesh cw(unit_square(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 2, 1}, {0, 3, 2}},
                  {BoundaryTag::at_corner(0), BoundaryTag::at_corner(1), BoundaryTag::at_corner(2),
                   BoundaryTag::at_corner(3)});
    CHECK_THROWS_AS(validate(cw), DegenerateElementError);
    // Missing triangle leaves part of the boundary uncovered.
    const Mesh half(unit_square(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}},
                    {BoundaryTag::at_corner(0), BoundaryTag::at_corner(1), BoundaryTag::at_corner(2),
                     BoundaryTag::at_corner(3)});
    CHECK_THROWS_AS(validate(half), TopologyError);
    // Wrong tag.
    const Mesh tagged(unit_square(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}},
                      {BoundaryTag::at_corner(0), BoundaryTag::at_corner(2), BoundaryTag::at_corner(2),
                       BoundaryTag::at_corner(3)});
    CHECK_THROWS_AS(validate(tagged), TopologyError);
  }

  TEST_CASE("property: Euler relation and incidence count on random meshes") {
    testgen::Rng rng(17);
    for (int trial = 0; trial < 25; ++trial) {
      const Mesh m = testgen::random_square_mesh(rng, testgen::uniform_size(rng, 0, 150));
      const EdgeTable e(m);
      const auto V = static_cast<long>(m.vertex_count());
      const auto E = static_cast<long>(e.size());
      const auto T = static_cast<long>(m.triangle_count());
      CHECK(V - E + T == 1);
      CHECK(3 * T == static_cast<long>(2 * e.interior_count() + e.boundary_count()));
      // Deterministic ordering and normals.
      const EdgeTable again(m);
      bool same = true;
      for (std::size_t i = 0; i < e.size(); ++i)
        same = same && e.edges()[i].v0 == again.edges()[i].v0 && e.edges()[i].v1 == again.edges()[i].v1 &&
               e.edges()[i].normal == again.edges()[i].normal;
      CHECK(same);
    }
  }

  TEST_CASE("vertex patches") {
    const Mesh m = four_triangle_square();
    const VertexPatches p(m);
    CHECK(p.size(4) == 4);
    for (int v = 0; v < 4; ++v) CHECK(p.size(v) == 2);
  }

  TEST_CASE("triangle quality") {
    const double s3 = std::sqrt(3.0);
    CHECK(triangle_quality({0, 0}, {1, 0}, {0.5, s3 / 2}) == doctest::Approx(1.0).epsilon(1e-14));
    // 4 sqrt(3) 0.5 / (1 + 1 + 2).
    CHECK(triangle_quality({0, 0}, {1, 0}, {0, 1}) == doctest::Approx(s3 / 2).epsilon(1e-14));
    CHECK_THROWS_AS(triangle_quality({0, 0}, {1, 1}, {2, 2}), DegenerateElementError);
    CHECK(mean_quality(two_triangle_square()) == doctest::Approx(s3 / 2));
  }

  TEST_CASE("property: quality is invariant under similarity transforms") {
    testgen::Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
      auto p = testgen::random_points(rng, 3);
      if (signed_area2(p[0], p[1], p[2]) < 0) std::swap(p[1], p[2]);
      if (std::abs(signed_area2(p[0], p[1], p[2])) < 1e-6) continue;
      const double q = triangle_quality(p[0], p[1], p[2]);
      const double angle = 2.0 * std::numbers::pi * uniform01(rng);
      const double scale = std::exp(6.0 * uniform01(rng) - 3.0);
      const Vec2 shift{10.0 * uniform01(rng) - 5.0, 10.0 * uniform01(rng) - 5.0};
      const auto map = [&](const Point2& x) {
        return Point2{scale * (std::cos(angle) * x.x - std::sin(angle) * x.y) + shift.x,
                      scale * (std::sin(angle) * x.x + std::cos(angle) * x.y) + shift.y};
      };
      CHECK(std::abs(triangle_quality(map(p[0]), map(p[1]), map(p[2])) - q) <= 1e-12);
    }
  }

  TEST_CASE("minimum angle") {
    const double s3 = std::sqrt(3.0);
    CHECK(min_angle(single_triangle({0, 0}, {1, 0}, {0.5, s3 / 2})) == doctest::Approx(std::numbers::pi / 3));
    CHECK(min_angle(single_triangle({0, 0}, {1, 0}, {0, 1})) == doctest::Approx(std::numbers::pi / 4));
    // One bisection round of the four right triangles keeps the angles.
    const Mesh m = four_triangle_square();
    CHECK(min_angle(m) == doctest::Approx(std::numbers::pi / 4));
    const std::vector<int> all{0, 1, 2, 3};
    const Mesh r = bisect(m, all);
    CHECK(r.triangle_count() == 8);
    CHECK(min_angle(r) == doctest::Approx(std::numbers::pi / 4));
    const auto ang = triangle_angles({0, 0}, {2, 0}, {0, 1});
    CHECK(ang[0] == doctest::Approx(std::numbers::pi / 2));
    CHECK(ang[0] + ang[1] + ang[2] == doctest::Approx(std::numbers::pi));
  }

  TEST_CASE("geometry accessors") {
    const Mesh m = single_triangle({0, 0}, {2, 0}, {0, 1});
    CHECK(m.area(0) == doctest::Approx(1.0));
    CHECK(m.diameter(0) == doctest::Approx(std::sqrt(5.0)));
    CHECK(m.centroid(0).x == doctest::Approx(2.0 / 3.0));
    CHECK(m.refinement_edge(0) == 0);
  }
}
