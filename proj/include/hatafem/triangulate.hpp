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

#include <memory>
#include <span>
#include <vector>

#include "hatafem/mesh.hpp"

namespace hatafem {

/// Delaunay triangulation of the convex hull of a point set.
///
/// Vertex i of the result is points[i]. The mesh domain is the convex hull;
/// strict hull vertices are its corners. Cocircular ties take the diagonal
/// with the smaller lower endpoint index.
///
/// Throws DimensionError when fewer than three points are given or all are
/// collinear, DuplicatePointError for points closer than 1e-12.
Mesh delaunay(std::span<const Point2> points);

/// Boundary-conforming Delaunay triangulation of a polygonal domain.
///
/// Boundary points must lie on the boundary (within 1e-10 relative to the
/// domain size) and include every domain corner; they are snapped onto their
/// segment. Interior points must lie strictly inside. The result lists the
/// boundary points first, then the interior points, each in input order.
///
/// Throws ContainmentError for misplaced points, BoundaryRecoveryError when a
/// boundary segment cannot be recovered (missing corner, vertex on a segment).
Mesh conforming_delaunay(std::shared_ptr<const PolygonDomain> domain,
                         std::span<const Point2> interior_points,
                         std::span<const Point2> boundary_points);

/// Corners plus evenly spaced points on every segment, at most `spacing` apart.
std::vector<Point2> sample_boundary(const PolygonDomain& domain, double spacing);

/// Conforming Delaunay mesh of the lattice points of spacing ~`spacing`
/// inside the domain. Corners must fall on the lattice.
Mesh structured_mesh(std::shared_ptr<const PolygonDomain> domain, double spacing);

}  // namespace hatafem
