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

#include <cstdint>
#include <memory>
#include <vector>

#include "hatafem/fem.hpp"
#include "hatafem/locator.hpp"
#include "hatafem/mesh.hpp"

namespace hatafem {

/// Positive piecewise-linear density on a background mesh.
class DensityField {
 public:
  /// Throws DomainError unless every nodal value is positive and finite.
  DensityField(std::shared_ptr<const Mesh> background, std::vector<double> nodal_values);

  static DensityField uniform(std::shared_ptr<const Mesh> background, double value = 1.0);
  /// Nodal interpolant of rho.
  static DensityField interpolate(std::shared_ptr<const Mesh> background, const ScalarFunction& rho);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  bool is_uniform() const { return uniform_; }

  /// Linear interpolant at p; throws DomainError outside the background mesh.
  double operator()(const Point2& p) const;

  /// Values divided by their maximum and rounded to single precision, so
  /// that positive multiples of a field normalize to identical values.
  DensityField normalized() const;
  DensityField scaled(double factor) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> values_;
  bool uniform_ = false;
  std::shared_ptr<const PointLocator> locator_;
};

/// One Lloyd iteration on the median-dual cells of the mesh, followed by
/// re-triangulation. Vertex order and boundary tags are kept; corners stay.
Mesh lloyd_step(const Mesh& mesh, const DensityField& density);

/// Integral of rho |x - z|^2 over the median-dual cell of every vertex z.
double cvt_energy(const Mesh& mesh, const DensityField& density);

/// iters Lloyd steps; throws ConfigurationError when iters < 1.
Mesh cfcvdt_optimize(const Mesh& mesh, const DensityField& density, int iters);

/// Boundary spacing h for which a uniform mesh of the domain has about n vertices.
double spacing_for_vertex_count(const PolygonDomain& domain, std::size_t n);

/// Uniform-density CVDT mesh with exactly n vertices: evenly sampled boundary,
/// seeded random interior points, then lloyd_iters Lloyd steps.
Mesh uniform_cvdt_mesh(std::shared_ptr<const PolygonDomain> domain, std::size_t n, int lloyd_iters,
                       std::uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
template <class Engine>
double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace hatafem
