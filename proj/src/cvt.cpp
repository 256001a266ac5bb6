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

#include "hatafem/cvt.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hatafem/error.hpp"
#include "hatafem/triangulate.hpp"

namespace hatafem {

DensityField::DensityField(std::shared_ptr<const Mesh> background, std::vector<double> nodal_values)
    : mesh_(std::move(background)), values_(std::move(nodal_values)) {
  if (values_.size() != mesh_->vertex_count())
    throw ConsistencyError(fmt::format("{} density values for {} vertices", values_.size(), mesh_->vertex_count()));
  for (double v : values_)
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("density values must be positive and finite");
  uniform_ = std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
  if (!uniform_) locator_ = std::make_shared<const PointLocator>(*mesh_);
}

DensityField DensityField::uniform(std::shared_ptr<const Mesh> background, double value) {
  const auto n = background->vertex_count();
  return DensityField(std::move(background), std::vector<double>(n, value));
}

DensityField DensityField::interpolate(std::shared_ptr<const Mesh> background, const ScalarFunction& rho) {
  std::vector<double> values;
  values.reserve(background->vertex_count());
  for (const auto& p : background->vertices()) values.push_back(rho(p));
  return DensityField(std::move(background), std::move(values));
}

double DensityField::operator()(const Point2& p) const {
  if (uniform_) {
    if (!mesh_->domain().bbox().contains(p, 1e-9 * mesh_->domain().bbox().extent()))
      throw DomainError(fmt::format("density evaluated outside the domain at ({}, {})", p.x, p.y));
    return values_.front();
  }
  auto hit = locator_->locate(p);
  if (!hit) hit = locator_->locate(p, 1e-6);
  if (!hit) throw DomainError(fmt::format("density evaluated outside the domain at ({}, {})", p.x, p.y));
  const auto& t = mesh_->triangle(hit->triangle);
  double v = 0.0;
  for (int k = 0; k < 3; ++k)
    v += std::clamp(hit->bary[static_cast<std::size_t>(k)], 0.0, 1.0) *
         values_[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
  const double s = std::clamp(hit->bary[0], 0.0, 1.0) + std::clamp(hit->bary[1], 0.0, 1.0) +
                   std::clamp(hit->bary[2], 0.0, 1.0);
  return v / s;
}

DensityField DensityField::normalized() const {
  const double top = *std::max_element(values_.begin(), values_.end());
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::max(static_cast<double>(static_cast<float>(values_[i] / top)), 1e-30);
  return DensityField(mesh_, std::move(out));
}

DensityField DensityField::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return DensityField(mesh_, std::move(out));
}

namespace {

struct Moments {
  double mass = 0.0;
  Vec2 first{};
};

// Mass and first moment of a linear density over triangle (a, b, c).
void accumulate(Moments& m, const Point2& a, const Point2& b, const Point2& c, double ra, double rb, double rc) {
  const double area = 0.5 * std::abs(signed_area2(a, b, c));
  const double rs = ra + rb + rc;
  m.mass += area * rs / 3.0;
  m.first += (a * ra + b * rb + c * rc + (a + b + c) * rs) * (area / 12.0);
}

// Quadratic interpolant of the density on one triangle from corner and
// edge-midpoint samples.
struct TriangleDensity {
  std::array<Point2, 3> corner;
  std::array<double, 3> at_corner;
  std::array<double, 3> at_mid;  // at_mid[k]: midpoint of the edge opposite local vertex k
  double twice_area;

  double operator()(const Point2& p) const {
    std::array<double, 3> l{};
    for (int k = 0; k < 3; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      l[ku] = signed_area2(p, corner[(ku + 1) % 3], corner[(ku + 2) % 3]) / twice_area;
    }
    double v = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      v += at_corner[k] * l[k] * (2.0 * l[k] - 1.0);
      v += at_mid[k] * 4.0 * l[(k + 1) % 3] * l[(k + 2) % 3];
    }
    return v;
  }
};

template <class Rho>
TriangleDensity sample(const Mesh& mesh, int t, const Rho& rho, const std::vector<double>& vertex_rho) {
  const auto [a, b, c] = mesh.corners(t);
  const auto& tri = mesh.triangle(t);
  TriangleDensity s;
  s.corner = {a, b, c};
  s.twice_area = signed_area2(a, b, c);
  const std::array<Point2, 3> mid{midpoint(b, c), midpoint(c, a), midpoint(a, b)};
  for (std::size_t k = 0; k < 3; ++k) {
    s.at_corner[k] = vertex_rho[static_cast<std::size_t>(tri[k])];
    s.at_mid[k] = rho(mid[k]);
  }
  return s;
}

using Polygon = std::vector<Point2>;

// Part of `poly` closer to z than to w.
Polygon clip_toward(const Polygon& poly, const Point2& z, const Point2& w) {
  const Point2 m = midpoint(z, w);
  const Vec2 d = w - z;
  Polygon out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    const double fp = dot(p - m, d), fq = dot(q - m, d);
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
  }
  return out;
}

// Subregion of triangle t nearest to its local vertex i.
Polygon nearest_region(const TriangleDensity& s, int i) {
  const auto iu = static_cast<std::size_t>(i);
  const Point2& z = s.corner[iu];
  Polygon poly(s.corner.begin(), s.corner.end());
  poly = clip_toward(poly, z, s.corner[(iu + 1) % 3]);
  return clip_toward(poly, z, s.corner[(iu + 2) % 3]);
}

template <class Rho>
std::vector<double> vertex_values(const Mesh& mesh, const Rho& rho) {
  std::vector<double> out(mesh.vertex_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = rho(mesh.vertices()[v]);
  return out;
}

// Boundary neighbours (previous, next) of every boundary vertex.
std::vector<std::array<int, 2>> boundary_neighbours(const Mesh& mesh) {
  std::vector<std::array<int, 2>> nb(mesh.vertex_count(), {-1, -1});
  const EdgeTable edges(mesh);
  for (const auto& e : edges.edges()) {
    if (!e.on_boundary()) continue;
    for (int v : {e.v0, e.v1}) {
      auto& slot = nb[static_cast<std::size_t>(v)];
      (slot[0] < 0 ? slot[0] : slot[1]) = v == e.v0 ? e.v1 : e.v0;
    }
  }
  return nb;
}

// Weighted centroid of the linear density on [p, q].
Moments segment_moments(const Point2& p, const Point2& q, double rp, double rq) {
  const double len = distance(p, q);
  return {len * (rp + rq) / 2.0, (p * (2.0 * rp + rq) + q * (rp + 2.0 * rq)) * (len / 6.0)};
}

}  // namespace

Mesh lloyd_step(const Mesh& mesh, const DensityField& density) {
  const DensityField rho_field = density.normalized();
  const auto rho = [&](const Point2& p) { return rho_field.is_uniform() ? 1.0 : rho_field(p); };
  const auto vertex_rho = vertex_values(mesh, rho);
  const auto nv = mesh.vertex_count();
  std::vector<Moments> cells(nv);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto s = sample(mesh, t, rho, vertex_rho);
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) {
      const auto region = nearest_region(s, i);
      auto& cell = cells[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])];
      for (std::size_t k = 1; k + 1 < region.size(); ++k)
        accumulate(cell, region[0], region[k], region[k + 1], s(region[0]), s(region[k]), s(region[k + 1]));
    }
  }

  const PolygonDomain& dom = mesh.domain();
  const double tol = 1e-10 * std::max(1.0, dom.bbox().extent());
  const auto neighbours = boundary_neighbours(mesh);
  std::vector<Point2> moved(mesh.vertices());
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& tag = mesh.tags()[v];
    const Point2& z = mesh.vertices()[v];
    if (tag.is_corner()) continue;
    if (tag.on_boundary()) {
      const auto [prev, next] = neighbours[v];
      if (prev < 0 || next < 0) throw TopologyError(fmt::format("boundary vertex {} lacks boundary edges", v));
      const Point2 ml = midpoint(mesh.vertex(prev), z);
      const Point2 mr = midpoint(z, mesh.vertex(next));
      const double rz = vertex_rho[v];
      const auto left = segment_moments(ml, z, rho(ml), rz);
      const auto right = segment_moments(z, mr, rz, rho(mr));
      const Point2 c = (left.first + right.first) * (1.0 / (left.mass + right.mass));
      moved[v] = dom.project(c, tag.index);
      continue;
    }
    const auto& cell = cells[v];
    if (!(cell.mass > 0.0)) continue;
    Vec2 step = cell.first * (1.0 / cell.mass) - z;
    for (int halving = 0; halving <= 50; ++halving) {
      const Point2 p = z + step;
      if (dom.contains(p) && dom.distance_to_boundary(p) > tol) {
        moved[v] = p;
        break;
      }
      step *= 0.5;
    }
  }

  std::vector<Point2> boundary, interior;
  std::vector<int> order;
  for (std::size_t v = 0; v < nv; ++v)
    if (mesh.tags()[v].on_boundary()) {
      boundary.push_back(moved[v]);
      order.push_back(static_cast<int>(v));
    }
  for (std::size_t v = 0; v < nv; ++v)
    if (!mesh.tags()[v].on_boundary()) {
      interior.push_back(moved[v]);
      order.push_back(static_cast<int>(v));
    }
  const Mesh rebuilt = conforming_delaunay(mesh.domain_ptr(), interior, boundary);

  // Restore the caller's vertex numbering.
  std::vector<Point2> vertices(nv);
  std::vector<BoundaryTag> tags(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    vertices[static_cast<std::size_t>(order[k])] = rebuilt.vertices()[k];
    tags[static_cast<std::size_t>(order[k])] = rebuilt.tags()[k];
  }
  std::vector<Triangle> triangles(rebuilt.triangles());
  for (auto& t : triangles)
    for (int& v : t) v = order[static_cast<std::size_t>(v)];
  return Mesh(mesh.domain_ptr(), std::move(vertices), std::move(triangles), std::move(tags));
}

double cvt_energy(const Mesh& mesh, const DensityField& density) {
  const auto rho = [&](const Point2& p) { return density(p); };
  const auto vertex_rho = vertex_values(mesh, rho);
  double energy = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto s = sample(mesh, t, rho, vertex_rho);
    for (int i = 0; i < 3; ++i) {
      const Point2& z = s.corner[static_cast<std::size_t>(i)];
      const auto region = nearest_region(s, i);
      // Edge-midpoint rule on a fan of the region; the density is linear there.
      for (std::size_t k = 1; k + 1 < region.size(); ++k) {
        const Point2 &p = region[0], &q = region[k], &r = region[k + 1];
        const double rp = s(p), rq = s(q), rr = s(r);
        const double area = 0.5 * std::abs(signed_area2(p, q, r));
        const double f1 = 0.5 * (rp + rq) * norm2(midpoint(p, q) - z);
        const double f2 = 0.5 * (rq + rr) * norm2(midpoint(q, r) - z);
        const double f3 = 0.5 * (rr + rp) * norm2(midpoint(r, p) - z);
        energy += area * (f1 + f2 + f3) / 3.0;
      }
    }
  }
  return energy;
}

Mesh cfcvdt_optimize(const Mesh& mesh, const DensityField& density, int iters) {
  if (iters < 1) throw ConfigurationError("cfcvdt_optimize needs at least one iteration");
  Mesh current = lloyd_step(mesh, density);
  for (int i = 1; i < iters; ++i) current = lloyd_step(current, density);
  return current;
}

double spacing_for_vertex_count(const PolygonDomain& domain, std::size_t n) {
  // n = (2 / sqrt 3) A / h^2 + P / h, solved for s = 1 / h.
  const double a = 2.0 * domain.area() / std::sqrt(3.0);
  const double p = domain.perimeter();
  const double s = (-p + std::sqrt(p * p + 4.0 * a * static_cast<double>(n))) / (2.0 * a);
  return 1.0 / s;
}

Mesh uniform_cvdt_mesh(std::shared_ptr<const PolygonDomain> domain, std::size_t n, int lloyd_iters,
                       std::uint64_t seed) {
  if (n < domain->corner_count()) throw ConfigurationError("fewer vertices than domain corners");
  double h = spacing_for_vertex_count(*domain, n);
  auto boundary = sample_boundary(*domain, h);
  while (boundary.size() > n) {
    h *= 1.05;
    boundary = sample_boundary(*domain, h);
  }
  std::mt19937_64 rng(seed);
  const auto box = domain->bbox();
  std::vector<Point2> interior;
  while (boundary.size() + interior.size() < n) {
    const Point2 p{box.lo.x + box.width() * uniform01(rng), box.lo.y + box.height() * uniform01(rng)};
    if (domain->contains(p) && domain->distance_to_boundary(p) > 0.25 * h) interior.push_back(p);
  }
  Mesh mesh = conforming_delaunay(domain, interior, boundary);
  if (lloyd_iters > 0) {
    auto shared = std::make_shared<const Mesh>(mesh);
    mesh = cfcvdt_optimize(mesh, DensityField::uniform(shared), lloyd_iters);
  }
  return mesh;
}

}  // namespace hatafem
