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

#include "hatafem/estimate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "hatafem/error.hpp"
#include "hatafem/quadrature.hpp"

namespace hatafem {

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::residual: return "residual";
    case EstimatorKind::recovery: return "recovery";
    case EstimatorKind::weighted_recovery: return "weighted-recovery";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "residual") return EstimatorKind::residual;
  if (name == "recovery") return EstimatorKind::recovery;
  if (name == "weighted-recovery") return EstimatorKind::weighted_recovery;
  throw ConfigurationError(fmt::format("unknown estimator '{}'", name));
}

namespace {

double root_sum_square(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Triangles around a vertex, optionally grown by one ring.
std::vector<int> patch(const Mesh& mesh, const VertexPatches& patches, int v, bool two_rings) {
  std::vector<int> out(patches.triangles(v).begin(), patches.triangles(v).end());
  if (!two_rings) return out;
  std::vector<int> grown;
  for (int t : out)
    for (int w : mesh.triangle(t))
      for (int s : patches.triangles(w)) grown.push_back(s);
  std::sort(grown.begin(), grown.end());
  grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
  return grown;
}

// Fits c0 + c1 dx + c2 dy to values at the centroids; returns c0, the value
// at the vertex, or nothing when the normal equations are rank deficient.
std::optional<Vec2> fit_at_vertex(const Mesh& mesh, const std::vector<int>& tris, const Point2& z,
                                  const std::vector<Vec2>& grads) {
  if (tris.size() < 3) return std::nullopt;
  double scale = 0.0;
  for (int t : tris) scale = std::max(scale, distance(mesh.centroid(t), z));
  if (!(scale > 0.0)) return std::nullopt;
  double m[3][3] = {};
  double r[2][3] = {};
  for (int t : tris) {
    const Point2 d = (mesh.centroid(t) - z) * (1.0 / scale);
    const double basis[3] = {1.0, d.x, d.y};
    const Vec2& g = grads[static_cast<std::size_t>(t)];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
      r[0][i] += basis[i] * g.x;
      r[1][i] += basis[i] * g.y;
    }
  }
  const auto det3 = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double det = det3(m);
  const double n = static_cast<double>(tris.size());
  if (!(std::abs(det) > 1e-10 * n * n * n)) return std::nullopt;
  // Cramer's rule for the constant coefficient only.
  Vec2 out{};
  for (int c = 0; c < 2; ++c) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] = j == 0 ? r[c][i] : m[i][j];
    (c == 0 ? out.x : out.y) = det3(a) / det;
  }
  return out;
}

Vec2 area_average(const Mesh& mesh, const std::vector<int>& tris, const std::vector<Vec2>& grads) {
  Vec2 sum{};
  double area = 0.0;
  for (int t : tris) {
    sum += grads[static_cast<std::size_t>(t)] * mesh.area(t);
    area += mesh.area(t);
  }
  return sum * (1.0 / area);
}

// f + div(A) . grad u_h, the element residual of a P1 function.
template <class Fn>
void for_each_residual_sample(const Mesh& mesh, const ProblemSpec& problem, const Vec2& grad, int t, Fn&& fn) {
  const auto [a, b, c] = mesh.corners(t);
  for (const auto& q : quad::degree4()) {
    const Point2 x = quad::map(q, a, b, c);
    fn(q.weight, problem.f(x) + dot(problem.A.divergence(x), grad));
  }
}

void check_divergence(const ProblemSpec& problem, bool allow_numeric) {
  if (!problem.A.is_constant() && !problem.A.has_divergence() && !allow_numeric)
    throw ConfigurationError("non-constant coefficient without an analytic divergence");
}

}  // namespace

FeFunction recover_gradient(const FeFunction& u_h) {
  if (u_h.components() != 1) throw ConsistencyError("gradient recovery needs a scalar field");
  const Mesh& mesh = u_h.mesh();
  const VertexPatches patches(mesh);
  std::vector<Vec2> grads(mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) grads[static_cast<std::size_t>(t)] = u_h.gradient(t);

  std::vector<double> values(2 * mesh.vertex_count());
  for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
    const Point2& z = mesh.vertex(v);
    const bool boundary = mesh.tag(v).on_boundary();
    auto tris = patch(mesh, patches, v, boundary);
    auto g = fit_at_vertex(mesh, tris, z, grads);
    if (!g && !boundary) {
      tris = patch(mesh, patches, v, true);
      g = fit_at_vertex(mesh, tris, z, grads);
    }
    const Vec2 value = g ? *g : area_average(mesh, tris, grads);
    values[2 * static_cast<std::size_t>(v)] = value.x;
    values[2 * static_cast<std::size_t>(v) + 1] = value.y;
  }
  return FeFunction(u_h.mesh_ptr(), 2, std::move(values));
}

Estimate residual_estimator(const FeFunction& u_h, const ProblemSpec& problem, bool allow_numeric_divergence) {
  check_divergence(problem, allow_numeric_divergence);
  const Mesh& mesh = u_h.mesh();
  const EdgeTable edges(mesh);
  const auto nt = mesh.triangle_count();
  std::vector<Vec2> grads(nt);
  for (int t = 0; t < static_cast<int>(nt); ++t) grads[static_cast<std::size_t>(t)] = u_h.gradient(t);

  std::vector<double> eta2(nt, 0.0);
  for (int t = 0; t < static_cast<int>(nt); ++t) {
    double r2 = 0.0;
    for_each_residual_sample(mesh, problem, grads[static_cast<std::size_t>(t)], t,
                             [&](double w, double r) { r2 += w * r * r; });
    const double h = mesh.diameter(t);
    eta2[static_cast<std::size_t>(t)] = h * h * r2 * mesh.area(t);
  }
  for (const auto& e : edges.edges()) {
    if (e.on_boundary()) continue;
    const SymMat2 a = problem.A.evaluate(e.midpoint);
    const double jump = dot(a * (grads[static_cast<std::size_t>(e.t0)] - grads[static_cast<std::size_t>(e.t1)]), e.normal);
    // h_e ||J_e||^2_{0,e} with J_e constant along the edge.
    const double term = e.length * e.length * jump * jump;
    eta2[static_cast<std::size_t>(e.t0)] += term;
    eta2[static_cast<std::size_t>(e.t1)] += term;
  }
  Estimate est{EstimatorKind::residual, std::vector<double>(nt), 0.0};
  for (std::size_t t = 0; t < nt; ++t) est.per_element[t] = std::sqrt(eta2[t]);
  est.global = root_sum_square(est.per_element);
  return est;
}

Estimate recovery_estimator(const FeFunction& u_h, const FeFunction& G, const CoefficientField* weight) {
  if (&u_h.mesh() != &G.mesh())
    throw ConsistencyError("recovered gradient lives on a different mesh");
  if (u_h.components() != 1 || G.components() != 2)
    throw ConsistencyError("recovery estimator needs a scalar field and a 2-component gradient");
  const Mesh& mesh = u_h.mesh();
  const auto nt = mesh.triangle_count();
  Estimate est{weight ? EstimatorKind::weighted_recovery : EstimatorKind::recovery, std::vector<double>(nt), 0.0};
  for (int t = 0; t < static_cast<int>(nt); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    const Vec2 gh = u_h.gradient(t);
    double sum = 0.0;
    for (const auto& q : quad::degree4()) {
      const Vec2 d = G.evaluate_vector(t, q.bary) - gh;
      const double w = weight ? dot(d, weight->evaluate(quad::map(q, a, b, c)) * d) : norm2(d);
      sum += q.weight * w;
    }
    est.per_element[static_cast<std::size_t>(t)] = std::sqrt(sum * mesh.area(t));
  }
  est.global = root_sum_square(est.per_element);
  return est;
}

Estimate estimate(const FeFunction& u_h, const ProblemSpec& problem, EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::residual: return residual_estimator(u_h, problem);
    case EstimatorKind::recovery: return recovery_estimator(u_h, recover_gradient(u_h));
    case EstimatorKind::weighted_recovery: return recovery_estimator(u_h, recover_gradient(u_h), &problem.A);
  }
  throw ConfigurationError("unknown estimator kind");
}

std::vector<double> oscillation(const FeFunction& u_h, const ProblemSpec& problem) {
  const Mesh& mesh = u_h.mesh();
  const EdgeTable edges(mesh);
  const auto nt = mesh.triangle_count();
  std::vector<double> local(nt);
  for (int t = 0; t < static_cast<int>(nt); ++t) {
    const Vec2 grad = u_h.gradient(t);
    double mean = 0.0;
    for_each_residual_sample(mesh, problem, grad, t, [&](double w, double r) { mean += w * r; });
    double var = 0.0;
    for_each_residual_sample(mesh, problem, grad, t, [&](double w, double r) { var += w * (r - mean) * (r - mean); });
    const double h = mesh.diameter(t);
    local[static_cast<std::size_t>(t)] = h * h * var * mesh.area(t);
  }
  std::vector<double> osc(local);
  for (const auto& e : edges.edges()) {
    if (e.on_boundary()) continue;
    osc[static_cast<std::size_t>(e.t0)] += local[static_cast<std::size_t>(e.t1)];
    osc[static_cast<std::size_t>(e.t1)] += local[static_cast<std::size_t>(e.t0)];
  }
  for (double& v : osc) v = std::sqrt(v);
  return osc;
}

std::vector<double> raw_density(const Mesh& mesh, const Estimate& est, double indicator_power) {
  if (!(indicator_power > 0.0)) throw DomainError("indicator power must be positive");
  if (est.per_element.size() != mesh.triangle_count())
    throw ConsistencyError("indicator count does not match the mesh");
  const VertexPatches patches(mesh);
  std::vector<double> term(mesh.triangle_count());
  for (int t = 0; t < static_cast<int>(term.size()); ++t) {
    const double h2 = mesh.diameter(t) * mesh.diameter(t);
    const double eta = est.per_element[static_cast<std::size_t>(t)];
    term[static_cast<std::size_t>(t)] = std::pow(eta, indicator_power) / (h2 * h2);
  }
  std::vector<double> rho(mesh.vertex_count());
  for (int v = 0; v < static_cast<int>(rho.size()); ++v) {
    const auto tris = patches.triangles(v);
    if (tris.empty()) throw TopologyError(fmt::format("vertex {} belongs to no triangle", v));
    double sum = 0.0;
    for (int t : tris) sum += term[static_cast<std::size_t>(t)];
    rho[static_cast<std::size_t>(v)] = sum / static_cast<double>(tris.size());
  }
  return rho;
}

DensityField density_from_indicators(std::shared_ptr<const Mesh> mesh, const Estimate& est,
                                     double indicator_power) {
  auto rho = raw_density(*mesh, est, indicator_power);
  double mean = 0.0;
  for (double v : rho) mean += v;
  mean /= static_cast<double>(rho.size());
  for (double& v : rho) {
    const double normalized = mean > 0.0 ? static_cast<double>(static_cast<float>(v / mean)) : 1.0;
    v = std::max(normalized, 1e-8);
  }
  return DensityField(std::move(mesh), std::move(rho));
}

}  // namespace hatafem
