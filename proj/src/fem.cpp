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

#include "hatafem/fem.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "hatafem/error.hpp"
#include "hatafem/kernels.hpp"
#include "hatafem/quadrature.hpp"

namespace hatafem {

CoefficientField CoefficientField::identity() {
  CoefficientField c;
  c.eval_ = [](const Point2&) { return SymMat2::identity(); };
  c.div_ = [](const Point2&) { return Vec2{}; };
  c.constant_ = true;
  return c;
}

CoefficientField CoefficientField::scalar(ScalarFunction a, VectorFunction grad_a) {
  CoefficientField c;
  c.eval_ = [a = std::move(a)](const Point2& p) { return SymMat2::identity(a(p)); };
  c.div_ = std::move(grad_a);
  return c;
}

CoefficientField CoefficientField::matrix(std::function<SymMat2(const Point2&)> a, VectorFunction div) {
  CoefficientField c;
  c.eval_ = std::move(a);
  c.div_ = std::move(div);
  return c;
}

SymMat2 CoefficientField::evaluate(const Point2& p) const {
  const SymMat2 m = eval_(p);
  if (!m.positive_definite() || !std::isfinite(m.a11 + m.a12 + m.a22))
    throw CoefficientError(fmt::format("coefficient is not positive definite at ({}, {})", p.x, p.y));
  return m;
}

Vec2 CoefficientField::divergence(const Point2& p) const {
  if (constant_) return {};
  if (div_) return div_(p);
  constexpr double h = 1e-6;
  const SymMat2 xp = eval_({p.x + h, p.y}), xm = eval_({p.x - h, p.y});
  const SymMat2 yp = eval_({p.x, p.y + h}), ym = eval_({p.x, p.y - h});
  const double inv = 1.0 / (2.0 * h);
  return {(xp.a11 - xm.a11) * inv + (yp.a12 - ym.a12) * inv,
          (xp.a12 - xm.a12) * inv + (yp.a22 - ym.a22) * inv};
}

void ProblemSpec::check() const {
  if (!domain) throw ConfigurationError("problem has no domain");
  if (!f) throw ConfigurationError("problem has no source term");
  if (!g) throw ConfigurationError("problem has no boundary data");
  if (exact_u && !exact_grad_u) throw ConfigurationError("exact solution given without its gradient");
}

FeFunction::FeFunction(std::shared_ptr<const Mesh> mesh, int components, std::vector<double> values)
    : mesh_(std::move(mesh)), components_(components), values_(std::move(values)) {
  if (components_ != 1 && components_ != 2) throw ConfigurationError("a field has 1 or 2 components");
  if (values_.size() != mesh_->vertex_count() * static_cast<std::size_t>(components_))
    throw ConsistencyError(fmt::format("{} values for {} vertices and {} components", values_.size(),
                                       mesh_->vertex_count(), components_));
}

double FeFunction::evaluate(int t, const std::array<double, 3>& bary, int component) const {
  const auto& tri = mesh_->triangle(t);
  return bary[0] * value(tri[0], component) + bary[1] * value(tri[1], component) +
         bary[2] * value(tri[2], component);
}

Vec2 FeFunction::evaluate_vector(int t, const std::array<double, 3>& bary) const {
  return {evaluate(t, bary, 0), evaluate(t, bary, 1)};
}

Vec2 FeFunction::gradient(int t) const {
  const auto [a, b, c] = mesh_->corners(t);
  const auto g = p1_gradients(a, b, c);
  const auto& tri = mesh_->triangle(t);
  Vec2 out{};
  for (int k = 0; k < 3; ++k) out += g[static_cast<std::size_t>(k)] * value(tri[static_cast<std::size_t>(k)]);
  return out;
}

double CsrMatrix::at(int i, int j) const {
  const auto* b = cols.data() + row_ptr[static_cast<std::size_t>(i)];
  const auto* e = cols.data() + row_ptr[static_cast<std::size_t>(i) + 1];
  const auto* it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return 0.0;
  return vals[static_cast<std::size_t>(it - cols.data())];
}

void CsrMatrix::multiply(const double* x, double* y) const {
  kernels::active().spmv(row_ptr.data(), cols.data(), vals.data(), x, y, rows);
}

namespace {

CsrMatrix sparsity(const Mesh& mesh) {
  const auto n = mesh.vertex_count();
  std::vector<std::vector<std::int32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[i].push_back(static_cast<std::int32_t>(i));
  for (const auto& t : mesh.triangles())
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) adj[static_cast<std::size_t>(t[static_cast<std::size_t>(a)])].push_back(t[static_cast<std::size_t>(b)]);
  CsrMatrix m;
  m.rows = n;
  m.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = adj[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<std::int32_t>(row.size());
    m.cols.insert(m.cols.end(), row.begin(), row.end());
  }
  m.vals.assign(m.cols.size(), 0.0);
  return m;
}

double& entry(CsrMatrix& m, int i, int j) {
  auto* b = m.cols.data() + m.row_ptr[static_cast<std::size_t>(i)];
  auto* e = m.cols.data() + m.row_ptr[static_cast<std::size_t>(i) + 1];
  return m.vals[static_cast<std::size_t>(std::lower_bound(b, e, j) - m.cols.data())];
}

}  // namespace

SparseSystem assemble(std::shared_ptr<const Mesh> mesh_ptr, const ProblemSpec& problem) {
  problem.check();
  const Mesh& mesh = *mesh_ptr;
  SparseSystem sys;
  sys.matrix = sparsity(mesh);
  sys.rhs.assign(mesh.vertex_count(), 0.0);
  const auto rule = quad::edge_midpoint();
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    const auto& tri = mesh.triangle(t);
    const double area = mesh.area(t);
    const auto grads = p1_gradients(a, b, c);
    SymMat2 abar{};
    std::array<double, 3> load{};
    for (const auto& q : rule) {
      const Point2 x = quad::map(q, a, b, c);
      const SymMat2 m = problem.A.evaluate(x);
      abar.a11 += q.weight * m.a11;
      abar.a12 += q.weight * m.a12;
      abar.a22 += q.weight * m.a22;
      const double fx = problem.f(x);
      for (int i = 0; i < 3; ++i) load[static_cast<std::size_t>(i)] += q.weight * fx * q.bary[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < 3; ++i) {
      const Vec2 agi = abar * grads[static_cast<std::size_t>(i)];
      for (int j = 0; j < 3; ++j)
        entry(sys.matrix, tri[static_cast<std::size_t>(i)], tri[static_cast<std::size_t>(j)]) +=
            area * dot(grads[static_cast<std::size_t>(j)], agi);
      sys.rhs[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])] += area * load[static_cast<std::size_t>(i)];
    }
  }
  sys.constrained.assign(mesh.vertex_count(), 0);
  sys.prescribed.assign(mesh.vertex_count(), 0.0);
  for (int v = 0; v < static_cast<int>(mesh.vertex_count()); ++v) {
    if (!mesh.tag(v).on_boundary()) continue;
    sys.constrained[static_cast<std::size_t>(v)] = 1;
    sys.prescribed[static_cast<std::size_t>(v)] = problem.g(mesh.vertex(v));
  }
  sys.mesh = std::move(mesh_ptr);
  return sys;
}

FeFunction solve(const SparseSystem& sys, SolveStats* stats) {
  const auto n = sys.matrix.rows;
  std::vector<std::int32_t> free_index(n, -1);
  std::int32_t nf = 0;
  for (std::size_t v = 0; v < n; ++v)
    if (!sys.constrained[v]) free_index[v] = nf++;

  // Eliminate constrained columns into the right-hand side.
  CsrMatrix k;
  k.rows = static_cast<std::size_t>(nf);
  k.row_ptr.push_back(0);
  std::vector<double> b(static_cast<std::size_t>(nf), 0.0);
  std::vector<double> inv_diag(static_cast<std::size_t>(nf), 1.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = free_index[v];
    if (r < 0) continue;
    double rhs = sys.rhs[v];
    for (auto e = sys.matrix.row_ptr[v]; e < sys.matrix.row_ptr[v + 1]; ++e) {
      const auto col = static_cast<std::size_t>(sys.matrix.cols[static_cast<std::size_t>(e)]);
      const double val = sys.matrix.vals[static_cast<std::size_t>(e)];
      if (free_index[col] < 0) {
        rhs -= val * sys.prescribed[col];
      } else {
        k.cols.push_back(free_index[col]);
        k.vals.push_back(val);
        if (col == v) inv_diag[static_cast<std::size_t>(r)] = 1.0 / val;
      }
    }
    k.row_ptr.push_back(static_cast<std::int32_t>(k.cols.size()));
    b[static_cast<std::size_t>(r)] = rhs;
  }

  const auto& kt = kernels::active();
  const auto m = static_cast<std::size_t>(nf);
  std::vector<double> x(m, 0.0), r = b, z(m), p(m), q(m);
  const double bnorm = std::sqrt(kt.dot(b.data(), b.data(), m));
  int iterations = 0;
  double rel = 0.0;
  if (bnorm > 0.0) {
    constexpr double tol = 1e-12;
    const int cap = std::max(10, 10 * nf);
    kt.mul(inv_diag.data(), r.data(), z.data(), m);
    p = z;
    double rz = kt.dot(r.data(), z.data(), m);
    rel = 1.0;
    while (rel > tol) {
      if (iterations >= cap)
        throw ConvergenceError(fmt::format("CG did not converge in {} iterations (relative residual {:.3e})",
                                           cap, rel),
                               rel);
      kt.spmv(k.row_ptr.data(), k.cols.data(), k.vals.data(), p.data(), q.data(), m);
      const double alpha = rz / kt.dot(p.data(), q.data(), m);
      kt.axpy(alpha, p.data(), x.data(), m);
      kt.axpy(-alpha, q.data(), r.data(), m);
      rel = std::sqrt(kt.dot(r.data(), r.data(), m)) / bnorm;
      ++iterations;
      if (rel <= tol) break;
      kt.mul(inv_diag.data(), r.data(), z.data(), m);
      const double rz_new = kt.dot(r.data(), z.data(), m);
      kt.xpay(z.data(), rz_new / rz, p.data(), m);
      rz = rz_new;
    }
  }
  if (stats) *stats = {iterations, rel};

  std::vector<double> u(n);
  for (std::size_t v = 0; v < n; ++v)
    u[v] = free_index[v] < 0 ? sys.prescribed[v] : x[static_cast<std::size_t>(free_index[v])];
  return FeFunction(sys.mesh, 1, std::move(u));
}

ErrorNorms error_norms(const FeFunction& u_h, const ProblemSpec& problem) {
  if (!problem.has_exact_gradient()) throw CapabilityError("error norms need the exact gradient");
  const Mesh& mesh = u_h.mesh();
  double l2 = 0.0, energy = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    const Vec2 gh = u_h.gradient(t);
    const double area = mesh.area(t);
    for (const auto& q : quad::degree4()) {
      const Point2 x = quad::map(q, a, b, c);
      const Vec2 e = problem.exact_grad_u(x) - gh;
      l2 += area * q.weight * norm2(e);
      energy += area * q.weight * dot(e, problem.A.evaluate(x) * e);
    }
  }
  return {std::sqrt(l2), std::sqrt(energy)};
}

}  // namespace hatafem
