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
#include <functional>
#include <memory>
#include <vector>

#include "hatafem/mesh.hpp"

namespace hatafem {

using ScalarFunction = std::function<double(const Point2&)>;
using VectorFunction = std::function<Vec2(const Point2&)>;

/// Symmetric positive-definite diffusion coefficient A(x).
class CoefficientField {
 public:
  /// A = I.
  static CoefficientField identity();
  /// A = a(x) I. grad_a, when given, is the analytic row divergence of A.
  static CoefficientField scalar(ScalarFunction a, VectorFunction grad_a = {});
  /// General symmetric A. div, when given, is (d1 a11 + d2 a21, d1 a12 + d2 a22).
  static CoefficientField matrix(std::function<SymMat2(const Point2&)> a, VectorFunction div = {});

  /// Throws CoefficientError when A(p) is not positive definite.
  SymMat2 evaluate(const Point2& p) const;
  bool is_constant() const { return constant_; }
  bool has_divergence() const { return static_cast<bool>(div_); }
  /// Row divergence of A; central differences with step 1e-6 when no analytic
  /// form was supplied, zero for constant A.
  Vec2 divergence(const Point2& p) const;

 private:
  std::function<SymMat2(const Point2&)> eval_;
  VectorFunction div_;
  bool constant_ = false;
};

/// -div(A grad u) = f in the domain, u = g on its boundary.
struct ProblemSpec {
  std::shared_ptr<const PolygonDomain> domain;
  CoefficientField A = CoefficientField::identity();
  ScalarFunction f;
  ScalarFunction g;
  ScalarFunction exact_u;
  VectorFunction exact_grad_u;

  /// Throws ConfigurationError on missing pieces.
  void check() const;
  bool has_exact_gradient() const { return static_cast<bool>(exact_grad_u); }
};

/// Continuous piecewise-linear field with one or two components per vertex.
class FeFunction {
 public:
  FeFunction(std::shared_ptr<const Mesh> mesh, int components, std::vector<double> values);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int components() const { return components_; }
  const std::vector<double>& values() const { return values_; }

  double value(int v, int component = 0) const {
    return values_[static_cast<std::size_t>(v) * static_cast<std::size_t>(components_) +
                   static_cast<std::size_t>(component)];
  }
  /// Both components at vertex v of a 2-component field.
  Vec2 vector_value(int v) const { return {value(v, 0), value(v, 1)}; }
  /// Interpolant inside triangle t at barycentric coordinates bary.
  double evaluate(int t, const std::array<double, 3>& bary, int component = 0) const;
  Vec2 evaluate_vector(int t, const std::array<double, 3>& bary) const;
  /// Constant gradient of a scalar field on triangle t.
  Vec2 gradient(int t) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int components_;
  std::vector<double> values_;
};

/// Compressed sparse rows with sorted column indices.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::int32_t> row_ptr;
  std::vector<std::int32_t> cols;
  std::vector<double> vals;

  /// Entry (i, j), zero when not stored.
  double at(int i, int j) const;
  void multiply(const double* x, double* y) const;
};

/// Assembled stiffness matrix and load vector before boundary conditions,
/// with the Dirichlet mask and prescribed values.
struct SparseSystem {
  std::shared_ptr<const Mesh> mesh;
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<std::uint8_t> constrained;
  std::vector<double> prescribed;
};

SparseSystem assemble(std::shared_ptr<const Mesh> mesh, const ProblemSpec& problem);

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned CG on the free vertices, relative residual 1e-10,
/// at most 10 N iterations; throws ConvergenceError past the cap.
FeFunction solve(const SparseSystem& system, SolveStats* stats = nullptr);

struct ErrorNorms {
  double grad_l2 = 0.0;
  double weighted_energy = 0.0;
};

/// Gradient errors against the exact solution; throws CapabilityError
/// without an exact gradient.
ErrorNorms error_norms(const FeFunction& u_h, const ProblemSpec& problem);

}  // namespace hatafem
