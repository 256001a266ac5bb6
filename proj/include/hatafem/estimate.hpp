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
#include <string_view>
#include <vector>

#include "hatafem/cvt.hpp"
#include "hatafem/fem.hpp"

namespace hatafem {

enum class EstimatorKind { residual, recovery, weighted_recovery };

std::string_view to_string(EstimatorKind kind);
/// Throws ConfigurationError for unknown names.
EstimatorKind parse_estimator(std::string_view name);

struct Estimate {
  EstimatorKind kind = EstimatorKind::recovery;
  std::vector<double> per_element;
  double global = 0.0;
};

/// Least-squares patch recovery of the gradient of a scalar P1 field; the
/// result has two components per vertex.
FeFunction recover_gradient(const FeFunction& u_h);

/// Element residual plus interior flux jumps. Without an analytic divergence
/// of a non-constant A, allow_numeric_divergence selects central differences;
/// otherwise ConfigurationError is thrown.
Estimate residual_estimator(const FeFunction& u_h, const ProblemSpec& problem,
                            bool allow_numeric_divergence = true);

/// ||G - grad u_h|| per element, weighted by A when weight is given.
Estimate recovery_estimator(const FeFunction& u_h, const FeFunction& G,
                            const CoefficientField* weight = nullptr);

/// Convenience dispatcher used by the adaptive drivers.
Estimate estimate(const FeFunction& u_h, const ProblemSpec& problem, EstimatorKind kind);

/// Data oscillation over each element and its edge neighbours.
std::vector<double> oscillation(const FeFunction& u_h, const ProblemSpec& problem);

/// Mean of eta_T^q / h_T^4 over the triangles around each vertex, before any
/// normalization. q is `indicator_power`.
std::vector<double> raw_density(const Mesh& mesh, const Estimate& est, double indicator_power = 2.0);

/// raw_density normalized to mean 1, rounded to single precision and floored
/// at 1e-8.
DensityField density_from_indicators(std::shared_ptr<const Mesh> mesh, const Estimate& est,
                                     double indicator_power = 2.0);

}  // namespace hatafem
