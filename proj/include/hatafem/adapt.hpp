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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hatafem/cvt.hpp"
#include "hatafem/estimate.hpp"
#include "hatafem/fem.hpp"
#include "hatafem/mesh.hpp"

namespace hatafem {

/// Smallest prefix of the indicators sorted by decreasing size (ties by
/// index) whose squares reach theta times the total. Empty when every
/// indicator is zero. Throws DomainError for theta outside (0, 1] or negative
/// indicators.
std::vector<int> dorfler_mark(std::span<const double> indicators, double theta);

/// Newest-vertex bisection of the marked triangles plus conforming closure.
Mesh bisect(const Mesh& mesh, std::span<const int> marked);

/// How an edge midpoint is ranked by midpoint_refine.
enum class MidpointWeight {
  density,  // rho(m)
  energy,   // rho(m) |e|^4
};

/// Indices of the largest weights (ties by index) whose sum stays within half
/// of the total, in decreasing order; at least one index.
std::vector<int> select_midpoints(std::span<const double> weights);

/// Inserts the highest-ranked edge midpoints holding at most half of the
/// total weight (at least one) and re-triangulates.
Mesh midpoint_refine(const Mesh& mesh, const DensityField& density,
                     MidpointWeight weight = MidpointWeight::density);

/// eta ~ c N^-p.
struct FitResult {
  double c = 0.0;
  double p = 0.0;
  double residual = 0.0;
};

/// Least squares on log eta = log c - p log N over (N, eta) pairs. Identical
/// abscissae give p = 0. Throws DomainError for fewer than two points or
/// non-positive data.
FitResult fit_rate(std::span<const std::pair<double, double>> history);

/// ceil((c / tol)^(1 / p)); throws StrategyError for p <= 0.
std::size_t target_vertices(const FitResult& fit, double tol);

struct IterationRecord {
  int k = 0;
  std::size_t vertices = 0;
  double eta = 0.0;
  std::optional<ErrorNorms> error;
  double seconds = 0.0;
  int refinement_rounds = 0;
  std::shared_ptr<const Mesh> mesh;
};

struct AdaptHistory {
  EstimatorKind estimator = EstimatorKind::recovery;
  std::vector<IterationRecord> iterations;
  bool converged = false;
  std::optional<FitResult> fit;
  std::optional<std::size_t> target;

  /// The error norm matching the estimator: the A-weighted energy error for
  /// weighted recovery, the plain gradient error otherwise.
  std::optional<double> error(std::size_t i) const;
  std::optional<double> effectivity(std::size_t i) const;
};

/// Called after every solve with the record just appended.
using IterationObserver =
    std::function<void(const IterationRecord&, const FeFunction& u_h, const Estimate& est)>;

struct StandardAfemOptions {
  double tol = 0.01;
  double theta = 0.3;
  EstimatorKind estimator = EstimatorKind::residual;
  /// Maximum number of solves.
  int max_iters = 80;
  IterationObserver observer;
};

AdaptHistory run_standard_afem(const ProblemSpec& problem, const Mesh& initial,
                               const StandardAfemOptions& options);

struct HatAfemOptions {
  double tol = 0.01;
  std::size_t n0 = 200;
  int lloyd_iters = 20;
  std::uint64_t seed = 1;
  EstimatorKind estimator = EstimatorKind::recovery;
  /// First history entry used by the rate fit at k = 5.
  int fit_first = 1;
  /// Exponent of eta_T in the refinement density.
  double indicator_power = 1.0;
  MidpointWeight midpoint_weight = MidpointWeight::energy;
  /// Upper bound on the fitted vertex target.
  std::size_t max_vertices = 1'000'000;
  IterationObserver observer;
};

/// At most seven solves: a uniform CVDT start, four single refinement rounds,
/// then a rate-fitted number of rounds, then one more round.
AdaptHistory run_hat_afem(const ProblemSpec& problem, const HatAfemOptions& options);

}  // namespace hatafem
