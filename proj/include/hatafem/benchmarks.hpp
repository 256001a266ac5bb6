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

#include <cstddef>
#include <string_view>

#include "hatafem/estimate.hpp"
#include "hatafem/fem.hpp"

namespace hatafem {

enum class BenchmarkId { square_smooth, lshape, inner_layer, peak };

std::string_view to_string(BenchmarkId id);
/// Throws ConfigurationError for unknown names.
BenchmarkId parse_benchmark(std::string_view name);

/// Problem with exact solution and gradient.
///
///   square-smooth  u = cos(pi x) cos(pi y) on (0,1)^2
///   lshape         u = r^(2/3) sin(2 theta / 3), theta in [0, 2 pi), on (-1,1)^2 minus (0,1)x(-1,0)
///   inner-layer    u = atan(60 (|x - (1.25, -0.25)| - pi / 3)) on (0,1)^2
///   peak           A = 10 cos(y) I, u = 1/q1 - 1/q2 on (-1,1)^2,
///                  q1 = |x - (-0.5, 0.5)|^2 + 0.01, q2 = |x - (0.5, -0.5)|^2 + 0.01
ProblemSpec make_problem(BenchmarkId id);

struct BenchmarkDefaults {
  double tol;
  std::size_t hat_n0;
  std::size_t standard_n0;
  EstimatorKind hat_estimator;
};

BenchmarkDefaults benchmark_defaults(BenchmarkId id);

}  // namespace hatafem
