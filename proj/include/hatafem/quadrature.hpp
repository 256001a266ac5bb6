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

#include <array>
#include <span>

#include "hatafem/geometry.hpp"

namespace hatafem::quad {

/// Barycentric point with a weight; weights of a rule sum to 1.
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};

/// Edge midpoints, exact for quadratics.
std::span<const QuadPoint> edge_midpoint();
/// 6-point rule, exact for degree 4.
std::span<const QuadPoint> degree4();
/// 12-point rule, exact for degree 6.
std::span<const QuadPoint> degree6();

inline Point2 map(const QuadPoint& q, const Point2& a, const Point2& b, const Point2& c) {
  return a * q.bary[0] + b * q.bary[1] + c * q.bary[2];
}

/// Integral of f over the triangle (a, b, c).
template <class F>
double integrate(std::span<const QuadPoint> rule, const Point2& a, const Point2& b, const Point2& c,
                 F&& f) {
  double sum = 0.0;
  for (const auto& q : rule) sum += q.weight * f(map(q, a, b, c));
  return sum * 0.5 * std::abs(signed_area2(a, b, c));
}

}  // namespace hatafem::quad
