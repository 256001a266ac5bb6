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

#include "hatafem/benchmarks.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "hatafem/error.hpp"

namespace hatafem {

std::string_view to_string(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::square_smooth: return "square-smooth";
    case BenchmarkId::lshape: return "lshape";
    case BenchmarkId::inner_layer: return "inner-layer";
    case BenchmarkId::peak: return "peak";
  }
  return "unknown";
}

BenchmarkId parse_benchmark(std::string_view name) {
  for (auto id : {BenchmarkId::square_smooth, BenchmarkId::lshape, BenchmarkId::inner_layer, BenchmarkId::peak})
    if (name == to_string(id)) return id;
  throw ConfigurationError(fmt::format("unknown benchmark '{}'", name));
}

namespace {

using std::numbers::pi;

ProblemSpec square_smooth() {
  ProblemSpec p;
  p.domain = std::make_shared<const PolygonDomain>(PolygonDomain::rectangle(0.0, 0.0, 1.0, 1.0));
  p.exact_u = [](const Point2& x) { return std::cos(pi * x.x) * std::cos(pi * x.y); };
  p.exact_grad_u = [](const Point2& x) {
    return Vec2{-pi * std::sin(pi * x.x) * std::cos(pi * x.y), -pi * std::cos(pi * x.x) * std::sin(pi * x.y)};
  };
  p.f = [](const Point2& x) { return 2.0 * pi * pi * std::cos(pi * x.x) * std::cos(pi * x.y); };
  p.g = p.exact_u;
  return p;
}

double angle(const Point2& x) {
  const double t = std::atan2(x.y, x.x);
  return t < 0.0 ? t + 2.0 * pi : t;
}

ProblemSpec lshape() {
  ProblemSpec p;
  p.domain = std::make_shared<const PolygonDomain>(PolygonDomain::l_shape());
  p.exact_u = [](const Point2& x) {
    const double r = norm(x);
    return r == 0.0 ? 0.0 : std::pow(r, 2.0 / 3.0) * std::sin(2.0 * angle(x) / 3.0);
  };
  p.exact_grad_u = [](const Point2& x) {
    const double r = norm(x);
    const double t = angle(x);
    const double s = 2.0 / 3.0 * std::pow(r, -1.0 / 3.0);
    return Vec2{-s * std::sin(t / 3.0), s * std::cos(t / 3.0)};
  };
  p.f = [](const Point2&) { return 0.0; };
  p.g = p.exact_u;
  return p;
}

ProblemSpec inner_layer() {
  constexpr double S = 60.0;
  constexpr Point2 c{1.25, -0.25};
  constexpr double r0 = pi / 3.0;
  ProblemSpec p;
  p.domain = std::make_shared<const PolygonDomain>(PolygonDomain::rectangle(0.0, 0.0, 1.0, 1.0));
  p.exact_u = [=](const Point2& x) { return std::atan(S * (distance(x, c) - r0)); };
  p.exact_grad_u = [=](const Point2& x) {
    const double r = distance(x, c);
    const double d = S * (r - r0);
    const double ur = S / (1.0 + d * d);
    return (x - c) * (ur / r);
  };
  p.f = [=](const Point2& x) {
    const double r = distance(x, c);
    const double d = S * (r - r0);
    const double q = 1.0 + d * d;
    const double ur = S / q;
    const double urr = -2.0 * S * S * d / (q * q);
    return -(urr + ur / r);
  };
  p.g = p.exact_u;
  return p;
}

ProblemSpec peak() {
  constexpr Point2 c1{-0.5, 0.5};
  constexpr Point2 c2{0.5, -0.5};
  constexpr double eps = 0.01;
  const auto q = [=](const Point2& x, const Point2& c) { return norm2(x - c) + eps; };
  // grad(1/q) = -2 (x - c) / q^2 and lap(1/q) = -4 / q^2 + 8 |x - c|^2 / q^3.
  const auto grad_inv = [=](const Point2& x, const Point2& c) {
    const double v = q(x, c);
    return (x - c) * (-2.0 / (v * v));
  };
  const auto lap_inv = [=](const Point2& x, const Point2& c) {
    const double v = q(x, c);
    return -4.0 / (v * v) + 8.0 * norm2(x - c) / (v * v * v);
  };
  ProblemSpec p;
  p.domain = std::make_shared<const PolygonDomain>(PolygonDomain::rectangle(-1.0, -1.0, 1.0, 1.0));
  p.A = CoefficientField::scalar([](const Point2& x) { return 10.0 * std::cos(x.y); },
                                 [](const Point2& x) { return Vec2{0.0, -10.0 * std::sin(x.y)}; });
  p.exact_u = [=](const Point2& x) { return 1.0 / q(x, c1) - 1.0 / q(x, c2); };
  p.exact_grad_u = [=](const Point2& x) { return grad_inv(x, c1) - grad_inv(x, c2); };
  p.f = [=](const Point2& x) {
    const double a = 10.0 * std::cos(x.y);
    const Vec2 grad_a{0.0, -10.0 * std::sin(x.y)};
    const double lap = lap_inv(x, c1) - lap_inv(x, c2);
    const Vec2 grad = grad_inv(x, c1) - grad_inv(x, c2);
    return -(a * lap + dot(grad_a, grad));
  };
  p.g = p.exact_u;
  return p;
}

}  // namespace

ProblemSpec make_problem(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::square_smooth: return square_smooth();
    case BenchmarkId::lshape: return lshape();
    case BenchmarkId::inner_layer: return inner_layer();
    case BenchmarkId::peak: return peak();
  }
  throw ConfigurationError("unknown benchmark");
}

BenchmarkDefaults benchmark_defaults(BenchmarkId id) {
  switch (id) {
    case BenchmarkId::square_smooth: return {0.01, 289, 25, EstimatorKind::recovery};
    case BenchmarkId::lshape: return {0.01, 216, 21, EstimatorKind::recovery};
    case BenchmarkId::inner_layer: return {0.5, 76, 25, EstimatorKind::recovery};
    case BenchmarkId::peak: return {20.0, 280, 25, EstimatorKind::weighted_recovery};
  }
  throw ConfigurationError("unknown benchmark");
}

}  // namespace hatafem
