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

#include <algorithm>
#include <array>
#include <cmath>

namespace hatafem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Point2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

/// Vectors and points share a representation.
using Vec2 = Point2;

constexpr Point2 operator+(Point2 a, const Point2& b) { return a += b; }
constexpr Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
constexpr Point2 operator*(Point2 a, double s) { return a *= s; }
constexpr Point2 operator*(double s, Point2 a) { return a *= s; }
constexpr Point2 operator-(const Point2& a) { return {-a.x, -a.y}; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2& a) { return dot(a, a); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
constexpr Point2 midpoint(const Point2& a, const Point2& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
constexpr double signed_area2(const Point2& a, const Point2& b, const Point2& c) {
  return cross(b - a, c - a);
}

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct SymMat2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  static constexpr SymMat2 identity(double s = 1.0) { return {s, 0.0, s}; }

  constexpr Vec2 operator*(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y};
  }
  constexpr double det() const { return a11 * a22 - a12 * a12; }
  constexpr bool positive_definite() const { return a11 > 0.0 && det() > 0.0; }
};

struct BoundingBox {
  Point2 lo{};
  Point2 hi{};

  void expand(const Point2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double extent() const { return std::max(width(), height()); }
  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol && p.y <= hi.y + tol;
  }
};

/// Gradients of the three P1 hat functions on triangle (a, b, c).
inline std::array<Vec2, 3> p1_gradients(const Point2& a, const Point2& b, const Point2& c) {
  const double inv = 1.0 / signed_area2(a, b, c);
  return {Vec2{(b.y - c.y) * inv, (c.x - b.x) * inv},
          Vec2{(c.y - a.y) * inv, (a.x - c.x) * inv},
          Vec2{(a.y - b.y) * inv, (b.x - a.x) * inv}};
}

/// Barycentric coordinates of p with respect to (a, b, c).
inline std::array<double, 3> barycentric(const Point2& p, const Point2& a, const Point2& b,
                                         const Point2& c) {
  const double inv = 1.0 / signed_area2(a, b, c);
  const double l1 = signed_area2(a, p, c) * inv;
  const double l2 = signed_area2(a, b, p) * inv;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace hatafem
