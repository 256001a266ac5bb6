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

#include "hatafem/geometry.hpp"

namespace hatafem::predicates {

// Both predicates evaluate the determinant in double precision and fall back
// to exact rational arithmetic whenever the floating-point result is inside
// its forward error bound. The sign is therefore always exact.

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1 clockwise, 0 collinear.
int orient2d(const Point2& a, const Point2& b, const Point2& c);

/// +1 if d lies strictly inside the circumcircle of the counter-clockwise
/// triangle (a, b, c), -1 if strictly outside, 0 if cocircular.
int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

/// Number of evaluations that needed the exact fallback (diagnostics).
unsigned long long exact_fallback_count();

}  // namespace hatafem::predicates
