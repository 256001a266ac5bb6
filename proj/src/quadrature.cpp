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

#include "hatafem/quadrature.hpp"

#include <algorithm>
#include <vector>

namespace hatafem::quad {

namespace {

// All distinct permutations of (a, b, c) with weight w.
void orbit(std::vector<QuadPoint>& out, double a, double b, double c, double w) {
  std::array<double, 3> v{a, b, c};
  std::sort(v.begin(), v.end());
  do out.push_back({v, w});
  while (std::next_permutation(v.begin(), v.end()));
}

std::vector<QuadPoint> make_degree4() {
  std::vector<QuadPoint> r;
  orbit(r, 0.445948490915965, 0.445948490915965, 0.108103018168070, 0.223381589678011);
  orbit(r, 0.091576213509771, 0.091576213509771, 0.816847572980459, 0.109951743655322);
  return r;
}

std::vector<QuadPoint> make_degree6() {
  std::vector<QuadPoint> r;
  orbit(r, 0.249286745170910, 0.249286745170910, 0.501426509658179, 0.116786275726379);
  orbit(r, 0.063089014491502, 0.063089014491502, 0.873821971016996, 0.050844906370207);
  orbit(r, 0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374);
  return r;
}

}  // namespace

std::span<const QuadPoint> edge_midpoint() {
  static const std::array<QuadPoint, 3> rule = {QuadPoint{{0.0, 0.5, 0.5}, 1.0 / 3.0},
                                                QuadPoint{{0.5, 0.0, 0.5}, 1.0 / 3.0},
                                                QuadPoint{{0.5, 0.5, 0.0}, 1.0 / 3.0}};
  return rule;
}

std::span<const QuadPoint> degree4() {
  static const std::vector<QuadPoint> rule = make_degree4();
  return rule;
}

std::span<const QuadPoint> degree6() {
  static const std::vector<QuadPoint> rule = make_degree6();
  return rule;
}

}  // namespace hatafem::quad
