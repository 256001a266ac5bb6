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
#include <optional>
#include <vector>

#include "hatafem/mesh.hpp"

namespace hatafem {

/// Quadtree over triangle bounding boxes. The mesh must outlive the locator.
class PointLocator {
 public:
  struct Hit {
    int triangle = -1;
    std::array<double, 3> bary{};
  };

  explicit PointLocator(const Mesh& mesh);

  /// Containing triangle, accepting barycentric coordinates down to -tol.
  /// Points outside every triangle give nullopt.
  std::optional<Hit> locate(const Point2& p, double tol = 1e-10) const;

 private:
  struct Node {
    BoundingBox box;
    int child = -1;  // index of the first of four children, -1 for leaves
    int begin = 0;
    int end = 0;
  };

  void build(int node, std::vector<int> items, int depth);

  const Mesh* mesh_;
  std::vector<Node> nodes_;
  std::vector<int> items_;
  std::vector<BoundingBox> tri_boxes_;
};

}  // namespace hatafem
