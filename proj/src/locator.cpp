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

#include "hatafem/locator.hpp"

#include <algorithm>

namespace hatafem {

namespace {
constexpr std::size_t kLeafSize = 8;
constexpr int kMaxDepth = 24;

bool overlaps(const BoundingBox& a, const BoundingBox& b) {
  return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
}
}  // namespace

PointLocator::PointLocator(const Mesh& mesh) : mesh_(&mesh) {
  const auto nt = mesh.triangle_count();
  tri_boxes_.resize(nt);
  BoundingBox root = mesh.domain().bbox();
  for (int t = 0; t < static_cast<int>(nt); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    BoundingBox box{a, a};
    box.expand(b);
    box.expand(c);
    tri_boxes_[static_cast<std::size_t>(t)] = box;
    root.expand(box.lo);
    root.expand(box.hi);
  }
  std::vector<int> all(nt);
  for (std::size_t t = 0; t < nt; ++t) all[t] = static_cast<int>(t);
  nodes_.push_back(Node{root});
  build(0, std::move(all), 0);
}

void PointLocator::build(int node, std::vector<int> items, int depth) {
  if (items.size() <= kLeafSize || depth >= kMaxDepth) {
    nodes_[static_cast<std::size_t>(node)].begin = static_cast<int>(items_.size());
    items_.insert(items_.end(), items.begin(), items.end());
    nodes_[static_cast<std::size_t>(node)].end = static_cast<int>(items_.size());
    return;
  }
  const BoundingBox box = nodes_[static_cast<std::size_t>(node)].box;
  const Point2 mid = midpoint(box.lo, box.hi);
  const std::array<BoundingBox, 4> quads = {
      BoundingBox{box.lo, mid}, BoundingBox{{mid.x, box.lo.y}, {box.hi.x, mid.y}},
      BoundingBox{{box.lo.x, mid.y}, {mid.x, box.hi.y}}, BoundingBox{mid, box.hi}};

  std::array<std::vector<int>, 4> parts;
  for (int t : items)
    for (int q = 0; q < 4; ++q)
      if (overlaps(quads[static_cast<std::size_t>(q)], tri_boxes_[static_cast<std::size_t>(t)]))
        parts[static_cast<std::size_t>(q)].push_back(t);

  // Splitting is pointless when every item straddles every quadrant.
  const bool useless = std::all_of(parts.begin(), parts.end(),
                                   [&](const auto& p) { return p.size() == items.size(); });
  if (useless) {
    build(node, std::move(items), kMaxDepth);
    return;
  }

  const int first = static_cast<int>(nodes_.size());
  nodes_[static_cast<std::size_t>(node)].child = first;
  for (int q = 0; q < 4; ++q) nodes_.push_back(Node{quads[static_cast<std::size_t>(q)]});
  for (int q = 0; q < 4; ++q) build(first + q, std::move(parts[static_cast<std::size_t>(q)]), depth + 1);
}

std::optional<PointLocator::Hit> PointLocator::locate(const Point2& p, double tol) const {
  int node = 0;
  if (!nodes_[0].box.contains(p, tol * nodes_[0].box.extent())) return std::nullopt;
  while (nodes_[static_cast<std::size_t>(node)].child >= 0) {
    const auto& n = nodes_[static_cast<std::size_t>(node)];
    const Point2 mid = midpoint(n.box.lo, n.box.hi);
    node = n.child + (p.x >= mid.x ? 1 : 0) + (p.y >= mid.y ? 2 : 0);
  }
  const auto& leaf = nodes_[static_cast<std::size_t>(node)];
  std::optional<Hit> best;
  double best_min = -tol;
  for (int i = leaf.begin; i < leaf.end; ++i) {
    const int t = items_[static_cast<std::size_t>(i)];
    const auto& box = tri_boxes_[static_cast<std::size_t>(t)];
    if (!box.contains(p, tol * box.extent())) continue;
    const auto [a, b, c] = mesh_->corners(t);
    const auto bary = barycentric(p, a, b, c);
    const double m = std::min({bary[0], bary[1], bary[2]});
    if (m >= best_min) {
      best_min = m;
      best = Hit{t, bary};
      if (m >= 0.0) break;
    }
  }
  return best;
}

}  // namespace hatafem
