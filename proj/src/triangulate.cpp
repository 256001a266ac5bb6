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

#include "hatafem/triangulate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "hatafem/error.hpp"
#include "hatafem/predicates.hpp"

namespace hatafem {

namespace {

using predicates::incircle;
using predicates::orient2d;

constexpr double kDuplicateTol = 1e-12;

std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

void check_duplicates(std::span<const Point2> pts) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    const auto& q = pts[static_cast<std::size_t>(j)];
    return p.x < q.x || (p.x == q.x && (p.y < q.y || (p.y == q.y && i < j)));
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& p = pts[static_cast<std::size_t>(order[k])];
    for (std::size_t m = k + 1; m < order.size(); ++m) {
      const auto& q = pts[static_cast<std::size_t>(order[m])];
      if (q.x - p.x > kDuplicateTol) break;
      if (distance(p, q) <= kDuplicateTol)
        throw DuplicatePointError(std::min(order[k], order[m]), std::max(order[k], order[m]));
    }
  }
}

// Incremental Delaunay triangulation with a finite enclosing triangle,
// constraint recovery by flips and constrained Lawson legalization.
class Triangulator {
 public:
  explicit Triangulator(std::vector<Point2> points) : pts_(std::move(points)) {
    n_real_ = static_cast<int>(pts_.size());
    BoundingBox box{pts_[0], pts_[0]};
    for (const auto& p : pts_) box.expand(p);
    const Point2 c = midpoint(box.lo, box.hi);
    const double r = std::max(box.extent(), 1e-300);
    pts_.push_back({c.x - 30.0 * r, c.y - 10.0 * r});
    pts_.push_back({c.x + 30.0 * r, c.y - 10.0 * r});
    pts_.push_back({c.x, c.y + 30.0 * r});
    vtri_.assign(pts_.size(), -1);
    tris_.push_back(Tri{{n_real_, n_real_ + 1, n_real_ + 2}, {-1, -1, -1}});
    for (int k = 0; k < 3; ++k) vtri_[static_cast<std::size_t>(n_real_ + k)] = 0;
  }

  void insert_all() {
    const int order = 16;
    BoundingBox box{pts_[0], pts_[0]};
    for (int i = 0; i < n_real_; ++i) box.expand(pts_[static_cast<std::size_t>(i)]);
    const double scale = ((1u << order) - 1) / std::max(box.extent(), 1e-300);
    std::vector<std::pair<std::uint64_t, int>> keys(static_cast<std::size_t>(n_real_));
    for (int i = 0; i < n_real_; ++i) {
      const auto& p = pts_[static_cast<std::size_t>(i)];
      const auto x = static_cast<std::uint32_t>((p.x - box.lo.x) * scale);
      const auto y = static_cast<std::uint32_t>((p.y - box.lo.y) * scale);
      keys[static_cast<std::size_t>(i)] = {hilbert_index(x, y, order), i};
    }
    std::sort(keys.begin(), keys.end());
    for (const auto& [key, i] : keys) insert(i);
  }

  // Forces segment (a, b) into the triangulation and marks it constrained.
  void enforce_segment(int a, int b) {
    if (find_edge(a, b)) {
      constrained_.insert(edge_key(a, b));
      return;
    }
    std::deque<std::pair<int, int>> queue;
    for (const auto& e : crossing_edges(a, b)) queue.push_back(e);
    const std::size_t limit = 100 * (queue.size() + 1) * (queue.size() + 1);
    std::size_t steps = 0;
    const Point2& pa = pt(a);
    const Point2& pb = pt(b);
    while (!queue.empty()) {
      if (++steps > limit)
        throw BoundaryRecoveryError(fmt::format("cannot recover segment ({}, {})", a, b));
      const auto [c, d] = queue.front();
      queue.pop_front();
      const auto loc = find_edge(c, d);
      if (!loc) continue;
      const auto [t, i] = *loc;
      const int u = tris_[static_cast<std::size_t>(t)].nb[static_cast<std::size_t>(i)];
      const auto& tr = tris_[static_cast<std::size_t>(t)];
      const int w = tr.v[static_cast<std::size_t>(i)];
      const int ea = tr.v[static_cast<std::size_t>((i + 1) % 3)];
      const int eb = tr.v[static_cast<std::size_t>((i + 2) % 3)];
      const int z = opposite(u, eb, ea);
      if (orient2d(pt(w), pt(z), pt(ea)) * orient2d(pt(w), pt(z), pt(eb)) >= 0) {
        queue.push_back({c, d});
        continue;
      }
      flip(t, i);
      if (w != a && w != b && z != a && z != b && crosses(pt(w), pt(z), pa, pb)) queue.push_back({w, z});
    }
    constrained_.insert(edge_key(a, b));
  }

  void legalize() {
    std::vector<std::array<int, 3>> stack;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      for (int i = 0; i < 3; ++i) {
        const auto& tr = tris_[static_cast<std::size_t>(t)];
        if (tr.nb[static_cast<std::size_t>(i)] > t)
          stack.push_back({t, tr.v[static_cast<std::size_t>((i + 1) % 3)],
                           tr.v[static_cast<std::size_t>((i + 2) % 3)]});
      }
    while (!stack.empty()) {
      const auto [t, a, b] = stack.back();
      stack.pop_back();
      const auto& tr = tris_[static_cast<std::size_t>(t)];
      int i = -1;
      for (int k = 0; k < 3; ++k)
        if (tr.v[static_cast<std::size_t>((k + 1) % 3)] == a && tr.v[static_cast<std::size_t>((k + 2) % 3)] == b) i = k;
      if (i < 0) continue;
      const int u = tr.nb[static_cast<std::size_t>(i)];
      if (u < 0 || constrained_.count(edge_key(a, b))) continue;
      const int w = tr.v[static_cast<std::size_t>(i)];
      const int z = opposite(u, b, a);
      if (!should_flip(w, a, b, z)) continue;
      flip(t, i);
      stack.push_back({t, a, z});
      stack.push_back({t, w, a});
      stack.push_back({u, b, w});
      stack.push_back({u, z, b});
    }
  }

  // Triangles made only of real vertices, passing `keep`.
  template <class Keep>
  std::vector<Triangle> collect(Keep keep) const {
    std::vector<Triangle> out;
    for (const auto& tr : tris_) {
      if (tr.v[0] >= n_real_ || tr.v[1] >= n_real_ || tr.v[2] >= n_real_) continue;
      if (!keep(tr.v)) continue;
      out.push_back(tr.v);
    }
    std::sort(out.begin(), out.end(), [](const Triangle& x, const Triangle& y) {
      return std::min({x[0], x[1], x[2]}) < std::min({y[0], y[1], y[2]}) ||
             (std::min({x[0], x[1], x[2]}) == std::min({y[0], y[1], y[2]}) && x < y);
    });
    return out;
  }

  const Point2& pt(int v) const { return pts_[static_cast<std::size_t>(v)]; }

 private:
  struct Tri {
    Triangle v;
    std::array<int, 3> nb;  // nb[i] lies across the edge opposite v[i]
  };

  static bool crosses(const Point2& p, const Point2& q, const Point2& a, const Point2& b) {
    return orient2d(p, q, a) * orient2d(p, q, b) < 0 && orient2d(a, b, p) * orient2d(a, b, q) < 0;
  }

  bool real(int v) const { return v < n_real_; }

  bool should_flip(int w, int a, int b, int z) const {
    const int s = incircle(pt(w), pt(a), pt(b), pt(z));
    if (s > 0) return true;
    if (s < 0) return false;
    if (!real(w) || !real(a) || !real(b) || !real(z)) return false;
    if (orient2d(pt(w), pt(z), pt(a)) * orient2d(pt(w), pt(z), pt(b)) >= 0) return false;
    return std::min(w, z) < std::min(a, b);
  }

  // Vertex of triangle u opposite the directed edge (from, to).
  int opposite(int u, int from, int to) const {
    const auto& tr = tris_[static_cast<std::size_t>(u)];
    for (int k = 0; k < 3; ++k)
      if (tr.v[static_cast<std::size_t>((k + 1) % 3)] == from && tr.v[static_cast<std::size_t>((k + 2) % 3)] == to)
        return tr.v[static_cast<std::size_t>(k)];
    throw TopologyError("corrupted triangle adjacency");
  }

  void replace_neighbor(int t, int from, int to) {
    if (t < 0) return;
    for (int& n : tris_[static_cast<std::size_t>(t)].nb)
      if (n == from) {
        n = to;
        return;
      }
  }

  void flip(int t, int i) {
    Tri& tt = tris_[static_cast<std::size_t>(t)];
    const int w = tt.v[static_cast<std::size_t>(i)];
    const int a = tt.v[static_cast<std::size_t>((i + 1) % 3)];
    const int b = tt.v[static_cast<std::size_t>((i + 2) % 3)];
    const int u = tt.nb[static_cast<std::size_t>(i)];
    Tri& uu = tris_[static_cast<std::size_t>(u)];
    int j = -1;
    for (int k = 0; k < 3; ++k)
      if (uu.v[static_cast<std::size_t>((k + 1) % 3)] == b && uu.v[static_cast<std::size_t>((k + 2) % 3)] == a) j = k;
    if (j < 0) throw TopologyError("flip across a non-shared edge");
    const int z = uu.v[static_cast<std::size_t>(j)];
    const int t_nb_a = tt.nb[static_cast<std::size_t>((i + 1) % 3)];
    const int t_nb_b = tt.nb[static_cast<std::size_t>((i + 2) % 3)];
    const int u_nb_b = uu.nb[static_cast<std::size_t>((j + 1) % 3)];
    const int u_nb_a = uu.nb[static_cast<std::size_t>((j + 2) % 3)];
    tt = Tri{{w, a, z}, {u_nb_b, u, t_nb_b}};
    uu = Tri{{z, b, w}, {t_nb_a, t, u_nb_a}};
    replace_neighbor(u_nb_b, u, t);
    replace_neighbor(t_nb_a, t, u);
    vtri_[static_cast<std::size_t>(w)] = t;
    vtri_[static_cast<std::size_t>(a)] = t;
    vtri_[static_cast<std::size_t>(z)] = t;
    vtri_[static_cast<std::size_t>(b)] = u;
  }

  int locate(const Point2& p) const {
    int t = hint_;
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const auto& tr = tris_[static_cast<std::size_t>(t)];
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int i = (k + static_cast<int>(step)) % 3;
        const int a = tr.v[static_cast<std::size_t>((i + 1) % 3)];
        const int b = tr.v[static_cast<std::size_t>((i + 2) % 3)];
        if (orient2d(pt(a), pt(b), p) < 0) {
          t = tr.nb[static_cast<std::size_t>(i)];
          if (t < 0) throw GeometryError("point outside the enclosing triangle");
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    throw TopologyError("point location did not terminate");
  }

  void insert(int p) {
    const Point2& pp = pt(p);
    const int start = locate(pp);
    ++stamp_;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    cavity_.clear();
    std::vector<int> stack{start};
    mark_[static_cast<std::size_t>(start)] = stamp_;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      cavity_.push_back(c);
      const auto& tr = tris_[static_cast<std::size_t>(c)];
      for (int n : tr.nb) {
        if (n < 0 || mark_[static_cast<std::size_t>(n)] == stamp_) continue;
        const auto& nt = tris_[static_cast<std::size_t>(n)];
        if (incircle(pt(nt.v[0]), pt(nt.v[1]), pt(nt.v[2]), pp) > 0) {
          mark_[static_cast<std::size_t>(n)] = stamp_;
          stack.push_back(n);
        }
      }
    }

    struct Rim {
      int a, b, outer;
    };
    std::vector<Rim> rim;
    for (int c : cavity_) {
      const auto& tr = tris_[static_cast<std::size_t>(c)];
      for (int i = 0; i < 3; ++i) {
        const int n = tr.nb[static_cast<std::size_t>(i)];
        if (n >= 0 && mark_[static_cast<std::size_t>(n)] == stamp_) continue;
        rim.push_back({tr.v[static_cast<std::size_t>((i + 1) % 3)], tr.v[static_cast<std::size_t>((i + 2) % 3)], n});
      }
    }

    std::vector<int> ids(rim.size());
    for (std::size_t k = 0; k < rim.size(); ++k) {
      if (k < cavity_.size()) {
        ids[k] = cavity_[k];
      } else {
        ids[k] = static_cast<int>(tris_.size());
        tris_.push_back({});
      }
    }
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    // A cavity of k triangles has k + 2 rim edges, so every removed slot is reused.
    std::vector<std::pair<int, int>> by_a(rim.size());
    for (std::size_t k = 0; k < rim.size(); ++k) {
      const auto& r = rim[k];
      const int id = ids[k];
      tris_[static_cast<std::size_t>(id)] = Tri{{p, r.a, r.b}, {r.outer, -1, -1}};
      if (r.outer >= 0) {
        auto& o = tris_[static_cast<std::size_t>(r.outer)];
        for (int j = 0; j < 3; ++j)
          if (o.v[static_cast<std::size_t>((j + 1) % 3)] == r.b && o.v[static_cast<std::size_t>((j + 2) % 3)] == r.a)
            o.nb[static_cast<std::size_t>(j)] = id;
      }
      by_a[k] = {r.a, id};
      vtri_[static_cast<std::size_t>(r.a)] = id;
      vtri_[static_cast<std::size_t>(r.b)] = id;
    }
    std::sort(by_a.begin(), by_a.end());
    for (std::size_t k = 0; k < rim.size(); ++k) {
      const int id = ids[k];
      const auto it = std::lower_bound(by_a.begin(), by_a.end(), std::pair<int, int>{rim[k].b, -1});
      if (it == by_a.end() || it->first != rim[k].b) throw TopologyError("open insertion cavity");
      auto& me = tris_[static_cast<std::size_t>(id)];
      me.nb[1] = it->second;
      tris_[static_cast<std::size_t>(it->second)].nb[2] = id;
    }
    vtri_[static_cast<std::size_t>(p)] = ids[0];
    hint_ = ids[0];
  }

  // The triangle holding directed edge (a, b) and the local index facing it.
  std::optional<std::pair<int, int>> find_edge(int a, int b) const {
    for (int t : star(a)) {
      const auto& tr = tris_[static_cast<std::size_t>(t)];
      for (int i = 0; i < 3; ++i) {
        const int x = tr.v[static_cast<std::size_t>((i + 1) % 3)];
        const int y = tr.v[static_cast<std::size_t>((i + 2) % 3)];
        if ((x == a && y == b) || (x == b && y == a)) return std::pair{t, i};
      }
    }
    return std::nullopt;
  }

  std::vector<int> star(int v) const {
    std::vector<int> out;
    std::vector<int> stack{vtri_[static_cast<std::size_t>(v)]};
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      if (t < 0 || std::find(out.begin(), out.end(), t) != out.end()) continue;
      const auto& tr = tris_[static_cast<std::size_t>(t)];
      if (tr.v[0] != v && tr.v[1] != v && tr.v[2] != v) continue;
      out.push_back(t);
      for (int n : tr.nb) stack.push_back(n);
    }
    return out;
  }

  std::vector<std::pair<int, int>> crossing_edges(int a, int b) const {
    const Point2& pa = pt(a);
    const Point2& pb = pt(b);
    const auto on_segment = [&](int v) {
      const Point2& q = pt(v);
      return orient2d(pa, pb, q) == 0 && dot(q - pa, pb - pa) > 0 && dot(q - pb, pa - pb) > 0;
    };
    int t = -1, c = -1, d = -1;
    for (int s : star(a)) {
      const auto& tr = tris_[static_cast<std::size_t>(s)];
      int k = 0;
      while (tr.v[static_cast<std::size_t>(k)] != a) ++k;
      const int x = tr.v[static_cast<std::size_t>((k + 1) % 3)];
      const int y = tr.v[static_cast<std::size_t>((k + 2) % 3)];
      if (on_segment(x) || on_segment(y))
        throw BoundaryRecoveryError(fmt::format("a vertex lies on segment ({}, {})", a, b));
      if (orient2d(pa, pb, pt(x)) < 0 && orient2d(pa, pb, pt(y)) > 0) {
        t = s;
        c = x;
        d = y;
        break;
      }
    }
    if (t < 0) throw BoundaryRecoveryError(fmt::format("segment ({}, {}) leaves the triangulation", a, b));
    std::vector<std::pair<int, int>> out;
    for (std::size_t guard = 0; guard <= tris_.size(); ++guard) {
      out.push_back({c, d});
      const auto& tr = tris_[static_cast<std::size_t>(t)];
      int k = 0;
      while (!(tr.v[static_cast<std::size_t>((k + 1) % 3)] == c && tr.v[static_cast<std::size_t>((k + 2) % 3)] == d)) ++k;
      const int u = tr.nb[static_cast<std::size_t>(k)];
      const int e = opposite(u, d, c);
      if (e == b) return out;
      const int o = orient2d(pa, pb, pt(e));
      if (o == 0) throw BoundaryRecoveryError(fmt::format("a vertex lies on segment ({}, {})", a, b));
      if (o < 0)
        c = e;
      else
        d = e;
      t = u;
    }
    throw TopologyError("segment walk did not terminate");
  }

  std::vector<Point2> pts_;
  int n_real_ = 0;
  std::vector<Tri> tris_;
  std::vector<int> vtri_;
  std::unordered_set<std::uint64_t> constrained_;
  std::vector<unsigned> mark_;
  std::vector<int> cavity_;
  unsigned stamp_ = 0;
  int hint_ = 0;
};

}  // namespace

Mesh delaunay(std::span<const Point2> points) {
  if (points.size() < 3) throw DimensionError("at least three points are required");
  check_duplicates(points);

  // Strict convex hull by monotone chain.
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  const auto P = [&](int i) -> const Point2& { return points[static_cast<std::size_t>(i)]; };
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return P(i).x < P(j).x || (P(i).x == P(j).x && P(i).y < P(j).y);
  });
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (int i : order) {
      while (hull.size() >= base + 2 &&
             orient2d(P(hull[hull.size() - 2]), P(hull.back()), P(i)) <= 0)
        hull.pop_back();
      hull.push_back(i);
    }
    hull.pop_back();
    std::reverse(order.begin(), order.end());
  }
  if (hull.size() < 3) throw DimensionError("all points are collinear");

  std::vector<Point2> outer;
  for (int h : hull) outer.push_back(P(h));
  auto domain = std::make_shared<const PolygonDomain>(outer);

  std::vector<BoundaryTag> tags(points.size(), BoundaryTag::interior());
  for (std::size_t c = 0; c < hull.size(); ++c) tags[static_cast<std::size_t>(hull[c])] = BoundaryTag::at_corner(static_cast<int>(c));

  // Points exactly on a hull edge become segment vertices.
  std::vector<std::vector<std::pair<double, int>>> on_edge(hull.size());
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (tags[static_cast<std::size_t>(i)].is_corner()) continue;
    for (std::size_t s = 0; s < hull.size(); ++s) {
      const Point2& a = P(hull[s]);
      const Point2& b = P(hull[(s + 1) % hull.size()]);
      if (orient2d(a, b, P(i)) != 0) continue;
      const double tpar = dot(P(i) - a, b - a) / norm2(b - a);
      if (tpar <= 0.0 || tpar >= 1.0) continue;
      tags[static_cast<std::size_t>(i)] = BoundaryTag::on_segment(static_cast<int>(s));
      on_edge[s].push_back({tpar, i});
      break;
    }
  }

  Triangulator tri(std::vector<Point2>(points.begin(), points.end()));
  tri.insert_all();
  for (std::size_t s = 0; s < hull.size(); ++s) {
    auto& chain = on_edge[s];
    std::sort(chain.begin(), chain.end());
    int prev = hull[s];
    for (const auto& [tpar, i] : chain) {
      tri.enforce_segment(prev, i);
      prev = i;
    }
    tri.enforce_segment(prev, hull[(s + 1) % hull.size()]);
  }
  tri.legalize();
  // With hull edges constrained, every real triangle lies inside the hull.
  auto triangles = tri.collect([](const Triangle&) { return true; });
  return Mesh(std::move(domain), std::vector<Point2>(points.begin(), points.end()), std::move(triangles),
              std::move(tags));
}

Mesh conforming_delaunay(std::shared_ptr<const PolygonDomain> domain,
                         std::span<const Point2> interior_points,
                         std::span<const Point2> boundary_points) {
  const PolygonDomain& dom = *domain;
  const double tol = 1e-10 * std::max(1.0, dom.bbox().extent());

  std::vector<Point2> pts;
  std::vector<BoundaryTag> tags;
  pts.reserve(boundary_points.size() + interior_points.size());
  std::vector<int> corner_vertex(dom.corner_count(), -1);
  for (const auto& p : boundary_points) {
    const int v = static_cast<int>(pts.size());
    if (auto c = dom.corner_at(p, tol)) {
      if (corner_vertex[static_cast<std::size_t>(*c)] >= 0)
        throw DuplicatePointError(corner_vertex[static_cast<std::size_t>(*c)], v);
      corner_vertex[static_cast<std::size_t>(*c)] = v;
      pts.push_back(dom.corner(*c));
      tags.push_back(BoundaryTag::at_corner(*c));
    } else if (auto s = dom.segment_at(p, tol)) {
      pts.push_back(dom.project(p, *s));
      tags.push_back(BoundaryTag::on_segment(*s));
    } else {
      throw ContainmentError(fmt::format("boundary point ({}, {}) is not on the boundary", p.x, p.y));
    }
  }
  for (std::size_t c = 0; c < corner_vertex.size(); ++c)
    if (corner_vertex[c] < 0)
      throw BoundaryRecoveryError(fmt::format("domain corner {} is missing from the boundary points", c));
  for (const auto& p : interior_points) {
    if (!dom.contains(p) || dom.distance_to_boundary(p) <= tol)
      throw ContainmentError(fmt::format("interior point ({}, {}) is not strictly inside the domain", p.x, p.y));
    pts.push_back(p);
    tags.push_back(BoundaryTag::interior());
  }
  check_duplicates(pts);

  Triangulator tri(pts);
  tri.insert_all();

  std::vector<std::vector<std::pair<double, int>>> chains(dom.segment_count());
  for (int v = 0; v < static_cast<int>(boundary_points.size()); ++v) {
    const auto& tag = tags[static_cast<std::size_t>(v)];
    if (tag.kind != BoundaryTag::Kind::segment) continue;
    const auto seg = dom.segment(tag.index);
    const double tpar = dot(pts[static_cast<std::size_t>(v)] - seg.a, seg.b - seg.a) / norm2(seg.b - seg.a);
    chains[static_cast<std::size_t>(tag.index)].push_back({tpar, v});
  }
  for (int s = 0; s < static_cast<int>(dom.segment_count()); ++s) {
    auto& chain = chains[static_cast<std::size_t>(s)];
    std::sort(chain.begin(), chain.end());
    const auto [c0, c1] = dom.segment_corners(s);
    int prev = corner_vertex[static_cast<std::size_t>(c0)];
    for (const auto& [tpar, v] : chain) {
      tri.enforce_segment(prev, v);
      prev = v;
    }
    tri.enforce_segment(prev, corner_vertex[static_cast<std::size_t>(c1)]);
  }
  tri.legalize();

  auto triangles = tri.collect([&](const Triangle& t) {
    const Point2 c = (tri.pt(t[0]) + tri.pt(t[1]) + tri.pt(t[2])) * (1.0 / 3.0);
    return dom.contains(c);
  });
  return Mesh(std::move(domain), std::move(pts), std::move(triangles), std::move(tags));
}

std::vector<Point2> sample_boundary(const PolygonDomain& domain, double spacing) {
  if (!(spacing > 0.0)) throw ConfigurationError("boundary spacing must be positive");
  std::vector<Point2> out;
  for (int s = 0; s < static_cast<int>(domain.segment_count()); ++s) {
    const auto seg = domain.segment(s);
    const auto n = static_cast<int>(std::ceil(distance(seg.a, seg.b) / spacing - 1e-9));
    out.push_back(seg.a);
    for (int k = 1; k < n; ++k) {
      const double t = static_cast<double>(k) / n;
      out.push_back(seg.a + (seg.b - seg.a) * t);
    }
  }
  return out;
}

Mesh structured_mesh(std::shared_ptr<const PolygonDomain> domain, double spacing) {
  if (!(spacing > 0.0)) throw ConfigurationError("grid spacing must be positive");
  const auto box = domain->bbox();
  const int nx = std::max(1, static_cast<int>(std::lround(box.width() / spacing)));
  const int ny = std::max(1, static_cast<int>(std::lround(box.height() / spacing)));
  const double tol = 1e-10 * std::max(1.0, box.extent());
  std::vector<Point2> boundary, interior;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const Point2 p{box.lo.x + box.width() * i / nx, box.lo.y + box.height() * j / ny};
      if (domain->segment_at(p, tol))
        boundary.push_back(p);
      else if (domain->contains(p))
        interior.push_back(p);
    }
  return conforming_delaunay(std::move(domain), interior, boundary);
}

}  // namespace hatafem
