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

#include "hatafem/adapt.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "hatafem/error.hpp"
#include "hatafem/triangulate.hpp"

namespace hatafem {

std::vector<int> dorfler_mark(std::span<const double> indicators, double theta) {
  if (indicators.empty()) throw DomainError("no indicators to mark");
  if (!(theta > 0.0 && theta <= 1.0)) throw DomainError(fmt::format("theta {} outside (0, 1]", theta));
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  for (double v : indicators)
    if (!(v >= 0.0)) throw DomainError("indicators must be non-negative");
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return indicators[static_cast<std::size_t>(a)] > indicators[static_cast<std::size_t>(b)];
  });
  double total = 0.0;
  for (int i : order) total += indicators[static_cast<std::size_t>(i)] * indicators[static_cast<std::size_t>(i)];
  if (total == 0.0) return {};
  double sum = 0.0;
  std::size_t n = 0;
  while (n < order.size() && sum < theta * total) {
    const double v = indicators[static_cast<std::size_t>(order[n])];
    sum += v * v;
    ++n;
  }
  order.resize(n);
  return order;
}

namespace {

std::uint64_t key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

Mesh bisect(const Mesh& mesh, std::span<const int> marked) {
  const auto nt = mesh.triangle_count();
  if (marked.empty()) return mesh;
  const EdgeTable edges(mesh);
  const auto ref_edge = [&](int t) { return edges.triangle_edges(t)[static_cast<std::size_t>(mesh.refinement_edge(t))]; };

  std::vector<std::uint8_t> edge_marked(edges.size(), 0);
  std::vector<int> queue;
  const auto mark_edge = [&](int e) {
    if (edge_marked[static_cast<std::size_t>(e)]) return;
    edge_marked[static_cast<std::size_t>(e)] = 1;
    queue.push_back(e);
  };
  for (int t : marked) {
    if (t < 0 || static_cast<std::size_t>(t) >= nt) throw DomainError(fmt::format("marked triangle {} out of range", t));
    mark_edge(ref_edge(t));
  }
  // Closure: a triangle with any marked edge must also split its refinement edge.
  std::size_t completions = 0;
  while (!queue.empty()) {
    const auto& e = edges.edge(queue.back());
    queue.pop_back();
    for (int t : {e.t0, e.t1}) {
      if (t < 0 || edge_marked[static_cast<std::size_t>(ref_edge(t))]) continue;
      if (++completions > 2 * nt) throw TopologyError("bisection closure did not terminate");
      mark_edge(ref_edge(t));
    }
  }

  std::vector<Point2> vertices(mesh.vertices());
  std::vector<BoundaryTag> tags(mesh.tags());
  std::unordered_map<std::uint64_t, int> mid;
  const auto& dom = mesh.domain();
  const double tol = 1e-10 * std::max(1.0, dom.bbox().extent());
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (!edge_marked[static_cast<std::size_t>(e)]) continue;
    const auto& ed = edges.edge(e);
    mid.emplace(key(ed.v0, ed.v1), static_cast<int>(vertices.size()));
    BoundaryTag tag = BoundaryTag::interior();
    Point2 m = ed.midpoint;
    if (ed.on_boundary()) {
      const auto s = dom.segment_at(m, tol);
      if (!s) throw TopologyError(fmt::format("boundary edge {} is off the boundary", e));
      tag = BoundaryTag::on_segment(*s);
      m = dom.project(m, *s);
    }
    vertices.push_back(m);
    tags.push_back(tag);
  }

  std::vector<Triangle> triangles;
  std::vector<std::uint8_t> refine;
  triangles.reserve(nt + 2 * mid.size());
  refine.reserve(nt + 2 * mid.size());
  std::vector<std::pair<Triangle, int>> stack;
  for (int t = 0; t < static_cast<int>(nt); ++t) {
    stack.push_back({mesh.triangle(t), mesh.refinement_edge(t)});
    while (!stack.empty()) {
      const auto [tri, r] = stack.back();
      stack.pop_back();
      const int p = tri[static_cast<std::size_t>(r)];
      const int a = tri[static_cast<std::size_t>((r + 1) % 3)];
      const int b = tri[static_cast<std::size_t>((r + 2) % 3)];
      const auto it = mid.find(key(a, b));
      if (it == mid.end()) {
        triangles.push_back(tri);
        refine.push_back(static_cast<std::uint8_t>(r));
        continue;
      }
      const int m = it->second;
      // The new vertex is the newest: each child refines the edge facing it.
      stack.push_back({Triangle{b, p, m}, 2});
      stack.push_back({Triangle{p, a, m}, 2});
    }
  }
  return Mesh(mesh.domain_ptr(), std::move(vertices), std::move(triangles), std::move(tags), std::move(refine));
}

std::vector<int> select_midpoints(std::span<const double> weights) {
  const auto ne = weights.size();
  if (ne == 0) throw DomainError("no midpoints to select from");
  std::vector<int> order(ne);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return weights[static_cast<std::size_t>(a)] > weights[static_cast<std::size_t>(b)];
  });
  double total = 0.0;
  for (int e : order) total += weights[static_cast<std::size_t>(e)];
  std::size_t n = 0;
  double prefix = 0.0;
  while (n < ne && prefix + weights[static_cast<std::size_t>(order[n])] <= 0.5 * total) {
    prefix += weights[static_cast<std::size_t>(order[n])];
    ++n;
  }
  order.resize(std::max<std::size_t>(n, 1));
  return order;
}

Mesh midpoint_refine(const Mesh& mesh, const DensityField& density, MidpointWeight weight) {
  const EdgeTable edges(mesh);
  std::vector<double> rho(edges.size());
  for (std::size_t e = 0; e < rho.size(); ++e) {
    const auto& edge = edges.edges()[e];
    rho[e] = density(edge.midpoint);
    if (weight == MidpointWeight::energy) rho[e] *= std::pow(edge.length, 4);
  }
  const auto chosen = select_midpoints(rho);

  const auto& dom = mesh.domain();
  const double tol = 1e-10 * std::max(1.0, dom.bbox().extent());
  std::vector<Point2> boundary, interior;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
    (mesh.tags()[v].on_boundary() ? boundary : interior).push_back(mesh.vertices()[v]);
  for (const int id : chosen) {
    const auto& e = edges.edge(id);
    if (e.on_boundary()) {
      const auto s = dom.segment_at(e.midpoint, tol);
      if (!s) throw TopologyError("boundary edge midpoint is off the boundary");
      boundary.push_back(dom.project(e.midpoint, *s));
    } else {
      interior.push_back(e.midpoint);
    }
  }
  return conforming_delaunay(mesh.domain_ptr(), interior, boundary);
}

FitResult fit_rate(std::span<const std::pair<double, double>> history) {
  if (history.size() < 2) throw DomainError("rate fit needs at least two points");
  const double n = static_cast<double>(history.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [N, eta] : history) {
    if (!(N > 0.0) || !(eta > 0.0)) throw DomainError("rate fit needs positive data");
    mx += std::log(N);
    my += std::log(eta);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [N, eta] : history) {
    sxx += (std::log(N) - mx) * (std::log(N) - mx);
    sxy += (std::log(N) - mx) * (std::log(eta) - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  FitResult fit;
  fit.p = -slope;
  fit.c = std::exp(my - slope * mx);
  double rss = 0.0;
  for (const auto& [N, eta] : history) {
    const double d = std::log(eta) - (my + slope * (std::log(N) - mx));
    rss += d * d;
  }
  fit.residual = std::sqrt(rss);
  return fit;
}

std::size_t target_vertices(const FitResult& fit, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!(fit.p > 0.0)) throw StrategyError(fmt::format("non-converging fit (p = {})", fit.p));
  const double n = std::pow(fit.c / tol, 1.0 / fit.p);
  // Absorb rounding in exact cases such as (2 / 0.01)^2.
  return static_cast<std::size_t>(std::max(1.0, std::ceil(n * (1.0 - 1e-12))));
}

std::optional<double> AdaptHistory::error(std::size_t i) const {
  const auto& e = iterations.at(i).error;
  if (!e) return std::nullopt;
  return estimator == EstimatorKind::weighted_recovery ? e->weighted_energy : e->grad_l2;
}

std::optional<double> AdaptHistory::effectivity(std::size_t i) const {
  const auto e = error(i);
  if (!e || !(*e > 0.0)) return std::nullopt;
  return iterations.at(i).eta / *e;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Solved {
  FeFunction u_h;
  Estimate est;
};

Solved solve_and_estimate(const ProblemSpec& problem, std::shared_ptr<const Mesh> mesh, EstimatorKind kind,
                          int k, int rounds, Clock::time_point start, AdaptHistory& history,
                          const IterationObserver& observer) {
  auto u_h = solve(assemble(mesh, problem));
  auto est = estimate(u_h, problem, kind);
  IterationRecord rec;
  rec.k = k;
  rec.vertices = mesh->vertex_count();
  rec.eta = est.global;
  if (problem.has_exact_gradient()) rec.error = error_norms(u_h, problem);
  rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  rec.refinement_rounds = rounds;
  rec.mesh = std::move(mesh);
  history.iterations.push_back(rec);
  spdlog::info("k={} N={} eta={:.6e}{}", k, rec.vertices, rec.eta,
               rec.error ? fmt::format(" error={:.6e}", *history.error(history.iterations.size() - 1)) : "");
  if (observer) observer(history.iterations.back(), u_h, est);
  return {std::move(u_h), std::move(est)};
}

}  // namespace

AdaptHistory run_standard_afem(const ProblemSpec& problem, const Mesh& initial, const StandardAfemOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigurationError("tol must be positive");
  if (!(options.theta > 0.0 && options.theta < 1.0)) throw ConfigurationError("theta must lie in (0, 1)");
  AdaptHistory history;
  history.estimator = options.estimator;
  auto mesh = std::make_shared<const Mesh>(initial);
  for (int k = 0;; ++k) {
    const auto start = Clock::now();
    const auto solved =
        solve_and_estimate(problem, mesh, options.estimator, k, k == 0 ? 0 : 1, start, history, options.observer);
    if (solved.est.global <= options.tol) {
      history.converged = true;
      break;
    }
    if (k + 1 >= options.max_iters) break;
    const auto marked = dorfler_mark(solved.est.per_element, options.theta);
    if (marked.empty()) break;
    mesh = std::make_shared<const Mesh>(bisect(*mesh, marked));
  }
  return history;
}

AdaptHistory run_hat_afem(const ProblemSpec& problem, const HatAfemOptions& options) {
  if (!(options.tol > 0.0)) throw ConfigurationError("tol must be positive");
  if (options.n0 < problem.domain->corner_count()) throw ConfigurationError("n0 is below the corner count");
  if (options.lloyd_iters < 1) throw ConfigurationError("lloyd_iters must be at least 1");
  if (options.fit_first < 0 || options.fit_first > 3) throw ConfigurationError("fit_first must lie in [0, 3]");
  if (options.max_vertices < options.n0) throw ConfigurationError("max_vertices is below n0");
  AdaptHistory history;
  history.estimator = options.estimator;

  auto start = Clock::now();
  auto mesh = std::make_shared<const Mesh>(
      uniform_cvdt_mesh(problem.domain, options.n0, options.lloyd_iters, options.seed));
  auto solved = solve_and_estimate(problem, mesh, options.estimator, 0, 0, start, history, options.observer);
  if (solved.est.global <= options.tol) {
    history.converged = true;
    return history;
  }
  for (int k = 1; k <= 6; ++k) {
    start = Clock::now();
    int rounds = 1;
    if (k == 5) {
      std::vector<std::pair<double, double>> data;
      for (int i = options.fit_first; i <= 4; ++i) {
        const auto& r = history.iterations[static_cast<std::size_t>(i)];
        data.push_back({static_cast<double>(r.vertices), r.eta});
      }
      history.fit = fit_rate(data);
      try {
        const auto target = target_vertices(*history.fit, options.tol);
        history.target = target;
        const auto capped = std::min(target, options.max_vertices);
        if (capped < target) spdlog::warn("target N={} capped at {}", target, capped);
        const double ratio = static_cast<double>(capped) / static_cast<double>(mesh->vertex_count());
        rounds = std::max(static_cast<int>(std::ceil(std::log2(ratio))), 1);
        spdlog::info("fit c={:.4e} p={:.4f} target N={} rounds={}", history.fit->c, history.fit->p, target, rounds);
      } catch (const StrategyError& e) {
        spdlog::warn("{}; refining once", e.what());
      }
    }
    const auto density = density_from_indicators(mesh, solved.est, options.indicator_power);
    Mesh next = *mesh;
    for (int i = 0; i < rounds; ++i) {
      next = midpoint_refine(next, density, options.midpoint_weight);
      next = cfcvdt_optimize(next, density, options.lloyd_iters);
    }
    mesh = std::make_shared<const Mesh>(std::move(next));
    solved = solve_and_estimate(problem, mesh, options.estimator, k, rounds, start, history, options.observer);
    if (solved.est.global <= options.tol) {
      history.converged = true;
      break;
    }
  }
  return history;
}

}  // namespace hatafem
