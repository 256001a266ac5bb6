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

#include "hatafem/experiment.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <random>

#include "hatafem/error.hpp"
#include "hatafem/mesh_io.hpp"
#include "hatafem/triangulate.hpp"

namespace hatafem {

std::string_view to_string(Algorithm a) { return a == Algorithm::standard ? "standard" : "hat"; }

Algorithm parse_algorithm(std::string_view name) {
  if (name == "standard") return Algorithm::standard;
  if (name == "hat") return Algorithm::hat;
  throw ConfigurationError(fmt::format("unknown algorithm '{}'", name));
}

void RunConfig::check() const {
  if (!(tol > 0.0)) throw ConfigurationError("tol must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw ConfigurationError("theta must lie in (0, 1)");
  if (lloyd_iters < 1) throw ConfigurationError("lloyd-iters must be at least 1");
  if (max_iters < 1) throw ConfigurationError("max-iters must be at least 1");
  if (algorithm == Algorithm::hat && estimator == EstimatorKind::residual)
    throw ConfigurationError("the hat algorithm needs a recovery estimator");
}

RunConfig default_config(BenchmarkId benchmark, Algorithm algorithm) {
  const auto d = benchmark_defaults(benchmark);
  RunConfig c;
  c.benchmark = benchmark;
  c.algorithm = algorithm;
  c.tol = d.tol;
  c.n0 = algorithm == Algorithm::hat ? d.hat_n0 : d.standard_n0;
  c.estimator = algorithm == Algorithm::hat ? d.hat_estimator : EstimatorKind::residual;
  return c;
}

std::string history_csv(const AdaptHistory& history, bool timing) {
  std::string out = "k,N,error,eta,effectivity,seconds\n";
  for (std::size_t i = 0; i < history.iterations.size(); ++i) {
    const auto& r = history.iterations[i];
    const auto err = history.error(i);
    const auto eff = history.effectivity(i);
    out += fmt::format("{},{},{},{:.16e},{},{:.16e}\n", r.k, r.vertices, err ? fmt::format("{:.16e}", *err) : "nan",
                       r.eta, eff ? fmt::format("{:.16e}", *eff) : "nan", timing ? r.seconds : 0.0);
  }
  return out;
}

Mesh lattice_mesh(std::shared_ptr<const PolygonDomain> domain, std::size_t n) {
  const auto box = domain->bbox();
  const double tol = 1e-10 * std::max(1.0, box.extent());
  std::optional<double> best_spacing;
  std::size_t best_gap = 0;
  for (int m = 1; m <= 512; ++m) {
    const double h = box.extent() / m;
    const int nx = static_cast<int>(std::lround(box.width() / h));
    const int ny = static_cast<int>(std::lround(box.height() / h));
    if (nx < 1 || ny < 1) continue;
    bool corners_on_lattice = true;
    for (int c = 0; c < static_cast<int>(domain->corner_count()); ++c) {
      const auto& p = domain->corner(c);
      const double i = (p.x - box.lo.x) / box.width() * nx;
      const double j = (p.y - box.lo.y) / box.height() * ny;
      if (std::abs(i - std::round(i)) > 1e-9 || std::abs(j - std::round(j)) > 1e-9) corners_on_lattice = false;
    }
    if (!corners_on_lattice) continue;
    std::size_t count = 0;
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const Point2 p{box.lo.x + box.width() * i / nx, box.lo.y + box.height() * j / ny};
        if (domain->segment_at(p, tol) || domain->contains(p)) ++count;
      }
    const std::size_t gap = count > n ? count - n : n - count;
    if (!best_spacing || gap < best_gap) {
      best_spacing = h;
      best_gap = gap;
    }
    if (count > 4 * n) break;
  }
  if (!best_spacing) throw ConfigurationError("no lattice fits the domain corners");
  return structured_mesh(std::move(domain), *best_spacing);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(fmt::format("cannot write {}", path.string()));
  os << text;
  if (!os) throw Error(fmt::format("cannot write {}", path.string()));
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.check();
  const auto problem = make_problem(config.benchmark);
  if (!config.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw Error(fmt::format("cannot create {}: {}", config.out.string(), ec.message()));
  }

  IterationObserver observer;
  if (!config.out.empty() && config.write_meshes) {
    observer = [&](const IterationRecord& rec, const FeFunction& u_h, const Estimate& est) {
      const auto stem = config.out / fmt::format("mesh_{:02}", rec.k);
      io::write_triangle_files(stem, *rec.mesh);
      const io::VtkField point[] = {{"solution", u_h.values()}};
      const io::VtkField cell[] = {{"indicator", est.per_element}};
      io::write_vtk(config.out / fmt::format("solution_{:02}.vtk", rec.k), *rec.mesh, point, cell);
    };
  }

  AdaptHistory history;
  if (config.algorithm == Algorithm::standard) {
    const Mesh initial = lattice_mesh(problem.domain, config.n0);
    StandardAfemOptions opt;
    opt.tol = config.tol;
    opt.theta = config.theta;
    opt.estimator = config.estimator;
    opt.max_iters = config.max_iters;
    opt.observer = observer;
    history = run_standard_afem(problem, initial, opt);
  } else {
    HatAfemOptions opt;
    opt.tol = config.tol;
    opt.n0 = config.n0;
    opt.lloyd_iters = config.lloyd_iters;
    opt.seed = config.seed;
    opt.estimator = config.estimator;
    opt.observer = observer;
    history = run_hat_afem(problem, opt);
  }

  if (!config.out.empty()) {
    write_text(config.out / "history.csv", history_csv(history, config.timing));
    std::string timing = "k,seconds\n";
    for (const auto& r : history.iterations) timing += fmt::format("{},{:.6f}\n", r.k, r.seconds);
    write_text(config.out / "timing.csv", timing);
  }
  const int code = history.converged ? 0 : 2;
  return {std::move(history), code};
}

std::vector<LloydDemoRow> lloyd_demo(std::size_t n_points, int iters, std::uint64_t seed) {
  if (n_points < 10) throw ConfigurationError("lloyd_demo needs at least 10 points");
  if (iters < 0) throw ConfigurationError("iters must be non-negative");
  const auto problem = make_problem(BenchmarkId::square_smooth);
  const auto& domain = problem.domain;
  std::mt19937_64 rng(seed);

  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n_points))));
  const std::size_t n_boundary = std::min(n_points - 1, std::max<std::size_t>(4, 4 * (side - 1)));
  std::vector<Point2> boundary{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  while (boundary.size() < n_boundary) {
    const double t = uniform01(rng);
    const auto s = static_cast<int>(uniform01(rng) * 4.0);
    if (t <= 1e-6 || t >= 1.0 - 1e-6) continue;
    const auto seg = domain->segment(s);
    boundary.push_back(seg.a + (seg.b - seg.a) * t);
  }
  std::vector<Point2> interior;
  while (boundary.size() + interior.size() < n_points) {
    const Point2 p{uniform01(rng), uniform01(rng)};
    if (domain->distance_to_boundary(p) > 1e-6) interior.push_back(p);
  }

  auto mesh = std::make_shared<const Mesh>(conforming_delaunay(domain, interior, boundary));
  const auto density = DensityField::uniform(mesh);
  std::vector<LloydDemoRow> rows;
  for (int it = 0;; ++it) {
    const auto u_h = solve(assemble(mesh, problem));
    rows.push_back({it, mesh->vertex_count(), error_norms(u_h, problem).grad_l2, mean_quality(*mesh), min_angle(*mesh),
                    cvt_energy(*mesh, density)});
    spdlog::debug("lloyd iter {} error {:.6e} quality {:.6f}", it, rows.back().error, rows.back().mean_quality);
    if (it == iters) break;
    mesh = std::make_shared<const Mesh>(lloyd_step(*mesh, density));
  }
  return rows;
}

std::string lloyd_demo_csv(const std::vector<LloydDemoRow>& rows) {
  std::string out = "iter,N,error,mean_quality,min_angle,energy\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n", r.iter, r.vertices, r.error, r.mean_quality,
                       r.min_angle, r.energy);
  return out;
}

}  // namespace hatafem
