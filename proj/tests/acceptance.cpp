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

// Acceptance checks 1-11. Prints one PASS/FAIL line per check and exits
// non-zero when any check fails. `acceptance N...` runs a subset.

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "generators.hpp"
#include "hatafem/adapt.hpp"
#include "hatafem/benchmarks.hpp"
#include "hatafem/cvt.hpp"
#include "hatafem/error.hpp"
#include "hatafem/estimate.hpp"
#include "hatafem/experiment.hpp"
#include "hatafem/fem.hpp"
#include "hatafem/quadrature.hpp"
#include "hatafem/triangulate.hpp"

namespace {

using namespace hatafem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Check {
  int id;
  const char* name;
  double seconds_limit;
  std::function<Outcome()> body;
};

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

Outcome dorfler_minimality() {
  std::mt19937_64 rng(20261016);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto eta = testgen::random_indicators(rng, 1, 12);
    const double theta = 0.1 * static_cast<double>(1 + trial % 9);
    const auto marked = dorfler_mark(eta, theta);
    if (marked.size() != testgen::brute_force_min_marking(eta, theta)) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} mismatches in 500 trials", mismatches)};
}

Outcome delaunay_empty_circle() {
  std::mt19937_64 rng(7);
  std::size_t violations = 0, triangles = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 3 + static_cast<std::size_t>(rng() % 198);
    const auto pts = testgen::random_points(rng, n);
    const Mesh m = delaunay(pts);
    triangles += m.triangle_count();
    violations += testgen::empty_circle_violations(m, pts, 1e-12);
  }
  return {violations == 0, fmt::format("{} violations over {} triangles", violations, triangles)};
}

Outcome patch_test() {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    auto mesh = std::make_shared<const Mesh>(testgen::random_square_mesh(rng, 20 + 20 * trial));
    const auto problem = testgen::linear_problem(mesh->domain_ptr(), 0.3, -1.7, 2.2);
    const auto u_h = solve(assemble(mesh, problem));
    worst = std::max(worst, error_norms(u_h, problem).weighted_energy);
  }
  return {worst <= 1e-9, fmt::format("max energy error {:.3e}", worst)};
}

// Gradient error of the recovered field against the exact gradient.
double recovered_error(const FeFunction& G, const ProblemSpec& problem) {
  const Mesh& mesh = G.mesh();
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const auto [a, b, c] = mesh.corners(t);
    for (const auto& q : quad::degree4()) {
      const Vec2 d = G.evaluate_vector(t, q.bary) - problem.exact_grad_u(quad::map(q, a, b, c));
      sum += q.weight * norm2(d) * mesh.area(t);
    }
  }
  return std::sqrt(sum);
}

Outcome superconvergence() {
  const auto problem = make_problem(BenchmarkId::square_smooth);
  std::vector<double> n, e, g;
  for (const std::size_t target : {289u, 1089u, 4225u}) {
    auto mesh = std::make_shared<const Mesh>(uniform_cvdt_mesh(problem.domain, target, 20, 3));
    const auto u_h = solve(assemble(mesh, problem));
    n.push_back(static_cast<double>(mesh->vertex_count()));
    e.push_back(error_norms(u_h, problem).grad_l2);
    g.push_back(recovered_error(recover_gradient(u_h), problem));
  }
  const double se = loglog_slope(n, e);
  const double sg = loglog_slope(n, g);
  const bool ok = std::abs(se + 0.5) <= 0.1 && sg <= se - 0.1;
  return {ok, fmt::format("slope grad {:.3f}, recovered {:.3f}", se, sg)};
}

AdaptHistory standard_lshape(EstimatorKind kind, int max_iters) {
  const auto problem = make_problem(BenchmarkId::lshape);
  StandardAfemOptions opt;
  opt.tol = 0.01;
  opt.theta = 0.3;
  opt.estimator = kind;
  opt.max_iters = max_iters;
  return run_standard_afem(problem, lattice_mesh(problem.domain, 21), opt);
}

Outcome residual_overestimation() {
  const auto h = standard_lshape(EstimatorKind::residual, 26);
  if (h.iterations.size() < 26) return {false, "fewer than 26 iterations"};
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 10; i <= 25; ++i) {
    const double eff = *h.effectivity(i);
    lo = std::min(lo, eff);
    hi = std::max(hi, eff);
  }
  return {lo >= 3.0 && hi <= 7.0, fmt::format("effectivity in [{:.3f}, {:.3f}]", lo, hi)};
}

Outcome recovery_exactness() {
  const auto h = standard_lshape(EstimatorKind::recovery, 80);
  double lo = 1e300, hi = 0.0;
  int counted = 0;
  for (std::size_t i = 0; i < h.iterations.size(); ++i) {
    if (h.iterations[i].vertices < 2000) continue;
    const double eff = *h.effectivity(i);
    lo = std::min(lo, eff);
    hi = std::max(hi, eff);
    ++counted;
  }
  const bool ok = counted > 0 && lo >= 0.9 && hi <= 1.1;
  return {ok, fmt::format("{} iterations with N >= 2000, effectivity in [{:.4f}, {:.4f}]", counted, lo, hi)};
}

AdaptHistory hat_run(BenchmarkId id) {
  auto config = default_config(id, Algorithm::hat);
  return run(config).history;
}

Outcome hat_termination() {
  std::vector<std::string> notes;
  bool ok = true;
  const auto summarize = [&](const char* name, const AdaptHistory& h, bool good) {
    const std::size_t last = h.iterations.size() - 1;
    notes.push_back(fmt::format("{}: {} solves N={} eta={:.4e} eff={:.4f}", name, h.iterations.size(),
                                h.iterations[last].vertices, h.iterations[last].eta, *h.effectivity(last)));
    ok = ok && good;
  };
  {
    const auto t0 = Clock::now();
    const auto h = hat_run(BenchmarkId::lshape);
    const auto& r = h.iterations.back();
    const double eff = *h.effectivity(h.iterations.size() - 1);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    summarize("lshape", h,
              h.iterations.size() <= 7 && r.eta <= 1.1 * 0.01 && r.vertices >= 3000 && r.vertices <= 16000 &&
                  eff >= 0.85 && eff <= 1.15 && secs < 300.0);
  }
  {
    const auto t0 = Clock::now();
    const auto h = hat_run(BenchmarkId::inner_layer);
    const auto& r = h.iterations.back();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    summarize("inner-layer", h,
              h.iterations.size() <= 7 && r.vertices >= 6000 && r.vertices <= 40000 && secs < 300.0);
  }
  {
    const auto t0 = Clock::now();
    const auto h = hat_run(BenchmarkId::peak);
    const auto& r = h.iterations.back();
    const double eff = *h.effectivity(h.iterations.size() - 1);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    summarize("peak", h,
              h.estimator == EstimatorKind::weighted_recovery && h.iterations.size() <= 7 && r.vertices >= 6000 &&
                  r.vertices <= 30000 && eff >= 0.85 && eff <= 1.15 && secs < 300.0);
  }
  std::string detail;
  for (const auto& s : notes) detail += (detail.empty() ? "" : "; ") + s;
  return {ok, detail};
}

Outcome target_jump() {
  const auto h = hat_run(BenchmarkId::inner_layer);
  if (h.iterations.size() < 6) return {false, fmt::format("only {} solves", h.iterations.size())};
  const double ratio =
      static_cast<double>(h.iterations[5].vertices) / static_cast<double>(h.iterations[4].vertices);
  return {ratio >= 3.0, fmt::format("N {} -> {} (ratio {:.2f})", h.iterations[4].vertices,
                                    h.iterations[5].vertices, ratio)};
}

Outcome lloyd_improvement() {
  const auto rows = lloyd_demo(1089, 50, 5);
  const double ratio = rows[50].error / rows[0].error;
  bool monotone = true;
  for (int i = 1; i <= 10; ++i)
    if (rows[static_cast<std::size_t>(i)].mean_quality < rows[static_cast<std::size_t>(i - 1)].mean_quality - 1e-6)
      monotone = false;
  return {ratio <= 0.8 && monotone,
          fmt::format("error ratio {:.4f}, quality {:.4f} -> {:.4f}{}", ratio, rows[0].mean_quality,
                      rows[10].mean_quality, monotone ? "" : " (not monotone)")};
}

Outcome nvb_soundness() {
  const auto problem = make_problem(BenchmarkId::lshape);
  Mesh mesh = lattice_mesh(problem.domain, 21);
  std::mt19937_64 rng(3);
  std::vector<std::size_t> classes;
  bool conforming = true;
  for (int round = 1; round <= 10; ++round) {
    std::vector<int> marked;
    for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t)
      if (uniform01(rng) < 0.3) marked.push_back(t);
    mesh = bisect(mesh, marked);
    try {
      validate(mesh);
      EdgeTable edges(mesh);
    } catch (const Error&) {
      conforming = false;
    }
    classes.push_back(testgen::angle_classes(mesh, 1e-6));
  }
  bool stable = true;
  for (std::size_t r = 3; r < classes.size(); ++r) stable = stable && classes[r] == classes[2];
  std::string seq;
  for (auto c : classes) seq += fmt::format("{} ", c);
  return {conforming && stable, fmt::format("classes per round: {}{}", seq, conforming ? "" : "(non-conforming)")};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto base = std::filesystem::temp_directory_path() / fmt::format("hat_afem_accept_{}", ::getpid());
  bool same = true;
  std::vector<std::string> runs;
  for (const auto& [bench, algo] : {std::pair{BenchmarkId::lshape, Algorithm::hat},
                                    std::pair{BenchmarkId::inner_layer, Algorithm::standard}}) {
    auto config = default_config(bench, algo);
    config.write_meshes = false;
    config.seed = 42;
    if (algo == Algorithm::standard) config.max_iters = 12;
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      config.out = base / fmt::format("{}_{}_{}", to_string(bench), to_string(algo), rep);
      run(config);
      const auto text = slurp(config.out / "history.csv");
      if (rep == 0)
        first = text;
      else
        same = same && !first.empty() && text == first;
    }
    runs.push_back(fmt::format("{}/{}", to_string(bench), to_string(algo)));
  }
  std::filesystem::remove_all(base);
  return {same, fmt::format("history.csv identical for {} and {}", runs[0], runs[1])};
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<Check> checks = {
      {1, "dorfler minimality", 10.0, dorfler_minimality},
      {2, "delaunay empty circumcircle", 30.0, delaunay_empty_circle},
      {3, "patch test", 5.0, patch_test},
      {4, "superconvergence on CVDT meshes", 120.0, superconvergence},
      {5, "residual over-estimation", 180.0, residual_overestimation},
      {6, "recovery asymptotic exactness", 180.0, recovery_exactness},
      {7, "hat termination", 900.0, hat_termination},
      {8, "target jump", 300.0, target_jump},
      {9, "lloyd improvement", 600.0, lloyd_improvement},
      {10, "nvb soundness", 60.0, nvb_soundness},
      {11, "determinism", 600.0, determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& check : checks) {
    if (!wanted.empty() && !wanted.count(check.id)) continue;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = check.body();
    } catch (const std::exception& e) {
      out = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > check.seconds_limit) {
      out.pass = false;
      out.detail += fmt::format(" (time limit {:.0f} s exceeded)", check.seconds_limit);
    }
    fmt::print("{} {:2d} {}: {} [{:.1f} s]\n", out.pass ? "PASS" : "FAIL", check.id, check.name, out.detail, secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
