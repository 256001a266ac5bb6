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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "generators.hpp"
#include "hatafem/adapt.hpp"
#include "hatafem/benchmarks.hpp"
#include "hatafem/error.hpp"
#include "hatafem/experiment.hpp"

using namespace hatafem;

namespace {

std::shared_ptr<const Mesh> share(Mesh m) { return std::make_shared<const Mesh>(std::move(m)); }

Mesh two_triangle_square() {
  auto domain = std::make_shared<const PolygonDomain>(PolygonDomain::rectangle(0, 0, 1, 1));
  return Mesh(domain, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}},
              {BoundaryTag::at_corner(0), BoundaryTag::at_corner(1), BoundaryTag::at_corner(2),
               BoundaryTag::at_corner(3)});
}

double sum_sq(const std::vector<double>& eta, const std::vector<int>& set) {
  double s = 0.0;
  for (int i : set) s += eta[static_cast<std::size_t>(i)] * eta[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace

TEST_SUITE("adapt") {
  TEST_CASE("Dorfler marking examples") {
    CHECK(dorfler_mark(std::vector<double>{3, 1, 1, 1}, 0.5) == std::vector<int>{0});
    CHECK(dorfler_mark(std::vector<double>{0, 2, 0, 1}, 1.0) == std::vector<int>{1, 3});
    // Ties go to the lower index.
    CHECK(dorfler_mark(std::vector<double>{1, 1, 1, 1}, 0.5) == std::vector<int>{0, 1});
    CHECK(dorfler_mark(std::vector<double>{0, 0}, 0.3).empty());
    CHECK_THROWS_AS(dorfler_mark(std::vector<double>{}, 0.3), DomainError);
    CHECK_THROWS_AS(dorfler_mark(std::vector<double>{1.0}, 0.0), DomainError);
    CHECK_THROWS_AS(dorfler_mark(std::vector<double>{1.0}, 1.5), DomainError);
    CHECK_THROWS_AS(dorfler_mark(std::vector<double>{1.0, -1.0}, 0.5), DomainError);
  }

  TEST_CASE("property: Dorfler sets are minimal, sufficient and scale invariant") {
    testgen::Rng rng(123);
    for (int trial = 0; trial < 300; ++trial) {
      const auto eta = testgen::random_indicators(rng, 1, 12);
      const double theta = 0.05 + 0.95 * uniform01(rng);
      const auto marked = dorfler_mark(eta, theta);
      CHECK(marked.size() == testgen::brute_force_min_marking(eta, theta));
      std::vector<int> all(eta.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      CHECK(sum_sq(eta, marked) >= theta * sum_sq(eta, all) * (1.0 - 1e-15));
      auto scaled = eta;
      const double c = std::exp(8.0 * uniform01(rng) - 4.0);
      for (double& v : scaled) v *= c;
      CHECK(dorfler_mark(scaled, theta) == marked);
    }
  }

  TEST_CASE("bisection of the two-triangle square") {
    const Mesh m = two_triangle_square();
    const Mesh same = bisect(m, std::vector<int>{});
    CHECK(same.vertices() == m.vertices());
    CHECK(same.triangles() == m.triangles());

    // The shared diagonal is the refinement edge of both, so marking one
    // triangle splits the neighbour too.
    const Mesh r = bisect(m, std::vector<int>{0});
    CHECK(r.triangle_count() == 4);
    CHECK(r.vertex_count() == 5);
    CHECK(r.vertex(4) == Point2{0.5, 0.5});
    CHECK_NOTHROW(validate(r));
    CHECK_THROWS_AS(bisect(m, std::vector<int>{2}), DomainError);
  }

  TEST_CASE("property: bisection stays conforming and refines every marked triangle") {
    testgen::Rng rng(321);
    for (int trial = 0; trial < 15; ++trial) {
      Mesh m = testgen::random_square_mesh(rng, testgen::uniform_size(rng, 0, 80));
      for (int round = 0; round < 4; ++round) {
        std::vector<int> marked;
        for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t)
          if (rng() % 3 == 0) marked.push_back(t);
        const Mesh r = bisect(m, marked);
        CHECK_NOTHROW(validate(r));
        CHECK_NOTHROW(EdgeTable{r});
        // Each marked parent is covered by at least two children: its
        // centroid's containing child has at most half its area.
        double area_before = 0.0, area_after = 0.0;
        for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t) area_before += m.area(t);
        for (int t = 0; t < static_cast<int>(r.triangle_count()); ++t) area_after += r.area(t);
        CHECK(area_after == doctest::Approx(area_before).epsilon(1e-12));
        std::set<std::pair<double, double>> old_vertices;
        for (const auto& p : m.vertices()) old_vertices.insert({p.x, p.y});
        for (int t : marked) {
          const Point2 c = m.centroid(t);
          for (int s = 0; s < static_cast<int>(r.triangle_count()); ++s) {
            const auto [a, b, d] = r.corners(s);
            const auto bary = barycentric(c, a, b, d);
            if (std::min({bary[0], bary[1], bary[2]}) >= -1e-12) CHECK(r.area(s) <= 0.5 * m.area(t) * (1.0 + 1e-12));
          }
        }
        if (!marked.empty()) CHECK(r.vertex_count() > m.vertex_count());
        m = r;
      }
    }
  }

  TEST_CASE("midpoint selection") {
    CHECK(select_midpoints(std::vector<double>{5, 3, 2}) == std::vector<int>{0});
    for (const std::size_t e : {1u, 2u, 7u, 40u}) {
      const auto chosen = select_midpoints(std::vector<double>(e, 0.25));
      CHECK(chosen.size() == std::max<std::size_t>(e / 2, 1));
      for (std::size_t i = 0; i < chosen.size(); ++i) CHECK(chosen[i] == static_cast<int>(i));
    }
    CHECK(select_midpoints(std::vector<double>{0.1, 100.0, 0.2, 0.3}) == std::vector<int>{1});
    CHECK(select_midpoints(std::vector<double>{1, 4, 2, 3}) == std::vector<int>{1});
    CHECK(select_midpoints(std::vector<double>{1, 1, 2, 3, 3}) == std::vector<int>{3});
    CHECK(select_midpoints(std::vector<double>{1, 1, 1, 3, 3, 1}) == std::vector<int>{3});
    CHECK(select_midpoints(std::vector<double>{2, 2, 1, 3, 1, 1}) == std::vector<int>{3, 0});
    CHECK_THROWS_AS(select_midpoints(std::vector<double>{}), DomainError);
  }

  TEST_CASE("property: midpoint refinement adds distinct points") {
    testgen::Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
      auto m = share(testgen::random_square_mesh(rng, testgen::uniform_size(rng, 0, 100)));
      std::vector<double> values;
      for (std::size_t v = 0; v < m->vertex_count(); ++v) values.push_back(std::exp(5.0 * uniform01(rng)));
      const DensityField rho(m, values);
      for (const auto w : {MidpointWeight::density, MidpointWeight::energy}) {
        const Mesh r = midpoint_refine(*m, rho, w);
        CHECK(r.vertex_count() > m->vertex_count());
        CHECK(testgen::min_pairwise_distance(r.vertices()) > 0.0);
        CHECK_NOTHROW(validate(r));
      }
    }
    // Uniform density inserts half of the edges.
    auto grid = share(structured_mesh(std::make_shared<const PolygonDomain>(PolygonDomain::rectangle(0, 0, 1, 1)), 0.25));
    const EdgeTable edges(*grid);
    const Mesh r = midpoint_refine(*grid, DensityField::uniform(grid), MidpointWeight::density);
    CHECK(r.vertex_count() == grid->vertex_count() + edges.size() / 2);
  }

  TEST_CASE("rate fits") {
    const std::vector<std::pair<double, double>> exact{{100, 0.2}, {400, 0.1}, {1600, 0.05}};
    const auto fit = fit_rate(exact);
    CHECK(std::abs(fit.c - 2.0) <= 1e-10);
    CHECK(std::abs(fit.p - 0.5) <= 1e-10);
    CHECK(fit.residual <= 1e-12);
    CHECK(target_vertices(fit, 0.01) == 40000);
    CHECK(target_vertices(FitResult{0.01, 0.7, 0.0}, 0.01) == 1);

    // Rows 3 to 6 of the L-shape table; values frozen from an independent
    // least-squares evaluation.
    const std::vector<std::pair<double, double>> table{
        {402, 4.9062e-02}, {705, 3.3949e-02}, {1326, 2.3215e-02}, {2702, 1.5467e-02}};
    const auto t = fit_rate(table);
    CHECK(t.c == doctest::Approx(1.813873953246928).epsilon(1e-12));
    CHECK(t.p == doctest::Approx(0.6044721061591886).epsilon(1e-12));
    const auto n = target_vertices(t, 0.01);
    CHECK(n == 5452);
    CHECK(n >= 4000);
    CHECK(n <= 9000);

    const std::vector<std::pair<double, double>> dup{{100, 0.2}, {100, 0.3}};
    const auto d = fit_rate(dup);
    CHECK(std::isfinite(d.c));
    CHECK(d.p == 0.0);
    CHECK_THROWS_AS(target_vertices(d, 0.01), StrategyError);
    CHECK_THROWS_AS(target_vertices(FitResult{1.0, -0.3, 0.0}, 0.01), StrategyError);
    CHECK_THROWS_AS(target_vertices(fit, 0.0), DomainError);
    CHECK_THROWS_AS(fit_rate(std::vector<std::pair<double, double>>{{100, 0.2}}), DomainError);
    CHECK_THROWS_AS(fit_rate(std::vector<std::pair<double, double>>{{100, 0.2}, {0, 0.1}}), DomainError);
    CHECK_THROWS_AS(fit_rate(std::vector<std::pair<double, double>>{{100, 0.2}, {200, -0.1}}), DomainError);
  }

  TEST_CASE("standard AFEM") {
    const auto problem = make_problem(BenchmarkId::lshape);
    const Mesh initial = lattice_mesh(problem.domain, 21);
    StandardAfemOptions opt;
    opt.tol = 1e9;
    auto h = run_standard_afem(problem, initial, opt);
    CHECK(h.iterations.size() == 1);
    CHECK(h.converged);

    opt.tol = 1e-6;
    opt.max_iters = 6;
    int observed = 0;
    opt.observer = [&](const IterationRecord&, const FeFunction&, const Estimate&) { ++observed; };
    h = run_standard_afem(problem, initial, opt);
    CHECK(h.iterations.size() == 6);
    CHECK(observed == 6);
    CHECK_FALSE(h.converged);
    for (std::size_t i = 1; i < h.iterations.size(); ++i) {
      CHECK(h.iterations[i].vertices > h.iterations[i - 1].vertices);
      CHECK(h.iterations[i].k == static_cast<int>(i));
    }
    opt.theta = 1.0;
    CHECK_THROWS_AS(run_standard_afem(problem, initial, opt), ConfigurationError);
    opt.theta = 0.3;
    opt.tol = 0.0;
    CHECK_THROWS_AS(run_standard_afem(problem, initial, opt), ConfigurationError);
  }

  TEST_CASE("HAT-AFEM option checks and trivial runs") {
    const auto problem = make_problem(BenchmarkId::square_smooth);
    HatAfemOptions opt;
    opt.tol = 1e9;
    const auto h = run_hat_afem(problem, opt);
    CHECK(h.iterations.size() == 1);
    CHECK(h.converged);
    CHECK(h.iterations[0].vertices == opt.n0);

    auto bad = opt;
    bad.n0 = 3;
    CHECK_THROWS_AS(run_hat_afem(problem, bad), ConfigurationError);
    bad = opt;
    bad.lloyd_iters = 0;
    CHECK_THROWS_AS(run_hat_afem(problem, bad), ConfigurationError);
    bad = opt;
    bad.fit_first = 4;
    CHECK_THROWS_AS(run_hat_afem(problem, bad), ConfigurationError);
    bad = opt;
    bad.tol = -1.0;
    CHECK_THROWS_AS(run_hat_afem(problem, bad), ConfigurationError);
    bad = opt;
    bad.max_vertices = opt.n0 - 1;
    CHECK_THROWS_AS(run_hat_afem(problem, bad), ConfigurationError);
  }

  TEST_CASE("property: HAT-AFEM never exceeds seven solves") {
    const auto problem = make_problem(BenchmarkId::square_smooth);
    testgen::Rng rng(9);
    for (int trial = 0; trial < 3; ++trial) {
      HatAfemOptions opt;
      opt.tol = 0.03 + 0.03 * uniform01(rng);
      opt.n0 = testgen::uniform_size(rng, 4, 40);
      opt.lloyd_iters = 1;
      opt.seed = rng();
      opt.fit_first = static_cast<int>(rng() % 4);
      opt.max_vertices = 20000;
      const auto h = run_hat_afem(problem, opt);
      CHECK(h.iterations.size() <= 7);
      CHECK(h.fit.has_value() == (h.iterations.size() >= 6));
    }
  }

  TEST_CASE("benchmark runs refine and reduce the estimator") {
    for (const auto id : {BenchmarkId::lshape, BenchmarkId::inner_layer, BenchmarkId::peak}) {
      const auto h = run(default_config(id, Algorithm::hat)).history;
      INFO(to_string(id));
      CHECK(h.iterations.size() <= 7);
      for (std::size_t i = 1; i < h.iterations.size(); ++i) {
        CHECK(h.iterations[i].vertices > h.iterations[i - 1].vertices);
        CHECK(h.iterations[i].eta < h.iterations[i - 1].eta);
      }
      REQUIRE(h.target.has_value());
      CHECK(*h.target > h.iterations[4].vertices);
    }
  }
}
