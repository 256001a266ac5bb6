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

// Command-line driver for the adaptive benchmarks and the Lloyd demo.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "hatafem/error.hpp"
#include "hatafem/experiment.hpp"

namespace {

void configure_logging() {
  const char* env = std::getenv("HAT_AFEM_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet")
    spdlog::set_level(spdlog::level::off);
  else if (level == "debug")
    spdlog::set_level(spdlog::level::debug);
  else
    spdlog::set_level(spdlog::level::info);
  spdlog::set_pattern("[%l] %v");
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Adaptive P1 finite elements with recovery estimators and CVDT meshes"};
  app.require_subcommand(0, 1);

  std::string benchmark = "lshape";
  std::string algorithm = "hat";
  std::optional<std::string> estimator;
  std::optional<double> tol;
  double theta = 0.3;
  std::optional<std::size_t> n0;
  int lloyd_iters = 20;
  std::uint64_t seed = 1;
  std::string out = "out";
  int max_iters = 80;
  bool timing = false;
  bool no_meshes = false;

  app.add_option("--benchmark", benchmark, "square-smooth | lshape | inner-layer | peak")->capture_default_str();
  app.add_option("--algorithm", algorithm, "standard | hat")->capture_default_str();
  app.add_option("--estimator", estimator, "residual | recovery | weighted-recovery");
  app.add_option("--tol", tol, "Stopping tolerance for the global estimator");
  app.add_option("--theta", theta, "Doerfler bulk parameter (standard algorithm)")->capture_default_str();
  app.add_option("--n0", n0, "Initial vertex count");
  app.add_option("--lloyd-iters", lloyd_iters, "Lloyd steps per optimization")->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--max-iters", max_iters, "Maximum solves (standard algorithm)")->capture_default_str();
  app.add_flag("--timing", timing, "Record wall times in history.csv");
  app.add_flag("--no-meshes", no_meshes, "Skip per-iteration mesh and VTK output");

  auto* demo = app.add_subcommand("lloyd-demo", "Error history of uniform Lloyd smoothing on random points");
  std::size_t demo_points = 1089;
  int demo_iters = 50;
  std::uint64_t demo_seed = 1;
  std::string demo_out = "lloyd.csv";
  demo->add_option("--points", demo_points, "Number of points")->capture_default_str();
  demo->add_option("--iters", demo_iters, "Lloyd steps")->capture_default_str();
  demo->add_option("--seed", demo_seed, "Random seed")->capture_default_str();
  demo->add_option("--out", demo_out, "CSV file")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (demo->parsed()) {
      const auto rows = hatafem::lloyd_demo(demo_points, demo_iters, demo_seed);
      std::ofstream os(demo_out, std::ios::binary);
      if (!os) throw hatafem::Error(fmt::format("cannot write {}", demo_out));
      os << hatafem::lloyd_demo_csv(rows);
      return 0;
    }
    auto config = hatafem::default_config(hatafem::parse_benchmark(benchmark), hatafem::parse_algorithm(algorithm));
    if (estimator) config.estimator = hatafem::parse_estimator(*estimator);
    if (tol) config.tol = *tol;
    if (n0) config.n0 = *n0;
    config.theta = theta;
    config.lloyd_iters = lloyd_iters;
    config.seed = seed;
    config.out = out;
    config.max_iters = max_iters;
    config.timing = timing;
    config.write_meshes = !no_meshes;
    const auto result = hatafem::run(config);
    const auto& h = result.history;
    if (!h.iterations.empty()) {
      const auto last = h.iterations.size() - 1;
      const auto eff = h.effectivity(last);
      fmt::print("{} after {} solves: N={} eta={:.4e}{}\n", h.converged ? "converged" : "stopped",
                 h.iterations.size(), h.iterations[last].vertices, h.iterations[last].eta,
                 eff ? fmt::format(" effectivity={:.4f}", *eff) : "");
    }
    return result.exit_code;
  } catch (const hatafem::ConfigurationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
