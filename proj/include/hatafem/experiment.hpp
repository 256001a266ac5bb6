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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hatafem/adapt.hpp"
#include "hatafem/benchmarks.hpp"

namespace hatafem {

enum class Algorithm { standard, hat };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct RunConfig {
  BenchmarkId benchmark = BenchmarkId::lshape;
  Algorithm algorithm = Algorithm::hat;
  EstimatorKind estimator = EstimatorKind::recovery;
  double tol = 0.01;
  double theta = 0.3;
  std::size_t n0 = 216;
  int lloyd_iters = 20;
  std::uint64_t seed = 1;
  int max_iters = 80;
  /// Output directory; nothing is written when empty.
  std::filesystem::path out;
  /// Per-iteration VTK and .node/.ele files.
  bool write_meshes = true;
  /// Fill the seconds column of history.csv (otherwise zero, keeping the file
  /// reproducible byte for byte).
  bool timing = false;

  /// Throws ConfigurationError on invalid values.
  void check() const;
};

/// Defaults for a benchmark and algorithm: tolerance, n0 and estimator.
RunConfig default_config(BenchmarkId benchmark, Algorithm algorithm);

struct RunResult {
  AdaptHistory history;
  /// 0 on convergence, 2 when the iteration limit was reached.
  int exit_code = 0;
};

RunResult run(const RunConfig& config);

/// Columns k, N, error, eta, effectivity, seconds.
std::string history_csv(const AdaptHistory& history, bool timing);

/// Structured lattice mesh whose vertex count is closest to n among lattices
/// that contain every domain corner.
Mesh lattice_mesh(std::shared_ptr<const PolygonDomain> domain, std::size_t n);

struct LloydDemoRow {
  int iter = 0;
  std::size_t vertices = 0;
  double error = 0.0;
  double mean_quality = 0.0;
  double min_angle = 0.0;
  double energy = 0.0;
};

/// Random points in the unit square (a random boundary sample with the four
/// corners plus random interior points), then iters uniform-density Lloyd
/// steps; the square-smooth problem is solved after each step.
std::vector<LloydDemoRow> lloyd_demo(std::size_t n_points, int iters, std::uint64_t seed);
std::string lloyd_demo_csv(const std::vector<LloydDemoRow>& rows);

}  // namespace hatafem
