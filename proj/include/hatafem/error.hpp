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

#include <stdexcept>
#include <string>

namespace hatafem {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-conforming connectivity, isolated vertices, broken adjacency.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Zero or negative area element.
class DegenerateElementError : public Error {
 public:
  using Error::Error;
};

/// Invalid polygon, collinear point set, point outside the domain...
class GeometryError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class DuplicatePointError : public GeometryError {
 public:
  DuplicatePointError(std::size_t first, std::size_t second)
      : GeometryError("duplicate points " + std::to_string(first) + " and " +
                      std::to_string(second)),
        first_(first),
        second_(second) {}

  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

class ContainmentError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class BoundaryRecoveryError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Coefficient sample that is not symmetric positive definite.
class CoefficientError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// An operation needs data the problem does not provide (e.g. exact solution).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a mesh do not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rate-fitting strategy cannot produce a target (non-converging history).
class StrategyError : public Error {
 public:
  using Error::Error;
};

}  // namespace hatafem
