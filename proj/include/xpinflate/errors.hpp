/*
 * Copyright 2026 The xpinflate Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace xpinflate {

// Malformed input: dimension mismatches, bad indices, invalid files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown inside the simplex or branch-and-bound.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Node or iteration budget exhausted. Carries the best incumbent found so far.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::optional<Eigen::VectorXd> incumbent,
                std::optional<double> incumbent_value)
      : std::runtime_error(what),
        incumbent_(std::move(incumbent)),
        incumbent_value_(incumbent_value) {}

  const std::optional<Eigen::VectorXd>& incumbent() const { return incumbent_; }
  std::optional<double> incumbent_value() const { return incumbent_value_; }

 private:
  std::optional<Eigen::VectorXd> incumbent_;
  std::optional<double> incumbent_value_;
};

}  // namespace xpinflate
