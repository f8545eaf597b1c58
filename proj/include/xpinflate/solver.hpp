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

// Dense bounded-variable simplex and branch-and-bound over binaries with
// first-class indicator constraints. Problems here are small (tens of
// variables), so everything is stored densely in Eigen types.

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "xpinflate/errors.hpp"

namespace xpinflate::solver {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kFeasibility, kMinimize, kMaximize };
enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kUnbounded };

const char* to_string(SolveStatus status);

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Row {
  Eigen::VectorXd coefficients;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct Objective {
  Sense sense = Sense::kFeasibility;
  Eigen::VectorXd coefficients;
};

// Sparse (index, coefficient) terms used to assemble dense rows.
using Terms = std::vector<std::pair<int, double>>;

class LinearProgram {
 public:
  int add_variable(std::string name, double lower, double upper);
  // Appends a row; `terms` are expanded to a dense vector over the current
  // variables. Rows are zero-padded when variables are added later.
  int add_row(const Terms& terms, Relation relation, double rhs);
  void add_row(Row row);

  void set_objective(Sense sense, const Terms& terms);
  void set_objective(Sense sense, Eigen::VectorXd coefficients);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  const std::vector<Variable>& variables() const { return variables_; }
  std::vector<Variable>& variables() { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Objective& objective() const { return objective_; }

  Row make_row(const Terms& terms, Relation relation, double rhs) const;

  // Throws InputError on dimension mismatch or inverted bounds.
  void validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  Objective objective_;
};

struct Indicator {
  int binary = -1;
  int active_value = 1;
  Row implied;
};

class MixedIntegerProgram {
 public:
  MixedIntegerProgram() = default;
  explicit MixedIntegerProgram(LinearProgram base) : base_(std::move(base)) {}

  int add_variable(std::string name, double lower, double upper);
  int add_binary(std::string name);
  void add_indicator(int binary, int active_value, const Terms& terms, Relation relation,
                     double rhs);

  LinearProgram& base() { return base_; }
  const LinearProgram& base() const { return base_; }
  const std::vector<int>& binaries() const { return binaries_; }
  const std::vector<Indicator>& indicators() const { return indicators_; }

  bool is_binary(int variable) const;

  void validate() const;

 private:
  LinearProgram base_;
  std::vector<int> binaries_;
  std::vector<Indicator> indicators_;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::kInfeasible;
  double objective = 0.0;
  Eigen::VectorXd witness;
  std::int64_t iterations = 0;
  std::int64_t nodes = 0;

  bool has_point() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kFeasible;
  }
};

struct SolverOptions {
  double feasibility_tolerance = 1e-7;
  double integrality_tolerance = 1e-6;
  double optimality_gap = 1e-6;
  double pivot_tolerance = 1e-9;
  double reduced_cost_tolerance = 1e-9;
  std::int64_t node_limit = 1'000'000;
  std::int64_t iteration_limit = 200'000;
  // Bland's rule takes over after this many consecutive degenerate pivots.
  int degenerate_streak = 50;
};

SolveOutcome solve_lp(const LinearProgram& problem, const SolverOptions& options = {});

SolveOutcome solve_milp(const MixedIntegerProgram& problem, Sense mode,
                        const SolverOptions& options = {});

// Solves with the problem's own objective sense.
SolveOutcome solve_milp(const MixedIntegerProgram& problem, const SolverOptions& options = {});

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Lowers every indicator to a big-M row whose M comes from `bounds`.
// Binaries become continuous in their current bounds. Rows that cannot bind
// under the given bounds are dropped.
LinearProgram relax_indicators_with_bigm(const MixedIntegerProgram& problem,
                                         const std::vector<Interval>& bounds);

// Same, using the variable bounds stored in the problem.
LinearProgram relax_indicators_with_bigm(const MixedIntegerProgram& problem);

}  // namespace xpinflate::solver
