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

// Depth-first branch-and-bound over binaries. Indicator rows are exact at
// nodes where their binary is fixed and lowered to big-M rows elsewhere.

#include <cmath>
#include <optional>
#include <vector>

#include "xpinflate/solver.hpp"

namespace xpinflate::solver {
namespace {

using NodeBounds = std::vector<Interval>;

NodeBounds root_bounds(const LinearProgram& lp) {
  NodeBounds bounds;
  bounds.reserve(lp.variables().size());
  for (const auto& v : lp.variables()) bounds.push_back({v.lower, v.upper});
  return bounds;
}

bool is_free(const Interval& b) { return b.lower != b.upper; }

class BranchAndBound {
 public:
  BranchAndBound(const MixedIntegerProgram& problem, Sense mode, const SolverOptions& options)
      : problem_(problem), mode_(mode), options_(options) {
    if (mode_ != Sense::kFeasibility) {
      const auto& objective = problem.base().objective();
      if (objective.coefficients.size() != problem.base().num_variables()) {
        throw InputError("optimisation mode requested but the problem carries no objective");
      }
      objective_ = objective.coefficients;
    }
  }

  SolveOutcome run() {
    std::vector<NodeBounds> stack{root_bounds(problem_.base())};
    while (!stack.empty()) {
      NodeBounds node = std::move(stack.back());
      stack.pop_back();
      if (++nodes_ > options_.node_limit) {
        throw ResourceError("branch-and-bound node limit exceeded", incumbent_,
                            incumbent_ ? std::optional<double>(original(incumbent_value_))
                                       : std::nullopt);
      }

      const SolveOutcome relaxed = solve_node(node);
      if (relaxed.status == SolveStatus::kInfeasible) continue;
      if (relaxed.status == SolveStatus::kUnbounded) {
        const int b = first_free_binary(node);
        if (b < 0) return finish_unbounded();
        push_children(stack, node, b, 1);
        continue;
      }
      if (prunable(relaxed)) continue;

      const int branch = most_fractional(node, relaxed.witness);
      if (branch >= 0) {
        const int near = relaxed.witness[branch] >= 0.5 ? 1 : 0;
        push_children(stack, node, branch, near);
        continue;
      }

      // Integral relaxation: confirm on the leaf with every binary fixed.
      NodeBounds leaf = node;
      for (int b : problem_.binaries()) {
        const double v = std::round(relaxed.witness[b]);
        leaf[b] = {v, v};
      }
      const SolveOutcome exact = solve_node(leaf);
      if (exact.has_point()) {
        if (mode_ == Sense::kFeasibility) return finish(exact, SolveStatus::kFeasible);
        if (exact.status == SolveStatus::kUnbounded) return finish_unbounded();
        accept(exact);
        continue;
      }
      const int b = first_free_binary(node);
      if (b >= 0) push_children(stack, node, b, 1);
    }
    if (incumbent_) {
      SolveOutcome outcome;
      outcome.status = SolveStatus::kOptimal;
      outcome.witness = *incumbent_;
      outcome.objective = original(incumbent_value_);
      outcome.iterations = iterations_;
      outcome.nodes = nodes_;
      return outcome;
    }
    SolveOutcome outcome;
    outcome.status = SolveStatus::kInfeasible;
    outcome.iterations = iterations_;
    outcome.nodes = nodes_;
    return outcome;
  }

 private:
  // Objective values are handled internally as minimisation.
  double internal(double value) const { return mode_ == Sense::kMaximize ? -value : value; }
  double original(double value) const { return internal(value); }

  SolveOutcome solve_node(const NodeBounds& bounds) {
    LinearProgram lp = relax_indicators_with_bigm(problem_, bounds);
    if (mode_ == Sense::kFeasibility) {
      lp.set_objective(Sense::kFeasibility, Eigen::VectorXd{});
    } else {
      lp.set_objective(mode_, objective_);
    }
    SolveOutcome outcome = solve_lp(lp, options_);
    iterations_ += outcome.iterations;
    return outcome;
  }

  bool prunable(const SolveOutcome& relaxed) const {
    if (!incumbent_ || mode_ == Sense::kFeasibility) return false;
    return internal(relaxed.objective) >= incumbent_value_ - options_.optimality_gap;
  }

  int most_fractional(const NodeBounds& node, const Eigen::VectorXd& point) const {
    int best = -1;
    double best_gap = options_.integrality_tolerance;
    for (int b : problem_.binaries()) {
      if (!is_free(node[b])) continue;
      const double gap = std::abs(point[b] - std::round(point[b]));
      if (gap > best_gap) {
        best_gap = gap;
        best = b;
      }
    }
    return best;
  }

  int first_free_binary(const NodeBounds& node) const {
    for (int b : problem_.binaries()) {
      if (is_free(node[b])) return b;
    }
    return -1;
  }

  // The child fixed to `near` is explored first.
  static void push_children(std::vector<NodeBounds>& stack, const NodeBounds& node, int binary,
                            int near) {
    NodeBounds far_child = node;
    NodeBounds near_child = node;
    const double far = 1.0 - near;
    far_child[binary] = {far, far};
    near_child[binary] = {static_cast<double>(near), static_cast<double>(near)};
    stack.push_back(std::move(far_child));
    stack.push_back(std::move(near_child));
  }

  void accept(const SolveOutcome& exact) {
    const double value = internal(exact.objective);
    if (!incumbent_ || value < incumbent_value_) {
      incumbent_ = exact.witness;
      incumbent_value_ = value;
    }
  }

  SolveOutcome finish(const SolveOutcome& exact, SolveStatus status) const {
    SolveOutcome outcome = exact;
    outcome.status = status;
    outcome.iterations = iterations_;
    outcome.nodes = nodes_;
    return outcome;
  }

  SolveOutcome finish_unbounded() const {
    SolveOutcome outcome;
    outcome.status = SolveStatus::kUnbounded;
    outcome.iterations = iterations_;
    outcome.nodes = nodes_;
    return outcome;
  }

  const MixedIntegerProgram& problem_;
  Sense mode_;
  SolverOptions options_;
  Eigen::VectorXd objective_;
  std::optional<Eigen::VectorXd> incumbent_;
  double incumbent_value_ = 0.0;
  std::int64_t nodes_ = 0;
  std::int64_t iterations_ = 0;
};

}  // namespace

SolveOutcome solve_milp(const MixedIntegerProgram& problem, Sense mode,
                        const SolverOptions& options) {
  problem.validate();
  if (problem.binaries().empty()) {
    LinearProgram lp = problem.base();
    if (mode == Sense::kFeasibility) {
      lp.set_objective(Sense::kFeasibility, Eigen::VectorXd{});
    } else {
      if (lp.objective().coefficients.size() != lp.num_variables()) {
        throw InputError("optimisation mode requested but the problem carries no objective");
      }
      lp.set_objective(mode, lp.objective().coefficients);
    }
    return solve_lp(lp, options);
  }
  BranchAndBound search(problem, mode, options);
  return search.run();
}

SolveOutcome solve_milp(const MixedIntegerProgram& problem, const SolverOptions& options) {
  return solve_milp(problem, problem.base().objective().sense, options);
}

}  // namespace xpinflate::solver
