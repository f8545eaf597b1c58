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

// Two-phase primal simplex over a dense tableau with bounded variables.
//
// Columns are laid out as [structural | slack | artificial]. Row i reads
//   a_i . x + s_i + sigma_i * t_i = rhs_i
// with the slack bounds encoding the row relation and the artificial t_i
// absorbing the initial residual. Nonbasic variables sit at a finite bound,
// or at zero when free.

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "xpinflate/solver.hpp"

namespace xpinflate::solver {
namespace {

enum class State { kBasic, kAtLower, kAtUpper, kFreeZero };

enum class PhaseResult { kOptimal, kUnbounded };

constexpr int kRefactorInterval = 64;

class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, const SolverOptions& options)
      : options_(options),
        n_(lp.num_variables()),
        m_(lp.num_rows()),
        total_(n_ + 2 * m_) {
    a_ = Eigen::MatrixXd::Zero(m_, total_);
    b_.resize(m_);
    lower_.resize(total_);
    upper_.resize(total_);
    for (int j = 0; j < n_; ++j) {
      lower_[j] = lp.variables()[j].lower;
      upper_[j] = lp.variables()[j].upper;
    }
    for (int i = 0; i < m_; ++i) {
      const Row& row = lp.rows()[i];
      a_.row(i).head(n_) = row.coefficients.transpose();
      b_[i] = row.rhs;
      const int s = n_ + i;
      a_(i, s) = 1.0;
      switch (row.relation) {
        case Relation::kLessEqual: lower_[s] = 0.0; upper_[s] = kInfinity; break;
        case Relation::kGreaterEqual: lower_[s] = -kInfinity; upper_[s] = 0.0; break;
        case Relation::kEqual: lower_[s] = 0.0; upper_[s] = 0.0; break;
      }
      lower_[n_ + m_ + i] = 0.0;
      upper_[n_ + m_ + i] = kInfinity;
    }
    cost_sign_ = lp.objective().sense == Sense::kMaximize ? -1.0 : 1.0;
    if (lp.objective().sense != Sense::kFeasibility) {
      objective_ = Eigen::VectorXd::Zero(total_);
      objective_.head(n_) = cost_sign_ * lp.objective().coefficients;
    }
    feasibility_only_ = lp.objective().sense == Sense::kFeasibility;
  }

  SolveOutcome run() {
    SolveOutcome outcome;
    initialise();

    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total_);
    phase1.tail(m_).setOnes();
    optimise(phase1);
    refactor();
    const double infeasibility = x_.tail(m_).sum();
    outcome.iterations = iterations_;
    if (infeasibility > options_.feasibility_tolerance) {
      outcome.status = SolveStatus::kInfeasible;
      return outcome;
    }

    for (int i = 0; i < m_; ++i) upper_[n_ + m_ + i] = 0.0;
    drive_out_artificials();

    if (feasibility_only_) {
      outcome.status = SolveStatus::kFeasible;
    } else {
      const PhaseResult result = optimise(objective_);
      refactor();
      outcome.status =
          result == PhaseResult::kOptimal ? SolveStatus::kOptimal : SolveStatus::kUnbounded;
    }
    outcome.iterations = iterations_;
    outcome.witness = x_.head(n_);
    for (int j = 0; j < n_; ++j) {
      // Basic values carry factorisation noise; snap them back when inside tolerance.
      double& v = outcome.witness[j];
      if (v < lower_[j] && v > lower_[j] - options_.feasibility_tolerance) v = lower_[j];
      if (v > upper_[j] && v < upper_[j] + options_.feasibility_tolerance) v = upper_[j];
    }
    if (!feasibility_only_) {
      outcome.objective = cost_sign_ * objective_.head(n_).dot(outcome.witness);
    }
    return outcome;
  }

 private:
  void initialise() {
    x_ = Eigen::VectorXd::Zero(total_);
    state_.assign(total_, State::kAtLower);
    for (int j = 0; j < n_ + m_; ++j) {
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
        state_[j] = State::kAtLower;
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
        state_[j] = State::kAtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = State::kFreeZero;
      }
    }
    const Eigen::VectorXd residual = b_ - a_.leftCols(n_ + m_) * x_.head(n_ + m_);
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const int t = n_ + m_ + i;
      a_(i, t) = residual[i] >= 0.0 ? 1.0 : -1.0;
      x_[t] = std::abs(residual[i]);
      state_[t] = State::kBasic;
      basis_[i] = t;
    }
    refactor();
  }

  // Rebuilds B^-1 A and the basic values from the original matrix.
  void refactor() {
    if (m_ == 0) {
      tableau_.resize(0, total_);
      return;
    }
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int i = 0; i < m_; ++i) basis_matrix.col(i) = a_.col(basis_[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!lu.isInvertible()) throw SolverError("simplex basis became singular");
    tableau_ = lu.solve(a_);
    Eigen::VectorXd nonbasic = x_;
    for (int i = 0; i < m_; ++i) nonbasic[basis_[i]] = 0.0;
    const Eigen::VectorXd basic = lu.solve(b_ - a_ * nonbasic);
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = basic[i];
    since_refactor_ = 0;
  }

  bool is_fixed(int j) const { return lower_[j] == upper_[j]; }

  PhaseResult optimise(const Eigen::VectorXd& cost) {
    bool bland = false;
    int degenerate = 0;
    for (;;) {
      if (++iterations_ > options_.iteration_limit) {
        throw SolverError("simplex iteration limit exceeded");
      }
      if (since_refactor_ >= kRefactorInterval) refactor();

      Eigen::VectorXd basic_cost(m_);
      for (int i = 0; i < m_; ++i) basic_cost[i] = cost[basis_[i]];
      const Eigen::VectorXd reduced = cost - tableau_.transpose() * basic_cost;

      int entering = -1;
      double direction = 0.0;
      double best = 0.0;
      const double tol = options_.reduced_cost_tolerance;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == State::kBasic || is_fixed(j)) continue;
        double dir = 0.0;
        if ((state_[j] == State::kAtLower || state_[j] == State::kFreeZero) && reduced[j] < -tol) {
          dir = 1.0;
        } else if ((state_[j] == State::kAtUpper || state_[j] == State::kFreeZero) &&
                   reduced[j] > tol) {
          dir = -1.0;
        }
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(reduced[j]) > best) {
          best = std::abs(reduced[j]);
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return PhaseResult::kOptimal;

      // Ratio test.
      double step = kInfinity;
      int leaving_row = -1;
      double leaving_pivot = 0.0;
      if (std::isfinite(lower_[entering]) && std::isfinite(upper_[entering])) {
        step = upper_[entering] - lower_[entering];
      }
      for (int i = 0; i < m_; ++i) {
        const double alpha = tableau_(i, entering);
        if (std::abs(alpha) <= options_.pivot_tolerance) continue;
        const int k = basis_[i];
        const double rate = -alpha * direction;
        double limit = kInfinity;
        if (rate < 0.0 && std::isfinite(lower_[k])) {
          limit = (x_[k] - lower_[k]) / -rate;
        } else if (rate > 0.0 && std::isfinite(upper_[k])) {
          limit = (upper_[k] - x_[k]) / rate;
        }
        if (!std::isfinite(limit)) continue;
        limit = std::max(limit, 0.0);
        const double tie = std::isfinite(step) ? 1e-12 * std::max(1.0, std::abs(step)) : 0.0;
        bool take = false;
        if (limit < step - tie) {
          take = true;
        } else if (leaving_row >= 0 && limit <= step + tie) {
          take = bland ? k < basis_[leaving_row] : std::abs(alpha) > std::abs(leaving_pivot);
        }
        if (take) {
          step = limit;
          leaving_row = i;
          leaving_pivot = alpha;
        }
      }
      if (!std::isfinite(step)) return PhaseResult::kUnbounded;

      if (step <= 1e-12) {
        if (++degenerate >= options_.degenerate_streak) bland = true;
      } else {
        degenerate = 0;
      }

      x_[entering] += direction * step;
      for (int i = 0; i < m_; ++i) {
        x_[basis_[i]] -= tableau_(i, entering) * direction * step;
      }

      if (leaving_row < 0) {
        // Entering variable runs into its own opposite bound.
        state_[entering] = direction > 0 ? State::kAtUpper : State::kAtLower;
        x_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
        continue;
      }
      const int leaving = basis_[leaving_row];
      const double rate = -leaving_pivot * direction;
      if (rate < 0.0) {
        state_[leaving] = State::kAtLower;
        x_[leaving] = lower_[leaving];
      } else {
        state_[leaving] = State::kAtUpper;
        x_[leaving] = upper_[leaving];
      }
      pivot(leaving_row, entering);
    }
  }

  void pivot(int row, int column) {
    const double alpha = tableau_(row, column);
    tableau_.row(row) /= alpha;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = tableau_(i, column);
      if (factor != 0.0) tableau_.row(i) -= factor * tableau_.row(row);
    }
    basis_[row] = column;
    state_[column] = State::kBasic;
    ++since_refactor_;
  }

  // Artificials left basic at zero after phase 1 are swapped for structural
  // or slack columns where possible; the rest mark redundant rows.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      const int k = basis_[i];
      if (k < n_ + m_) continue;
      int best = -1;
      double best_abs = options_.pivot_tolerance * 1e3;
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == State::kBasic) continue;
        if (std::abs(tableau_(i, j)) > best_abs) {
          best_abs = std::abs(tableau_(i, j));
          best = j;
        }
      }
      if (best < 0) continue;
      state_[k] = State::kAtLower;
      x_[k] = 0.0;
      pivot(i, best);
    }
    refactor();
  }

  SolverOptions options_;
  int n_;
  int m_;
  int total_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  Eigen::VectorXd objective_;
  double cost_sign_ = 1.0;
  bool feasibility_only_ = false;

  Eigen::MatrixXd tableau_;
  Eigen::VectorXd x_;
  std::vector<int> basis_;
  std::vector<State> state_;
  std::int64_t iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace

SolveOutcome solve_lp(const LinearProgram& problem, const SolverOptions& options) {
  problem.validate();
  BoundedSimplex simplex(problem, options);
  return simplex.run();
}

}  // namespace xpinflate::solver
