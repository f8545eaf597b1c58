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

#include <cmath>
#include <string>

#include "xpinflate/solver.hpp"

namespace xpinflate::solver {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

int LinearProgram::add_variable(std::string name, double lower, double upper) {
  variables_.push_back({std::move(name), lower, upper});
  const auto n = static_cast<Eigen::Index>(variables_.size());
  for (auto& row : rows_) row.coefficients.conservativeResizeLike(Eigen::VectorXd::Zero(n));
  if (objective_.coefficients.size() > 0) {
    objective_.coefficients.conservativeResizeLike(Eigen::VectorXd::Zero(n));
  }
  return static_cast<int>(n - 1);
}

Row LinearProgram::make_row(const Terms& terms, Relation relation, double rhs) const {
  Row row{Eigen::VectorXd::Zero(num_variables()), relation, rhs};
  for (const auto& [index, value] : terms) {
    if (index < 0 || index >= num_variables()) {
      throw InputError("row term references variable " + std::to_string(index) + " of " +
                       std::to_string(num_variables()));
    }
    row.coefficients[index] += value;
  }
  return row;
}

int LinearProgram::add_row(const Terms& terms, Relation relation, double rhs) {
  rows_.push_back(make_row(terms, relation, rhs));
  return num_rows() - 1;
}

void LinearProgram::add_row(Row row) { rows_.push_back(std::move(row)); }

void LinearProgram::set_objective(Sense sense, const Terms& terms) {
  set_objective(sense, make_row(terms, Relation::kEqual, 0.0).coefficients);
}

void LinearProgram::set_objective(Sense sense, Eigen::VectorXd coefficients) {
  objective_ = {sense, std::move(coefficients)};
}

void LinearProgram::validate() const {
  const auto n = num_variables();
  for (int j = 0; j < n; ++j) {
    const auto& v = variables_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw InputError("variable '" + v.name + "' has invalid bounds [" +
                       std::to_string(v.lower) + ", " + std::to_string(v.upper) + "]");
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    const auto& row = rows_[i];
    if (row.coefficients.size() != n) {
      throw InputError("row " + std::to_string(i) + " has " +
                       std::to_string(row.coefficients.size()) + " coefficients, expected " +
                       std::to_string(n));
    }
    if (!row.coefficients.allFinite() || !std::isfinite(row.rhs)) {
      throw InputError("row " + std::to_string(i) + " contains a non-finite value");
    }
  }
  if (objective_.sense != Sense::kFeasibility && objective_.coefficients.size() != n) {
    throw InputError("objective has " + std::to_string(objective_.coefficients.size()) +
                     " coefficients, expected " + std::to_string(n));
  }
}

int MixedIntegerProgram::add_variable(std::string name, double lower, double upper) {
  const int index = base_.add_variable(std::move(name), lower, upper);
  const auto n = static_cast<Eigen::Index>(base_.num_variables());
  for (auto& indicator : indicators_) {
    indicator.implied.coefficients.conservativeResizeLike(Eigen::VectorXd::Zero(n));
  }
  return index;
}

int MixedIntegerProgram::add_binary(std::string name) {
  const int index = add_variable(std::move(name), 0.0, 1.0);
  binaries_.push_back(index);
  return index;
}

void MixedIntegerProgram::add_indicator(int binary, int active_value, const Terms& terms,
                                        Relation relation, double rhs) {
  indicators_.push_back({binary, active_value, base_.make_row(terms, relation, rhs)});
}

bool MixedIntegerProgram::is_binary(int variable) const {
  for (int b : binaries_) {
    if (b == variable) return true;
  }
  return false;
}

void MixedIntegerProgram::validate() const {
  base_.validate();
  const int n = base_.num_variables();
  for (int b : binaries_) {
    if (b < 0 || b >= n) throw InputError("binary index " + std::to_string(b) + " out of range");
    const auto& v = base_.variables()[b];
    if (v.lower < 0.0 || v.upper > 1.0) {
      throw InputError("binary '" + v.name + "' has bounds outside [0, 1]");
    }
  }
  for (std::size_t k = 0; k < indicators_.size(); ++k) {
    const auto& ind = indicators_[k];
    if (!is_binary(ind.binary)) {
      throw InputError("indicator " + std::to_string(k) + " is keyed on a non-binary variable");
    }
    if (ind.active_value != 0 && ind.active_value != 1) {
      throw InputError("indicator " + std::to_string(k) + " has activating value outside {0,1}");
    }
    if (ind.implied.coefficients.size() != n) {
      throw InputError("indicator " + std::to_string(k) + " row has wrong dimension");
    }
    for (int b : binaries_) {
      if (ind.implied.coefficients[b] != 0.0) {
        throw InputError("indicator " + std::to_string(k) +
                         " implied row references binary variable '" +
                         base_.variables()[b].name + "'");
      }
    }
  }
}

namespace {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

Range row_activity(const Row& row, const std::vector<Interval>& bounds,
                   const std::vector<Variable>& variables) {
  Range r;
  for (Eigen::Index j = 0; j < row.coefficients.size(); ++j) {
    const double a = row.coefficients[j];
    if (a == 0.0) continue;
    const auto& b = bounds[j];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper)) {
      throw InputError("indicator row references unbounded variable '" + variables[j].name +
                       "'; propagate bounds before relaxing");
    }
    r.min += a > 0 ? a * b.lower : a * b.upper;
    r.max += a > 0 ? a * b.upper : a * b.lower;
  }
  return r;
}

// a.v <= rhs when z == active, relaxed by (activity max - rhs) otherwise.
void add_bigm_upper(LinearProgram& lp, const Row& implied, int z, int active, double upper_activity) {
  const double m = upper_activity - implied.rhs;
  if (m <= 0.0) return;
  Row row{implied.coefficients, Relation::kLessEqual, implied.rhs};
  if (active == 1) {
    row.coefficients[z] += m;
    row.rhs += m;
  } else {
    row.coefficients[z] -= m;
  }
  lp.add_row(std::move(row));
}

void add_bigm_lower(LinearProgram& lp, const Row& implied, int z, int active, double lower_activity) {
  const double m = implied.rhs - lower_activity;
  if (m <= 0.0) return;
  Row row{implied.coefficients, Relation::kGreaterEqual, implied.rhs};
  if (active == 1) {
    row.coefficients[z] -= m;
    row.rhs -= m;
  } else {
    row.coefficients[z] += m;
  }
  lp.add_row(std::move(row));
}

}  // namespace

LinearProgram relax_indicators_with_bigm(const MixedIntegerProgram& problem,
                                         const std::vector<Interval>& bounds) {
  const auto& base = problem.base();
  if (static_cast<int>(bounds.size()) != base.num_variables()) {
    throw InputError("bounds vector has " + std::to_string(bounds.size()) +
                     " entries, expected " + std::to_string(base.num_variables()));
  }
  LinearProgram lp = base;
  for (int j = 0; j < lp.num_variables(); ++j) {
    lp.variables()[j].lower = bounds[j].lower;
    lp.variables()[j].upper = bounds[j].upper;
  }
  for (const auto& ind : problem.indicators()) {
    const auto& zb = bounds[ind.binary];
    const bool fixed = zb.lower == zb.upper;
    if (fixed) {
      if (static_cast<int>(std::lround(zb.lower)) == ind.active_value) lp.add_row(ind.implied);
      continue;
    }
    const Range activity = row_activity(ind.implied, bounds, base.variables());
    if (ind.implied.relation != Relation::kGreaterEqual) {
      add_bigm_upper(lp, ind.implied, ind.binary, ind.active_value, activity.max);
    }
    if (ind.implied.relation != Relation::kLessEqual) {
      add_bigm_lower(lp, ind.implied, ind.binary, ind.active_value, activity.min);
    }
  }
  return lp;
}

LinearProgram relax_indicators_with_bigm(const MixedIntegerProgram& problem) {
  std::vector<Interval> bounds;
  bounds.reserve(problem.base().variables().size());
  for (const auto& v : problem.base().variables()) bounds.push_back({v.lower, v.upper});
  return relax_indicators_with_bigm(problem, bounds);
}

}  // namespace xpinflate::solver
