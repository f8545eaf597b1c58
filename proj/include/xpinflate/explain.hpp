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

#include <vector>

#include "xpinflate/encoding.hpp"
#include "xpinflate/explanation.hpp"
#include "xpinflate/models.hpp"
#include "xpinflate/solver.hpp"

namespace xpinflate {

std::vector<int> natural_order(Eigen::Index n);

// Throws InputError unless `order` is a permutation of [0, n).
void validate_order(const std::vector<int>& order, Eigen::Index n);

struct ExplainOptions {
  double tau = encoding::kDefaultTau;
  std::vector<int> order;  // empty: natural column order
  solver::SolverOptions solver;
  encoding::EncodingOptions encoding;
};

// Deletion-based abductive explanation: starting from every feature pinned,
// each feature (in processing order) is released when the prediction stays
// entailed without it. Performs exactly n entailment checks.
AbductiveExplanation abductive_explanation(const Classifier& classifier, const Vector& x,
                                           const Domain& domain, const ExplainOptions& options = {});

}  // namespace xpinflate
