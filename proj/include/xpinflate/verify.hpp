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

// Checks that are independent of the inflation code paths: fresh entailment
// problems, a closed-form linear oracle and a sampling falsifier.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "xpinflate/encoding.hpp"
#include "xpinflate/explanation.hpp"
#include "xpinflate/models.hpp"

namespace xpinflate {

enum class Verdict { kHolds, kViolated };

struct VerificationResult {
  Verdict verdict = Verdict::kHolds;
  std::optional<Vector> counterexample;
  std::string checker;

  bool holds() const { return verdict == Verdict::kHolds; }
};

struct VerifyOptions {
  double tau = encoding::kDefaultTau;
  // Witnesses within solver tolerance of a tie may not change the
  // prediction; the check is then repeated demanding this separation.
  double tie_margin = 1e-6;
  solver::SolverOptions solver;
};

// Holds iff no point of the box (free features over the domain) changes the
// prediction. Solver failures propagate as exceptions.
VerificationResult verify_box(const Classifier& classifier, const Domain& domain, const Box& box,
                              ClassIndex predicted, const VerifyOptions& options = {});

VerificationResult verify_box(const Classifier& classifier, const Domain& domain,
                              const InflatedExplanation& explanation, ClassIndex predicted,
                              const VerifyOptions& options = {});

VerificationResult verify_abductive(const Classifier& classifier, const Domain& domain,
                                    const AbductiveExplanation& explanation,
                                    const VerifyOptions& options = {});

// (min score, max score) of w.x + b over the box.
std::pair<double, double> linear_box_extreme(const LinearClassifier& model, const Box& box);

// Uniform samples inside the box; returns the first point predicted
// differently. `stream` separates independent jobs sharing a seed.
std::optional<Vector> sample_falsify(const Classifier& classifier, const Box& box,
                                     ClassIndex predicted, std::int64_t samples,
                                     std::uint64_t seed, std::uint64_t stream = 0);

std::optional<Vector> sample_falsify(const Classifier& classifier,
                                     const InflatedExplanation& explanation, const Domain& domain,
                                     std::int64_t samples, std::uint64_t seed,
                                     std::uint64_t stream = 0);

// True iff releasing any single pinned feature breaks the entailment.
bool check_minimality(const Classifier& classifier, const Domain& domain,
                      const AbductiveExplanation& explanation, const VerifyOptions& options = {});

}  // namespace xpinflate
