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

// Inflation of abductive explanations into per-feature ranges.
//
// Every method walks the explanation's features in processing order. While a
// feature is being expanded, features already processed sit at their found
// ranges and features not yet processed sit at their pinned values (or, in
// the second Twostep pass, at their subranges). Features outside the
// explanation range over the whole domain.

#pragma once

#include <vector>

#include "xpinflate/encoding.hpp"
#include "xpinflate/explanation.hpp"
#include "xpinflate/models.hpp"
#include "xpinflate/solver.hpp"

namespace xpinflate {

struct InflateOptions {
  double epsilon = 1e-4;
  double tau = encoding::kDefaultTau;
  solver::SolverOptions solver;
  encoding::EncodingOptions encoding;
};

InflatedExplanation onestep(const Classifier& classifier, const Domain& domain,
                            const AbductiveExplanation& explanation,
                            const InflateOptions& options = {});

struct TwostepTrace {
  InflatedExplanation result;
  std::vector<FeatureRange> first_pass;  // l'_i, u'_i from the shrinking pass
  std::vector<FeatureRange> subranges;   // l''_i, u''_i
};

// `p` in (0, 1] scales each first-pass range towards the instance value
// before the second expansion pass. p = 1 reproduces onestep.
InflatedExplanation twostep(const Classifier& classifier, const Domain& domain,
                            const AbductiveExplanation& explanation, double p,
                            const InflateOptions& options = {});

TwostepTrace twostep_trace(const Classifier& classifier, const Domain& domain,
                           const AbductiveExplanation& explanation, double p,
                           const InflateOptions& options = {});

// Baseline: grow each bound by `delta` until the prediction is no longer
// entailed, keeping the last passing bound.
InflatedExplanation incremental_inflate(const Classifier& classifier, const Domain& domain,
                                        const AbductiveExplanation& explanation, double delta,
                                        const InflateOptions& options = {});

enum class Direction { kUp, kDown };

struct IncrementalBound {
  double bound = 0.0;
  int checks = 0;
};

// Grows one bound of `feature` from `start` towards `limit` in steps of
// `delta`; every other feature keeps its interval in `box`.
IncrementalBound extend_bound_incrementally(const Classifier& classifier, const Domain& domain,
                                            Box box, int feature, double start, double limit,
                                            double delta, Direction direction,
                                            const encoding::NegatedPrediction& negated,
                                            const InflateOptions& options = {});

}  // namespace xpinflate
