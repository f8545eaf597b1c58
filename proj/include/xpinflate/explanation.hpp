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

#include <string>
#include <vector>

#include "xpinflate/models.hpp"

namespace xpinflate {

struct PinnedFeature {
  int feature = 0;
  double value = 0.0;
};

// Subset-minimal set of pinned feature values that entails the prediction.
struct AbductiveExplanation {
  std::vector<PinnedFeature> features;  // in processing order
  Vector instance;
  ClassIndex predicted = 0;
  std::vector<int> order;
  int entailment_checks = 0;

  bool contains(int feature) const {
    for (const auto& p : features) {
      if (p.feature == feature) return true;
    }
    return false;
  }
};

struct FeatureRange {
  int feature = 0;
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

enum class InflationMethod { kOnestep, kTwostep, kIncremental };

const char* to_string(InflationMethod method);

// Box explanation: the prediction holds for every point whose boxed features
// lie in their ranges, with all other features anywhere in the domain.
struct InflatedExplanation {
  std::vector<FeatureRange> ranges;  // in processing order
  Vector instance;
  ClassIndex predicted = 0;
  InflationMethod method = InflationMethod::kOnestep;
  double epsilon = 0.0;
  double tau = 0.0;
  double parameter = 0.0;  // p for twostep, delta for incremental
  int solver_calls = 0;
  double seconds = 0.0;
};

// Per-feature box over all n features; features outside an explanation span
// their domain interval.
using Box = Domain;

Box pinned_box(const Domain& domain, const AbductiveExplanation& explanation);
Box pinned_box(const Domain& domain, const std::vector<PinnedFeature>& pins);
Box ranges_box(const Domain& domain, const std::vector<FeatureRange>& ranges);

}  // namespace xpinflate
