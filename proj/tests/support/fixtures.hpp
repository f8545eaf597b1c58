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

// Small hand-checkable models shared by the explanation tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "xpinflate/models.hpp"

namespace xpinflate::testing {

inline LinearClassifier linear_model(Vector w, double b) {
  LinearClassifier model;
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

struct Fixture {
  std::string name;
  Classifier classifier;
  Domain domain;
  Vector instance;
};

inline Fixture fixture_a() {
  return {"A", linear_model(Vector{{1.0, 1.0}}, -1.5), Domain::unit(2), Vector{{0.9, 0.9}}};
}

inline Fixture fixture_b() {
  return {"B", linear_model(Vector{{1.0, 0.0}}, -0.5), Domain::unit(2), Vector{{0.8, 0.3}}};
}

inline Fixture constant_fixture() {
  return {"constant", linear_model(Vector{{1.0, 0.0}}, 0.5), Domain::unit(2), Vector{{0.2, 0.7}}};
}

inline Domain random_domain(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> lo(-1.0, 0.5);
  std::uniform_real_distribution<double> width(0.5, 2.0);
  Domain d{Vector(n), Vector(n)};
  for (int i = 0; i < n; ++i) {
    d.lower[i] = lo(rng);
    d.upper[i] = d.lower[i] + width(rng);
  }
  return d;
}

// Alternates linear and 3-hidden-neuron MLP fixtures over 2 to 4 features.
inline std::vector<Fixture> random_fixtures(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Fixture> out;
  for (int k = 0; k < count; ++k) {
    const int n = 2 + k % 3;
    Fixture f;
    f.domain = random_domain(rng, n);
    if (k % 2 == 0) {
      auto model = random_linear(rng, n);
      model.bias = -model.weights.dot(0.5 * (f.domain.lower + f.domain.upper)) +
                   0.3 * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      f.name = "linear" + std::to_string(k);
      f.classifier = model;
    } else {
      f.name = "mlp" + std::to_string(k);
      f.classifier = random_mlp(rng, n, 3, 2 + k % 2);
    }
    f.instance = random_point(rng, f.domain);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace xpinflate::testing
