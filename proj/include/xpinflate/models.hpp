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

// Classifiers, feature domains and reference forward passes. Model types are
// templated on the scalar so the forward pass can be evaluated in extended
// precision by tests; the explanation pipeline uses the double aliases.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "xpinflate/errors.hpp"

namespace xpinflate {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using ClassIndex = int;

// Closed per-feature intervals [lower_i, upper_i].
template <typename Scalar>
struct BasicDomain {
  VectorX<Scalar> lower;
  VectorX<Scalar> upper;

  static BasicDomain unit(Eigen::Index n) {
    return {VectorX<Scalar>::Zero(n), VectorX<Scalar>::Ones(n)};
  }

  Eigen::Index size() const { return lower.size(); }

  bool contains(const VectorX<Scalar>& x) const {
    return x.size() == size() && (x.array() >= lower.array()).all() &&
           (x.array() <= upper.array()).all();
  }

  void validate() const {
    if (lower.size() != upper.size()) throw InputError("domain bound vectors differ in length");
    for (Eigen::Index i = 0; i < size(); ++i) {
      if (!(lower[i] <= upper[i])) {
        throw InputError("domain feature " + std::to_string(i) + " has lower > upper");
      }
    }
  }
};

// Binary linear classifier: positive side iff w.x + b >= 0.
// class_labels[0] names the negative side, class_labels[1] the positive side.
template <typename Scalar>
struct BasicLinearClassifier {
  VectorX<Scalar> weights;
  Scalar bias{0};
  std::vector<std::string> class_labels{"-1", "+1"};

  static constexpr ClassIndex kNegative = 0;
  static constexpr ClassIndex kPositive = 1;

  Eigen::Index num_features() const { return weights.size(); }
  int num_classes() const { return 2; }
};

template <typename Scalar>
struct DenseLayer {
  MatrixX<Scalar> weights;  // rows = output neurons
  VectorX<Scalar> bias;
};

// Rectifier network; the last layer is affine and its argmax is the class.
template <typename Scalar>
struct BasicMlpClassifier {
  std::vector<DenseLayer<Scalar>> layers;
  std::vector<std::string> class_labels;

  Eigen::Index num_features() const { return layers.empty() ? 0 : layers.front().weights.cols(); }
  int num_classes() const {
    return layers.empty() ? 0 : static_cast<int>(layers.back().weights.rows());
  }

  void validate() const {
    if (layers.size() != 2) {
      throw InputError("MLP must have exactly one hidden layer (got " +
                       std::to_string(layers.size()) + " layers)");
    }
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const auto& layer = layers[k];
      if (layer.bias.size() != layer.weights.rows()) {
        throw InputError("layer " + std::to_string(k) + ": bias has " +
                         std::to_string(layer.bias.size()) + " entries for " +
                         std::to_string(layer.weights.rows()) + " neurons");
      }
      if (k > 0 && layer.weights.cols() != layers[k - 1].weights.rows()) {
        throw InputError("layer " + std::to_string(k) + ": expects " +
                         std::to_string(layer.weights.cols()) + " inputs but layer " +
                         std::to_string(k - 1) + " has " +
                         std::to_string(layers[k - 1].weights.rows()) + " neurons");
      }
    }
    if (num_classes() < 2) throw InputError("MLP output layer needs at least two neurons");
    if (!class_labels.empty() && static_cast<int>(class_labels.size()) != num_classes()) {
      throw InputError("MLP has " + std::to_string(num_classes()) + " outputs but " +
                       std::to_string(class_labels.size()) + " class labels");
    }
  }
};

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using Domain = BasicDomain<double>;
using LinearClassifier = BasicLinearClassifier<double>;
using MlpClassifier = BasicMlpClassifier<double>;
using Classifier = std::variant<LinearClassifier, MlpClassifier>;

struct Instance {
  Vector values;
  std::optional<std::string> label;
  std::size_t id = 0;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<Instance> instances;
};

template <typename Scalar>
void check_dimension(Eigen::Index expected, const VectorX<Scalar>& x) {
  if (x.size() != expected) {
    throw InputError("instance has " + std::to_string(x.size()) + " features, model expects " +
                     std::to_string(expected));
  }
}

template <typename Scalar>
Scalar linear_score(const BasicLinearClassifier<Scalar>& model, const VectorX<Scalar>& x) {
  check_dimension(model.num_features(), x);
  return model.weights.dot(x) + model.bias;
}

template <typename Scalar>
ClassIndex predict_linear(const BasicLinearClassifier<Scalar>& model, const VectorX<Scalar>& x) {
  return linear_score(model, x) >= Scalar(0) ? BasicLinearClassifier<Scalar>::kPositive
                                             : BasicLinearClassifier<Scalar>::kNegative;
}

// Pre-activations of the hidden layer.
template <typename Scalar>
VectorX<Scalar> hidden_preactivations(const BasicMlpClassifier<Scalar>& model,
                                      const VectorX<Scalar>& x) {
  check_dimension(model.num_features(), x);
  const auto& hidden = model.layers.front();
  return hidden.weights * x + hidden.bias;
}

template <typename Scalar>
VectorX<Scalar> mlp_outputs(const BasicMlpClassifier<Scalar>& model, const VectorX<Scalar>& x) {
  check_dimension(model.num_features(), x);
  VectorX<Scalar> activation = x;
  for (std::size_t k = 0; k + 1 < model.layers.size(); ++k) {
    activation = (model.layers[k].weights * activation + model.layers[k].bias).cwiseMax(Scalar(0));
  }
  const auto& out = model.layers.back();
  return out.weights * activation + out.bias;
}

// Lowest index wins ties.
template <typename Scalar>
ClassIndex argmax(const VectorX<Scalar>& values) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < values.size(); ++j) {
    if (values[j] > values[best]) best = j;
  }
  return static_cast<ClassIndex>(best);
}

template <typename Scalar>
ClassIndex predict_mlp(const BasicMlpClassifier<Scalar>& model, const VectorX<Scalar>& x) {
  return argmax(mlp_outputs(model, x));
}

inline ClassIndex predict(const Classifier& classifier, const Vector& x) {
  return std::visit(
      [&](const auto& model) -> ClassIndex {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, LinearClassifier>) {
          return predict_linear(model, x);
        } else {
          return predict_mlp(model, x);
        }
      },
      classifier);
}

inline Eigen::Index num_features(const Classifier& classifier) {
  return std::visit([](const auto& m) { return m.num_features(); }, classifier);
}

inline const std::vector<std::string>& class_labels(const Classifier& classifier) {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.class_labels; },
                    classifier);
}

inline bool is_linear(const Classifier& classifier) {
  return std::holds_alternative<LinearClassifier>(classifier);
}

}  // namespace xpinflate
