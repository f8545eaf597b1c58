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

// Model, dataset and explanation files, rule rendering and CSV reports.

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "xpinflate/explanation.hpp"
#include "xpinflate/metrics.hpp"
#include "xpinflate/models.hpp"

namespace xpinflate::io {

inline constexpr int kFormatVersion = 1;

enum class FileErrorKind {
  kMissingFile,
  kSyntax,
  kSchema,
  kDimension,
  kNonFinite,
  kOutOfDomain,
  kVersion,
};

const char* to_string(FileErrorKind kind);

class FileError : public InputError {
 public:
  FileError(FileErrorKind kind, const std::string& what) : InputError(what), kind_(kind) {}
  FileErrorKind kind() const { return kind_; }

 private:
  FileErrorKind kind_;
};

struct ModelBundle {
  Classifier classifier;
  Domain domain;
  std::vector<std::string> feature_names;
};

ModelBundle parse_model(const std::string& text, const std::string& source = "<memory>");
ModelBundle load_model(const std::string& path);
std::string serialize_model(const ModelBundle& bundle);

// CSV with a header row. Feature columns are matched to the model's feature
// names when all are present, otherwise taken positionally from the
// non-label columns. An empty label column name means unlabelled data.
Dataset parse_dataset(const std::string& text, const std::string& label_column,
                      const ModelBundle& model, const std::string& source = "<memory>");
Dataset load_dataset(const std::string& path, const std::string& label_column,
                     const ModelBundle& model);

struct ExplanationFile {
  std::vector<std::string> feature_names;
  std::size_t instance_id = 0;
  std::string predicted_label;
  std::vector<int> order;
  InflatedExplanation explanation;
  std::optional<std::size_t> dataset_coverage;
  std::optional<std::size_t> synthetic_coverage;
};

std::string serialize_explanation(const ExplanationFile& file);
ExplanationFile parse_explanation(const std::string& text, const std::string& source = "<memory>");
ExplanationFile load_explanation(const std::string& path);

// IF l <= name <= u / AND ... / THEN label, values at two decimals.
std::string render_rule_text(const ExplanationFile& file);

inline constexpr const char* kReportHeader =
    "instance_id,method,p_or_delta,time_seconds,n_explanation_features,mean_range_width,"
    "dataset_coverage,synthetic_coverage,solver_calls,status";

void write_report(std::ostream& out, const std::vector<metrics::EvaluationRecord>& records);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace xpinflate::io
