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

#include "xpinflate/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace xpinflate::io {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(FileErrorKind kind, const std::string& source, const std::string& message) {
  throw FileError(kind, source + ": " + message);
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    static const std::regex non_finite(R"((^|[^A-Za-z_"])-?(NaN|nan|Infinity|inf)([^A-Za-z_"]|$))");
    if (std::regex_search(text, non_finite)) {
      fail(FileErrorKind::kNonFinite, source, "non-finite number token");
    }
    fail(FileErrorKind::kSyntax, source, std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& object, const char* name, const std::string& source) {
  if (!object.is_object() || !object.contains(name)) {
    fail(FileErrorKind::kSchema, source, std::string("missing field '") + name + "'");
  }
  return object.at(name);
}

double number(const json& value, const std::string& where, const std::string& source) {
  if (!value.is_number()) fail(FileErrorKind::kSchema, source, where + " must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(FileErrorKind::kNonFinite, source, where + " is not finite");
  return v;
}

Vector vector_field(const json& value, const std::string& where, const std::string& source) {
  if (!value.is_array()) fail(FileErrorKind::kSchema, source, where + " must be an array");
  Vector v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        number(value[i], where + "[" + std::to_string(i) + "]", source);
  }
  return v;
}

Matrix matrix_field(const json& value, const std::string& where, const std::string& source) {
  if (!value.is_array() || value.empty()) {
    fail(FileErrorKind::kSchema, source, where + " must be a non-empty array of rows");
  }
  const std::size_t cols = value[0].is_array() ? value[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(value.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < value.size(); ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    const Vector row = vector_field(value[r], row_where, source);
    if (static_cast<std::size_t>(row.size()) != cols) {
      fail(FileErrorKind::kDimension, source,
           row_where + " has " + std::to_string(row.size()) + " entries, expected " +
               std::to_string(cols));
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

std::vector<std::string> string_list(const json& value, const std::string& where,
                                     const std::string& source) {
  if (!value.is_array()) fail(FileErrorKind::kSchema, source, where + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : value) {
    if (!item.is_string()) fail(FileErrorKind::kSchema, source, where + " must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

void check_version(const json& doc, const std::string& source) {
  const json& version = field(doc, "format_version", source);
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    fail(FileErrorKind::kVersion, source,
         "unsupported format_version " + version.dump() + " (expected " +
             std::to_string(kFormatVersion) + ")");
  }
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::string fixed2(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

const char* to_string(FileErrorKind kind) {
  switch (kind) {
    case FileErrorKind::kMissingFile: return "missing-file";
    case FileErrorKind::kSyntax: return "syntax";
    case FileErrorKind::kSchema: return "schema";
    case FileErrorKind::kDimension: return "dimension";
    case FileErrorKind::kNonFinite: return "non-finite";
    case FileErrorKind::kOutOfDomain: return "out-of-domain";
    case FileErrorKind::kVersion: return "version";
  }
  return "unknown";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(FileErrorKind::kMissingFile, "cannot open '" + path + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  return contents.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
}

ModelBundle parse_model(const std::string& text, const std::string& source) {
  const json doc = parse_json(text, source);
  check_version(doc, source);
  const json& kind_field = field(doc, "kind", source);
  if (!kind_field.is_string()) fail(FileErrorKind::kSchema, source, "'kind' must be a string");
  const std::string kind = kind_field.get<std::string>();

  ModelBundle bundle;
  Eigen::Index n = 0;
  if (kind == "linear") {
    LinearClassifier model;
    model.weights = vector_field(field(doc, "weights", source), "weights", source);
    model.bias = number(field(doc, "bias", source), "bias", source);
    if (doc.contains("class_labels")) {
      model.class_labels = string_list(doc["class_labels"], "class_labels", source);
      if (model.class_labels.size() != 2) {
        fail(FileErrorKind::kDimension, source, "linear model needs exactly two class labels");
      }
    }
    if (model.weights.size() == 0) fail(FileErrorKind::kDimension, source, "weights are empty");
    n = model.weights.size();
    bundle.classifier = std::move(model);
  } else if (kind == "mlp") {
    MlpClassifier model;
    const json& layers = field(doc, "layers", source);
    if (!layers.is_array()) fail(FileErrorKind::kSchema, source, "'layers' must be an array");
    for (std::size_t k = 0; k < layers.size(); ++k) {
      const std::string where = "layers[" + std::to_string(k) + "]";
      DenseLayer<double> layer;
      layer.weights = matrix_field(field(layers[k], "weights", source), where + ".weights", source);
      layer.bias = vector_field(field(layers[k], "bias", source), where + ".bias", source);
      model.layers.push_back(std::move(layer));
    }
    if (doc.contains("class_labels")) {
      model.class_labels = string_list(doc["class_labels"], "class_labels", source);
    }
    try {
      model.validate();
    } catch (const InputError& e) {
      fail(FileErrorKind::kDimension, source, e.what());
    }
    if (model.class_labels.empty()) {
      for (int c = 0; c < model.num_classes(); ++c) model.class_labels.push_back(std::to_string(c));
    }
    n = model.num_features();
    bundle.classifier = std::move(model);
  } else {
    fail(FileErrorKind::kSchema, source, "unknown model kind '" + kind + "'");
  }

  if (doc.contains("feature_names")) {
    bundle.feature_names = string_list(doc["feature_names"], "feature_names", source);
    if (static_cast<Eigen::Index>(bundle.feature_names.size()) != n) {
      fail(FileErrorKind::kDimension, source,
           "feature_names lists " + std::to_string(bundle.feature_names.size()) +
               " names for " + std::to_string(n) + " features");
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) bundle.feature_names.push_back("f" + std::to_string(i + 1));
  }

  bundle.domain = Domain::unit(n);
  if (doc.contains("domain")) {
    const json& domain = doc["domain"];
    bundle.domain.lower = vector_field(field(domain, "lower", source), "domain.lower", source);
    bundle.domain.upper = vector_field(field(domain, "upper", source), "domain.upper", source);
    if (bundle.domain.lower.size() != n || bundle.domain.upper.size() != n) {
      fail(FileErrorKind::kDimension, source,
           "domain bounds must list " + std::to_string(n) + " features");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bundle.domain.lower[i] > bundle.domain.upper[i]) {
        fail(FileErrorKind::kSchema, source,
             "domain feature " + std::to_string(i) + " has lower > upper");
      }
    }
  }
  return bundle;
}

ModelBundle load_model(const std::string& path) { return parse_model(read_file(path), path); }

std::string serialize_model(const ModelBundle& bundle) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  if (const auto* linear = std::get_if<LinearClassifier>(&bundle.classifier)) {
    doc["kind"] = "linear";
    doc["feature_names"] = bundle.feature_names;
    doc["class_labels"] = linear->class_labels;
    doc["weights"] = to_std(linear->weights);
    doc["bias"] = linear->bias;
  } else {
    const auto& mlp = std::get<MlpClassifier>(bundle.classifier);
    doc["kind"] = "mlp";
    doc["feature_names"] = bundle.feature_names;
    doc["class_labels"] = mlp.class_labels;
    ordered_json layers = ordered_json::array();
    for (const auto& layer : mlp.layers) {
      ordered_json rows = ordered_json::array();
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        rows.push_back(to_std(layer.weights.row(r).transpose()));
      }
      layers.push_back({{"weights", rows}, {"bias", to_std(layer.bias)}});
    }
    doc["layers"] = layers;
  }
  doc["domain"] = {{"lower", to_std(bundle.domain.lower)}, {"upper", to_std(bundle.domain.upper)}};
  return doc.dump(2) + "\n";
}

Dataset parse_dataset(const std::string& text, const std::string& label_column,
                      const ModelBundle& model, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(FileErrorKind::kSchema, source, "missing header row");
  const auto header = split_csv_line(line);

  int label_index = -1;
  if (!label_column.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == label_column) label_index = static_cast<int>(c);
    }
    if (label_index < 0) {
      fail(FileErrorKind::kSchema, source, "label column '" + label_column + "' not found");
    }
  }

  const auto n = static_cast<std::size_t>(model.domain.size());
  std::vector<int> columns;
  for (const auto& name : model.feature_names) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name && static_cast<int>(c) != label_index) {
        columns.push_back(static_cast<int>(c));
        break;
      }
    }
  }
  if (columns.size() != n) {
    columns.clear();
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (static_cast<int>(c) != label_index) columns.push_back(static_cast<int>(c));
    }
    if (columns.size() != n) {
      fail(FileErrorKind::kDimension, source,
           "header has " + std::to_string(columns.size()) + " feature columns, model expects " +
               std::to_string(n));
    }
  }

  Dataset data;
  for (int c : columns) data.feature_names.push_back(header[c]);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row;
    const auto cells = split_csv_line(line);
    const std::string where = "row " + std::to_string(row);
    if (cells.size() != header.size()) {
      fail(FileErrorKind::kDimension, source,
           where + " has " + std::to_string(cells.size()) + " cells, header has " +
               std::to_string(header.size()));
    }
    Instance instance;
    instance.id = row - 1;
    instance.values.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
      const std::string& cell = cells[columns[k]];
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(FileErrorKind::kSchema, source,
             where + ", column '" + header[columns[k]] + "': non-numeric value '" + cell + "'");
      }
      if (!std::isfinite(value)) {
        fail(FileErrorKind::kNonFinite, source,
             where + ", column '" + header[columns[k]] + "': non-finite value");
      }
      const auto i = static_cast<Eigen::Index>(k);
      if (value < model.domain.lower[i] || value > model.domain.upper[i]) {
        fail(FileErrorKind::kOutOfDomain, source,
             where + ", column '" + header[columns[k]] + "': value " + cell + " outside [" +
                 std::to_string(model.domain.lower[i]) + ", " +
                 std::to_string(model.domain.upper[i]) + "]");
      }
      instance.values[i] = value;
    }
    if (label_index >= 0) instance.label = cells[label_index];
    data.instances.push_back(std::move(instance));
  }
  return data;
}

Dataset load_dataset(const std::string& path, const std::string& label_column,
                     const ModelBundle& model) {
  return parse_dataset(read_file(path), label_column, model, path);
}

std::string serialize_explanation(const ExplanationFile& file) {
  const auto& e = file.explanation;
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["instance_id"] = file.instance_id;
  doc["feature_names"] = file.feature_names;
  doc["instance"] = to_std(e.instance);
  doc["predicted_class"] = e.predicted;
  doc["predicted_label"] = file.predicted_label;
  doc["method"] = to_string(e.method);
  doc["epsilon"] = e.epsilon;
  doc["tau"] = e.tau;
  if (e.method == InflationMethod::kTwostep) doc["p"] = e.parameter;
  if (e.method == InflationMethod::kIncremental) doc["delta"] = e.parameter;
  doc["order"] = file.order;
  ordered_json ranges = ordered_json::array();
  for (const auto& r : e.ranges) {
    const std::string name = r.feature < static_cast<int>(file.feature_names.size())
                                 ? file.feature_names[r.feature]
                                 : "f" + std::to_string(r.feature + 1);
    ranges.push_back({{"feature", r.feature}, {"name", name}, {"lower", r.lower}, {"upper", r.upper}});
  }
  doc["ranges"] = ranges;
  ordered_json metrics_doc;
  metrics_doc["range_width"] = metrics::range_width(e);
  metrics_doc["solver_calls"] = e.solver_calls;
  metrics_doc["seconds"] = e.seconds;
  if (file.dataset_coverage) metrics_doc["dataset_coverage"] = *file.dataset_coverage;
  if (file.synthetic_coverage) metrics_doc["synthetic_coverage"] = *file.synthetic_coverage;
  doc["metrics"] = metrics_doc;
  return doc.dump(2) + "\n";
}

ExplanationFile parse_explanation(const std::string& text, const std::string& source) {
  const json doc = parse_json(text, source);
  check_version(doc, source);
  ExplanationFile file;
  auto& e = file.explanation;
  const json& id = field(doc, "instance_id", source);
  if (!id.is_number_unsigned() && !id.is_number_integer()) {
    fail(FileErrorKind::kSchema, source, "instance_id must be an integer");
  }
  file.instance_id = id.get<std::size_t>();
  file.feature_names = string_list(field(doc, "feature_names", source), "feature_names", source);
  e.instance = vector_field(field(doc, "instance", source), "instance", source);
  const json& predicted = field(doc, "predicted_class", source);
  if (!predicted.is_number_integer()) {
    fail(FileErrorKind::kSchema, source, "predicted_class must be an integer");
  }
  e.predicted = predicted.get<int>();
  const json& label = field(doc, "predicted_label", source);
  if (!label.is_string()) fail(FileErrorKind::kSchema, source, "predicted_label must be a string");
  file.predicted_label = label.get<std::string>();

  const json& method = field(doc, "method", source);
  const std::string method_name = method.is_string() ? method.get<std::string>() : "";
  if (method_name == "onestep") {
    e.method = InflationMethod::kOnestep;
  } else if (method_name == "twostep") {
    e.method = InflationMethod::kTwostep;
    e.parameter = number(field(doc, "p", source), "p", source);
  } else if (method_name == "incremental") {
    e.method = InflationMethod::kIncremental;
    e.parameter = number(field(doc, "delta", source), "delta", source);
  } else {
    fail(FileErrorKind::kSchema, source, "unknown method '" + method.dump() + "'");
  }
  e.epsilon = number(field(doc, "epsilon", source), "epsilon", source);
  e.tau = number(field(doc, "tau", source), "tau", source);
  if (doc.contains("order")) {
    for (const auto& f : doc["order"]) {
      if (!f.is_number_integer()) fail(FileErrorKind::kSchema, source, "order must hold integers");
      file.order.push_back(f.get<int>());
    }
  }

  const json& ranges = field(doc, "ranges", source);
  if (!ranges.is_array()) fail(FileErrorKind::kSchema, source, "'ranges' must be an array");
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const std::string where = "ranges[" + std::to_string(k) + "]";
    const json& f = field(ranges[k], "feature", source);
    if (!f.is_number_integer()) fail(FileErrorKind::kSchema, source, where + ".feature must be an integer");
    FeatureRange range;
    range.feature = f.get<int>();
    range.lower = number(field(ranges[k], "lower", source), where + ".lower", source);
    range.upper = number(field(ranges[k], "upper", source), where + ".upper", source);
    if (range.feature < 0 || range.feature >= e.instance.size()) {
      fail(FileErrorKind::kDimension, source, where + ".feature out of range");
    }
    const double x = e.instance[range.feature];
    if (!(range.lower <= x && x <= range.upper)) {
      fail(FileErrorKind::kSchema, source, where + " does not contain the instance value");
    }
    e.ranges.push_back(range);
  }
  if (doc.contains("metrics")) {
    const json& m = doc["metrics"];
    if (m.contains("solver_calls")) e.solver_calls = m["solver_calls"].get<int>();
    if (m.contains("seconds")) e.seconds = number(m["seconds"], "metrics.seconds", source);
    if (m.contains("dataset_coverage")) file.dataset_coverage = m["dataset_coverage"].get<std::size_t>();
    if (m.contains("synthetic_coverage")) {
      file.synthetic_coverage = m["synthetic_coverage"].get<std::size_t>();
    }
  }
  return file;
}

ExplanationFile load_explanation(const std::string& path) {
  return parse_explanation(read_file(path), path);
}

std::string render_rule_text(const ExplanationFile& file) {
  const auto& ranges = file.explanation.ranges;
  if (ranges.empty()) return "IF TRUE THEN " + file.predicted_label;
  std::ostringstream out;
  for (std::size_t k = 0; k < ranges.size(); ++k) {
    const auto& r = ranges[k];
    const std::string name = r.feature < static_cast<int>(file.feature_names.size())
                                 ? file.feature_names[r.feature]
                                 : "f" + std::to_string(r.feature + 1);
    out << (k == 0 ? "IF " : "AND ") << fixed2(r.lower) << " <= " << name << " <= "
        << fixed2(r.upper) << '\n';
  }
  out << "THEN " << file.predicted_label;
  return out.str();
}

void write_report(std::ostream& out, const std::vector<metrics::EvaluationRecord>& records) {
  out << kReportHeader << '\n';
  char buffer[512];
  for (const auto& r : records) {
    std::string status = r.status;
    for (char& c : status) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    std::snprintf(buffer, sizeof buffer, "%zu,%s,%.6g,%.6f,%zu,%.10g,%zu,%zu,%d,", r.instance_id,
                  r.method.c_str(), r.parameter, r.seconds, r.explanation_features,
                  r.mean_range_width, r.dataset_coverage, r.synthetic_coverage, r.solver_calls);
    out << buffer << status << '\n';
  }
}

}  // namespace xpinflate::io
