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

// xpinflate command-line tool.
//
// Exit codes: 0 success, 1 verification found a violation, 2 input error,
// 3 solver or resource error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xpinflate/explain.hpp"
#include "xpinflate/inflate.hpp"
#include "xpinflate/io.hpp"
#include "xpinflate/metrics.hpp"
#include "xpinflate/verify.hpp"

namespace {

using namespace xpinflate;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

struct Common {
  std::string model;
  std::string data;
  std::string label_column = "label";
  std::string order;
  std::uint64_t seed = 0;
  std::size_t instance = 0;
  double epsilon = 1e-4;
  double tau = 1e-6;
  std::int64_t node_limit = solver::SolverOptions{}.node_limit;
  std::string out;

  solver::SolverOptions solver() const {
    solver::SolverOptions options;
    options.node_limit = node_limit;
    return options;
  }
};

double env_or(const char* name, double fallback) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return fallback;
  char* end = nullptr;
  const double parsed = std::strtod(value, &end);
  if (end == value || *end != '\0') {
    throw InputError(std::string("environment variable ") + name + " is not a number: " + value);
  }
  return parsed;
}

// Comma-separated feature names or 0-based indices.
std::vector<int> parse_order(const std::string& text, const std::vector<std::string>& names) {
  std::vector<int> order;
  if (text.empty()) return order;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    int index = -1;
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (names[k] == token) index = static_cast<int>(k);
    }
    if (index < 0) {
      try {
        std::size_t used = 0;
        index = std::stoi(token, &used);
        if (used != token.size()) index = -1;
      } catch (const std::exception&) {
        index = -1;
      }
    }
    if (index < 0) throw InputError("unknown feature '" + token + "' in --order");
    order.push_back(index);
  }
  return order;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    io::write_file(path, text);
  }
}

const Instance& pick(const Dataset& data, std::size_t id) {
  if (id >= data.instances.size()) {
    throw InputError("instance " + std::to_string(id) + " out of range (dataset has " +
                     std::to_string(data.instances.size()) + " rows)");
  }
  return data.instances[id];
}

std::string label_of(const Classifier& c, ClassIndex k) {
  const auto& labels = class_labels(c);
  return k >= 0 && k < static_cast<int>(labels.size()) ? labels[k] : std::to_string(k);
}

ExplainOptions explain_options(const Common& common, const io::ModelBundle& bundle) {
  ExplainOptions options;
  options.tau = common.tau;
  options.order = parse_order(common.order, bundle.feature_names);
  options.solver = common.solver();
  return options;
}

int run_predict(const Common& common) {
  const auto bundle = io::load_model(common.model);
  const auto data = io::load_dataset(common.data, common.label_column, bundle);
  std::ostringstream out;
  out << "instance_id,predicted\n";
  for (const auto& inst : data.instances) {
    out << inst.id << ',' << label_of(bundle.classifier, predict(bundle.classifier, inst.values))
        << '\n';
  }
  emit(common.out, out.str());
  return kExitOk;
}

int run_explain(const Common& common) {
  const auto bundle = io::load_model(common.model);
  const auto data = io::load_dataset(common.data, common.label_column, bundle);
  const auto& inst = pick(data, common.instance);
  const auto e = abductive_explanation(bundle.classifier, inst.values, bundle.domain,
                                       explain_options(common, bundle));
  nlohmann::ordered_json doc;
  doc["instance_id"] = inst.id;
  doc["predicted_label"] = label_of(bundle.classifier, e.predicted);
  doc["order"] = e.order;
  doc["entailment_checks"] = e.entailment_checks;
  auto features = nlohmann::ordered_json::array();
  for (const auto& pin : e.features) {
    features.push_back({{"feature", pin.feature},
                        {"name", bundle.feature_names[pin.feature]},
                        {"value", pin.value}});
  }
  doc["features"] = features;
  emit(common.out, doc.dump(2) + "\n");
  return kExitOk;
}

struct InflateFlags {
  std::string method = "onestep";
  double p = 0.25;
  double delta = 0.05;
};

int run_inflate(const Common& common, const InflateFlags& flags) {
  const auto bundle = io::load_model(common.model);
  const auto data = io::load_dataset(common.data, common.label_column, bundle);
  const auto& inst = pick(data, common.instance);
  const auto e = abductive_explanation(bundle.classifier, inst.values, bundle.domain,
                                       explain_options(common, bundle));
  InflateOptions options;
  options.epsilon = common.epsilon;
  options.tau = common.tau;
  options.solver = common.solver();
  InflatedExplanation result;
  if (flags.method == "onestep") {
    result = onestep(bundle.classifier, bundle.domain, e, options);
  } else if (flags.method == "twostep") {
    result = twostep(bundle.classifier, bundle.domain, e, flags.p, options);
  } else if (flags.method == "incremental") {
    result = incremental_inflate(bundle.classifier, bundle.domain, e, flags.delta, options);
  } else {
    throw InputError("unknown method '" + flags.method + "'");
  }
  io::ExplanationFile file;
  file.feature_names = bundle.feature_names;
  file.instance_id = inst.id;
  file.predicted_label = label_of(bundle.classifier, e.predicted);
  file.order = e.order;
  file.explanation = result;
  file.dataset_coverage = metrics::dataset_coverage(result, data.instances);
  if (!common.out.empty()) io::write_file(common.out, io::serialize_explanation(file));
  std::cout << io::render_rule_text(file) << '\n';
  return kExitOk;
}

int run_verify(const Common& common, const std::string& explanation_path, std::int64_t samples) {
  const auto bundle = io::load_model(common.model);
  const auto file = io::load_explanation(explanation_path);
  const auto& e = file.explanation;
  if (e.instance.size() != bundle.domain.size()) {
    throw InputError("explanation has " + std::to_string(e.instance.size()) +
                     " features, model expects " + std::to_string(bundle.domain.size()));
  }
  VerifyOptions options;
  options.tau = common.tau;
  options.solver = common.solver();
  auto result = verify_box(bundle.classifier, bundle.domain, e, e.predicted, options);
  if (result.holds() && samples > 0) {
    if (auto cex = sample_falsify(bundle.classifier, e, bundle.domain, samples, common.seed,
                                  file.instance_id)) {
      result.verdict = Verdict::kViolated;
      result.counterexample = cex;
      result.checker = "sampling";
    }
  }
  nlohmann::ordered_json doc;
  doc["verdict"] = result.holds() ? "holds" : "violated";
  doc["checker"] = result.checker;
  if (result.counterexample) {
    const Vector& c = *result.counterexample;
    doc["counterexample"] = std::vector<double>(c.begin(), c.end());
    doc["counterexample_label"] = label_of(bundle.classifier, predict(bundle.classifier, c));
  }
  emit(common.out, doc.dump(2) + "\n");
  return result.holds() ? kExitOk : kExitViolation;
}

struct EvaluateFlags {
  std::vector<std::string> methods{"onestep"};
  std::string population;
  double synthetic_d = 0.1;
  std::size_t synthetic_n = 100;
  unsigned jobs = 1;
  bool omit_timing = false;
};

int run_evaluate(const Common& common, const InflateFlags& inflate, const EvaluateFlags& flags) {
  const auto bundle = io::load_model(common.model);
  const auto data = io::load_dataset(common.data, common.label_column, bundle);
  const auto population = flags.population.empty()
                              ? data
                              : io::load_dataset(flags.population, common.label_column, bundle);
  std::vector<metrics::MethodSpec> methods;
  for (std::string text : flags.methods) {
    if (text == "twostep") text += ":" + std::to_string(inflate.p);
    if (text == "incremental") text += ":" + std::to_string(inflate.delta);
    methods.push_back(metrics::parse_method(text));
  }
  metrics::EvaluationOptions options;
  options.explain = explain_options(common, bundle);
  options.inflate.epsilon = common.epsilon;
  options.inflate.tau = common.tau;
  options.inflate.solver = common.solver();
  options.synthetic_radius = flags.synthetic_d;
  options.synthetic_count = flags.synthetic_n;
  options.seed = common.seed;
  options.jobs = flags.jobs;
  auto records = metrics::run_evaluation(bundle.classifier, bundle.domain, data.instances,
                                         population.instances, methods, options);
  if (flags.omit_timing) {
    for (auto& r : records) r.seconds = 0.0;
  }
  std::ostringstream out;
  io::write_report(out, records);
  emit(common.out, out.str());
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& common, bool needs_data) {
  cmd->add_option("--model", common.model, "Model file (JSON)")->required();
  if (needs_data) {
    cmd->add_option("--data", common.data, "Dataset CSV with a header row")->required();
    cmd->add_option("--label-column", common.label_column,
                    "Label column name; empty for unlabelled data")
        ->capture_default_str();
  }
  cmd->add_option("--order", common.order, "Feature processing order: names or indices, comma separated");
  cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  cmd->add_option("--epsilon", common.epsilon, "Range back-off (env XPINFLATE_EPSILON)")
      ->capture_default_str();
  cmd->add_option("--tau", common.tau, "Strictness tolerance (env XPINFLATE_TAU)")
      ->capture_default_str();
  cmd->add_option("--node-limit", common.node_limit, "Branch-and-bound node budget per solve")
      ->capture_default_str();
  cmd->add_option("--out", common.out, "Output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abductive and inflated explanations for linear and ReLU classifiers"};
  app.require_subcommand(1);

  Common common;
  InflateFlags inflate;
  EvaluateFlags evaluate;
  std::string explanation_path;
  std::int64_t samples = 0;

  try {
    common.epsilon = env_or("XPINFLATE_EPSILON", common.epsilon);
    common.tau = env_or("XPINFLATE_TAU", common.tau);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  auto* predict_cmd = app.add_subcommand("predict", "Predict every row of a dataset");
  add_common(predict_cmd, common, true);

  auto* explain_cmd = app.add_subcommand("explain", "Subset-minimal abductive explanation");
  add_common(explain_cmd, common, true);
  explain_cmd->add_option("--instance", common.instance, "0-based row index")->capture_default_str();

  auto* inflate_cmd = app.add_subcommand("inflate", "Inflate an abductive explanation into ranges");
  add_common(inflate_cmd, common, true);
  inflate_cmd->add_option("--instance", common.instance, "0-based row index")->capture_default_str();
  inflate_cmd->add_option("--method", inflate.method, "onestep | twostep | incremental")
      ->check(CLI::IsMember({"onestep", "twostep", "incremental"}))
      ->capture_default_str();
  inflate_cmd->add_option("--p", inflate.p, "Twostep subrange fraction in (0, 1]")->capture_default_str();
  inflate_cmd->add_option("--delta", inflate.delta, "Incremental step")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Check that an explanation file's box is sound");
  add_common(verify_cmd, common, false);
  verify_cmd->add_option("--explanation", explanation_path, "Explanation file")->required();
  verify_cmd->add_option("--samples", samples, "Additional sampling falsification budget")
      ->capture_default_str();

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Per-instance metrics report (CSV)");
  add_common(evaluate_cmd, common, true);
  evaluate_cmd
      ->add_option("--method", evaluate.methods,
                   "Repeatable: onestep, twostep[:p], incremental[:delta]")
      ->capture_default_str();
  evaluate_cmd->add_option("--p", inflate.p, "Default twostep p")->capture_default_str();
  evaluate_cmd->add_option("--delta", inflate.delta, "Default incremental delta")->capture_default_str();
  evaluate_cmd->add_option("--population", evaluate.population,
                           "Dataset for coverage counts (default: --data)");
  evaluate_cmd->add_option("--synthetic-d", evaluate.synthetic_d, "Perturbation radius")
      ->capture_default_str();
  evaluate_cmd->add_option("--synthetic-n", evaluate.synthetic_n, "Synthetic points per instance")
      ->capture_default_str();
  evaluate_cmd->add_option("--jobs", evaluate.jobs, "Worker threads")->capture_default_str();
  evaluate_cmd->add_flag("--omit-timing", evaluate.omit_timing,
                         "Write 0 in time_seconds for byte-reproducible reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*predict_cmd) return run_predict(common);
    if (*explain_cmd) return run_explain(common);
    if (*inflate_cmd) return run_inflate(common, inflate);
    if (*verify_cmd) return run_verify(common, explanation_path, samples);
    if (*evaluate_cmd) return run_evaluate(common, inflate, evaluate);
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
