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

#include <random>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "xpinflate/metrics.hpp"

namespace xpinflate::metrics {
namespace {

InflatedExplanation ranges(std::vector<FeatureRange> r) {
  InflatedExplanation e;
  e.ranges = std::move(r);
  return e;
}

std::vector<Instance> instances(const std::vector<Vector>& points) {
  std::vector<Instance> out;
  for (std::size_t k = 0; k < points.size(); ++k) out.push_back({points[k], std::nullopt, k});
  return out;
}

TEST(DatasetCoverage, Examples) {
  const auto pop = instances({Vector{{0.4, 0.0}}, Vector{{0.5, 0.3}}, Vector{{0.7, 0.9}},
                              Vector{{1.0, 0.1}}});
  EXPECT_EQ(dataset_coverage(ranges({{0, 0.5, 1.0}}), pop), 3u);
  EXPECT_EQ(dataset_coverage(ranges({}), pop), 4u);
  EXPECT_GE(dataset_coverage(ranges({{0, 0.7, 0.7}, {1, 0.9, 0.9}}), pop), 1u);
}

TEST(GenerateSynthetic, ZeroRadiusRepeatsInstance) {
  const Vector x{{0.3, 0.6}};
  const auto batch = generate_synthetic(x, 0.0, 20, 1, Domain::unit(2));
  ASSERT_EQ(batch.points.size(), 20u);
  for (const auto& p : batch.points) EXPECT_EQ(p, x);
}

TEST(GenerateSynthetic, Deterministic) {
  const Vector x{{0.3, 0.6}};
  const auto a = generate_synthetic(x, 0.1, 50, 9, Domain::unit(2), 4);
  const auto b = generate_synthetic(x, 0.1, 50, 9, Domain::unit(2), 4);
  EXPECT_EQ(a.points, b.points);
  const auto c = generate_synthetic(x, 0.1, 50, 10, Domain::unit(2), 4);
  EXPECT_NE(a.points, c.points);
}

TEST(GenerateSynthetic, IntersectsWithDomain) {
  const Vector x{{0.05, 0.5}};
  const auto batch = generate_synthetic(x, 0.1, 1000, 3, Domain::unit(2));
  for (const auto& p : batch.points) {
    EXPECT_GE(p[0], 0.0);
    EXPECT_LE(p[0], 0.15);
    EXPECT_GE(p[1], 0.4);
    EXPECT_LE(p[1], 0.6);
  }
}

TEST(SyntheticCoverage, Examples) {
  const Vector x{{0.5, 0.5}};
  const auto batch = generate_synthetic(x, 0.1, 100, 3, Domain::unit(2));
  EXPECT_EQ(synthetic_coverage(ranges({{0, 0.3, 0.7}, {1, 0.4, 0.6}}), batch), 100u);
  const auto still = generate_synthetic(x, 0.0, 100, 3, Domain::unit(2));
  EXPECT_EQ(synthetic_coverage(ranges({{0, 0.5, 0.6}}), still), 100u);
}

TEST(SyntheticCoverage, FixtureATwostepBeatsOnestep) {
  const Vector x{{0.9, 0.9}};
  const auto batch = generate_synthetic(x, 0.1, 10000, 2024, Domain::unit(2));
  const auto one = synthetic_coverage(ranges({{0, 0.6, 1.0}, {1, 0.9, 1.0}}), batch);
  const auto two = synthetic_coverage(ranges({{0, 0.675, 1.0}, {1, 0.825, 1.0}}), batch);
  EXPECT_GT(two, one);
}

TEST(SyntheticCoverage, MatchesOverlapVolume) {
  // Cube [0.8, 1]^2 lies inside the domain; overlap ratios 0.5 and 0.875.
  const Vector x{{0.9, 0.9}};
  const auto batch = generate_synthetic(x, 0.1, 100000, 77, Domain::unit(2));
  const double one = synthetic_coverage(ranges({{0, 0.6, 1.0}, {1, 0.9, 1.0}}), batch) / 1e5;
  const double two = synthetic_coverage(ranges({{0, 0.675, 1.0}, {1, 0.825, 1.0}}), batch) / 1e5;
  EXPECT_NEAR(one, 0.5, 0.02 * 0.5);
  EXPECT_NEAR(two, 0.875, 0.02 * 0.875);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Domain domain{Vector::Constant(3, -1.0), Vector::Constant(3, 2.0)};
  const Vector c{{0.2, 0.5, 0.8}};
  const double d = 0.3;
  const auto cube = generate_synthetic(c, d, 100000, 8, domain);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<FeatureRange> box;
    double ratio = 1.0;
    for (int i = 0; i < 3; ++i) {
      const double lo = c[i] - d * u(rng);
      const double hi = c[i] + d * (0.2 + 0.8 * u(rng));
      box.push_back({i, lo, hi});
      ratio *= (hi - lo) / (2 * d);
    }
    const double empirical = synthetic_coverage(ranges(box), cube) / 1e5;
    EXPECT_NEAR(empirical, ratio, 0.02 * ratio) << "trial " << trial;
  }
}

TEST(CoverageProperty, MonotoneUnderEnlargement) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> points;
  for (int k = 0; k < 300; ++k) points.push_back(Vector{{u(rng), u(rng), u(rng)}});
  const auto pop = instances(points);
  const auto batch = generate_synthetic(Vector{{0.5, 0.5, 0.5}}, 0.2, 500, 1, Domain::unit(3));
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FeatureRange> box;
    for (int i = 0; i < 3; ++i) {
      const double a = u(rng);
      const double b = u(rng);
      box.push_back({i, std::min(a, b), std::max(a, b)});
    }
    auto bigger = box;
    const int k = trial % 3;
    bigger[k].lower -= 0.1 * u(rng);
    bigger[k].upper += 0.1 * u(rng);
    EXPECT_LE(dataset_coverage(ranges(box), pop), dataset_coverage(ranges(bigger), pop));
    EXPECT_LE(synthetic_coverage(ranges(box), batch), synthetic_coverage(ranges(bigger), batch));
  }
}

TEST(RangeWidth, Examples) {
  EXPECT_NEAR(range_width(ranges({{0, 0.6, 1.0}, {1, 0.9, 1.0}})), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(range_width(ranges({{0, 0.5, 1.0}})), 0.5);
  EXPECT_EQ(range_width(ranges({})), 0.0);
}

TEST(ImprovementPercent, Examples) {
  EXPECT_DOUBLE_EQ(*improvement_percent(2, 3), 50.0);
  EXPECT_DOUBLE_EQ(*improvement_percent(5, 5), 0.0);
  EXPECT_FALSE(improvement_percent(0, 4).has_value());
  EXPECT_DOUBLE_EQ(*improvement_percent(0, 0), 0.0);
}

TEST(ImprovementHistogram, Buckets) {
  const auto h = improvement_histogram({-10.0, 0.0, 10.0, 25.0, 30.0, 60.0, 80.0, 150.0,
                                        std::nullopt});
  ASSERT_EQ(h.labels.size(), h.counts.size());
  std::size_t total = h.undefined;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, 9u);
  EXPECT_EQ(h.undefined, 1u);
  EXPECT_EQ(h.counts.front(), 1u);
  EXPECT_EQ(h.counts.back(), 1u);
}

TEST(ParseMethod, Forms) {
  EXPECT_EQ(parse_method("onestep").method, InflationMethod::kOnestep);
  const auto two = parse_method("twostep:0.25");
  EXPECT_EQ(two.method, InflationMethod::kTwostep);
  EXPECT_DOUBLE_EQ(two.parameter, 0.25);
  EXPECT_EQ(parse_method("incremental:0.05").method, InflationMethod::kIncremental);
  EXPECT_THROW(parse_method("bogus"), InputError);
  EXPECT_THROW(parse_method("twostep:abc"), InputError);
}

TEST(RunEvaluation, SharedAbductiveStage) {
  const auto f = testing::fixture_a();
  const auto test = instances({f.instance});
  const auto records = run_evaluation(f.classifier, f.domain, test, test,
                                      {parse_method("onestep"), parse_method("twostep:0.25")});
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].explanation_features, records[1].explanation_features);
  EXPECT_EQ(records[0].solver_calls, 2 * static_cast<int>(records[0].explanation_features));
  EXPECT_EQ(records[1].solver_calls, 4 * static_cast<int>(records[1].explanation_features));
  EXPECT_EQ(records[0].method, "onestep");
  EXPECT_EQ(records[1].method, "twostep");
  EXPECT_DOUBLE_EQ(records[1].parameter, 0.25);
  for (const auto& r : records) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_GE(r.seconds, 0.0);
    EXPECT_EQ(r.dataset_coverage, 1u);
    EXPECT_LE(r.synthetic_coverage, 100u);
  }
}

TEST(RunEvaluation, EmptyDataset) {
  const auto f = testing::fixture_a();
  EXPECT_TRUE(run_evaluation(f.classifier, f.domain, {}, {}, {parse_method("onestep")}).empty());
}

TEST(RunEvaluation, ErrorRowsDoNotStopTheRun) {
  const auto f = testing::fixture_a();
  auto test = instances({f.instance, Vector{{0.1, 0.2, 0.3}}, Vector{{0.2, 0.9}}});
  const auto records = run_evaluation(f.classifier, f.domain, test, test,
                                      {parse_method("onestep")});
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].status, "ok");
  EXPECT_NE(records[1].status, "ok");
  EXPECT_EQ(records[2].status, "ok");
}

TEST(RunEvaluation, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(12);
  const auto net = testing::random_mlp(rng, 3, 3, 3);
  std::vector<Vector> points;
  for (int k = 0; k < 12; ++k) points.push_back(testing::random_point(rng, Domain::unit(3)));
  const auto test = instances(points);
  const std::vector<MethodSpec> methods{parse_method("onestep"), parse_method("twostep:0.5"),
                                        parse_method("incremental:0.1")};
  EvaluationOptions options;
  options.seed = 99;
  const auto a = run_evaluation(net, Domain::unit(3), test, test, methods, options);
  options.jobs = 4;
  const auto b = run_evaluation(net, Domain::unit(3), test, test, methods, options);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].instance_id, b[k].instance_id);
    EXPECT_EQ(a[k].method, b[k].method);
    EXPECT_EQ(a[k].mean_range_width, b[k].mean_range_width);
    EXPECT_EQ(a[k].dataset_coverage, b[k].dataset_coverage);
    EXPECT_EQ(a[k].synthetic_coverage, b[k].synthetic_coverage);
    EXPECT_EQ(a[k].solver_calls, b[k].solver_calls);
  }
}

}  // namespace
}  // namespace xpinflate::metrics
