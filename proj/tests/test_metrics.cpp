/*
 * Copyright 2026 The Graybox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "graybox/baselines.hpp"
#include "graybox/errors.hpp"
#include "graybox/metrics.hpp"

using namespace graybox;

namespace {

RegretCurve flat(double regret) { return RegretCurve{{{10.0, regret}}}; }

void expect_points(const std::vector<BudgetValue>& got, const std::vector<BudgetValue>& want) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_EQ(got[i].budget, want[i].budget);
        EXPECT_EQ(got[i].value, want[i].value) << "budget " << want[i].budget;
    }
}

}  // namespace

TEST(RegretCurve, SixConfigRun) {
    const Benchmark b = fixture::six_config_table();
    const auto c = regret_curve(fixture::replay(b, fixture::six_config_run()), b);
    const std::vector<int> sixty_fourths = {26, 20, 20, 13, 13, 13, 12, 12, 12, 12, 0, 0, 0};
    ASSERT_EQ(c.points.size(), sixty_fourths.size());
    for (std::size_t i = 0; i < sixty_fourths.size(); ++i) EXPECT_EQ(c.points[i].regret, sixty_fourths[i] / 64.0);
}

TEST(RegretCurve, BestSoFarArithmetic) {
    const Benchmark b = fixture::table_benchmark({{0.5, 0.5}, {0.7, 0.7}, {0.2, 0.9}});
    const auto c = regret_curve(fixture::replay(b, {{0, 1}, {1, 1}}), b);
    ASSERT_EQ(c.points.size(), 2u);
    EXPECT_NEAR(c.points[0].regret, 0.4, 1e-15);
    EXPECT_NEAR(c.points[1].regret, 0.2, 1e-15);
    EXPECT_EQ(c.points[0].x, 1.0);
    EXPECT_EQ(c.points[1].x, 2.0);
}

TEST(RegretCurve, ReachingTheOptimumGivesZero) {
    const Benchmark b = fixture::table_benchmark({{0.5, 0.6}, {0.2, 0.9}});
    const auto c = regret_curve(fixture::replay(b, {{0, 1}, {1, 2}}), b);
    EXPECT_EQ(c.points.back().regret, 0.0);
}

TEST(RegretCurve, SecondsAxisAndStepInterpolation) {
    const Benchmark b = fixture::table_benchmark({{0.5, 0.6}, {0.2, 0.9}});
    const auto c = regret_curve(fixture::replay(b, {{0, 1}, {1, 2}}), b, XAxis::kSeconds);
    EXPECT_EQ(c.points[1].x, 3.0);
    EXPECT_FALSE(c.at(0.5).has_value());
    EXPECT_NEAR(*c.at(1.0), 0.4, 1e-15);
    EXPECT_NEAR(*c.at(2.9), 0.4, 1e-15);
    EXPECT_EQ(*c.at(100.0), 0.0);
}

TEST(RegretCurve, MismatchedBenchmarkIsRejected) {
    const Benchmark b = fixture::table_benchmark({{0.5, 0.6}}, "one");
    const Benchmark other = fixture::table_benchmark({{0.5, 0.6}}, "two");
    EXPECT_THROW(regret_curve(fixture::replay(b, {{0, 1}}), other), ArgumentError);
    const Benchmark wide = fixture::table_benchmark({{0.5, 0.6}, {0.1, 0.2}}, "one");
    EXPECT_THROW(regret_curve(fixture::replay(wide, {{1, 1}}), b), ArgumentError);
}

TEST(RegretCurve, NonnegativeAndNonincreasingOnRealRuns) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Benchmark b = synth_benchmark(50, 8, 0.5, 0.02, seed);
        for (const RunTrace& t : {run_random_search(b, 100, seed), run_asha(b, 100, seed)}) {
            const auto c = regret_curve(t, b);
            for (std::size_t i = 0; i < c.points.size(); ++i) {
                EXPECT_GE(c.points[i].regret, 0.0);
                if (i) EXPECT_LE(c.points[i].regret, c.points[i - 1].regret);
            }
        }
    }
}

TEST(MeanRegret, IsTheArithmeticMeanAtAlignedEpochs) {
    const std::vector<RegretCurve> curves = {RegretCurve{{{1, 0.5}, {3, 0.25}}}, RegretCurve{{{1, 0.75}, {2, 0.5}}},
                                             RegretCurve{{{1, 1.0}, {4, 0.0}}}};
    const std::vector<double> grid = {1, 2, 3, 4};
    const auto m = mean_regret(curves, grid);
    ASSERT_EQ(m.size(), 4u);
    EXPECT_DOUBLE_EQ(m[0], (0.5 + 0.75 + 1.0) / 3);
    EXPECT_DOUBLE_EQ(m[1], (0.5 + 0.5 + 1.0) / 3);
    EXPECT_DOUBLE_EQ(m[2], (0.25 + 0.5 + 1.0) / 3);
    EXPECT_DOUBLE_EQ(m[3], (0.25 + 0.5 + 0.0) / 3);
    const std::vector<double> early = {0.5};
    EXPECT_THROW(mean_regret(curves, early), ArgumentError);
}

TEST(AverageRank, StrictlyBetterMethod) {
    const CurveTable t = {{"A", {{"d1", flat(0.1)}, {"d2", flat(0.0)}}}, {"B", {{"d1", flat(0.2)}, {"d2", flat(0.3)}}}};
    const auto r = average_rank(t, 10);
    EXPECT_EQ(r.at("A"), 1.0);
    EXPECT_EQ(r.at("B"), 2.0);
}

TEST(AverageRank, TiesShareTheMeanRank) {
    const CurveTable t = {{"A", {{"d", flat(0.2)}}}, {"B", {{"d", flat(0.2)}}}};
    const auto r = average_rank(t, 10);
    EXPECT_EQ(r.at("A"), 1.5);
    EXPECT_EQ(r.at("B"), 1.5);
}

TEST(AverageRank, HandRankedThreeByThree) {
    // d1: A < B < C -> 1 2 3;  d2: B = C < A -> 3 1.5 1.5;  d3: A < C < B -> 1 3 2
    const CurveTable t = {{"A", {{"d1", flat(0.1)}, {"d2", flat(0.5)}, {"d3", flat(0.0)}}},
                          {"B", {{"d1", flat(0.2)}, {"d2", flat(0.2)}, {"d3", flat(0.4)}}},
                          {"C", {{"d1", flat(0.3)}, {"d2", flat(0.2)}, {"d3", flat(0.1)}}}};
    const auto per = dataset_ranks(t, 10);
    EXPECT_EQ(per.at("B").at("d2"), 1.5);
    EXPECT_EQ(per.at("C").at("d3"), 2.0);
    const auto r = average_rank(t, 10);
    EXPECT_DOUBLE_EQ(r.at("A"), 5.0 / 3);
    EXPECT_DOUBLE_EQ(r.at("B"), 6.5 / 3);
    EXPECT_DOUBLE_EQ(r.at("C"), 6.5 / 3);
    double sum = 0.0;
    for (const auto& [_, v] : r) sum += v;
    EXPECT_DOUBLE_EQ(sum, 6.0);
}

TEST(AverageRank, MissingPairIsNamed) {
    const CurveTable t = {{"A", {{"d1", flat(0.1)}, {"d2", flat(0.0)}}}, {"C", {{"d1", flat(0.2)}}}};
    try {
        average_rank(t, 10);
        FAIL() << "expected ArgumentError";
    } catch (const ArgumentError& e) {
        EXPECT_NE(std::string(e.what()).find("C/d2"), std::string::npos) << e.what();
    }
    // present but no value yet at the alignment point
    EXPECT_THROW(average_rank(t, 5), ArgumentError);
}

TEST(SixConfigTable, PrecisionAtBudget) {
    const Benchmark b = fixture::six_config_table();
    const RunTrace t = fixture::replay(b, fixture::six_config_run());
    expect_points(precision_at_budget(t, b), {{1, 1.0 / 6}, {2, 1.0 / 4}, {3, 1.0 / 3}});
    expect_points(precision_at_budget(t, b, 0.5), {{1, 3.0 / 6}, {2, 3.0 / 4}, {3, 1.0}});
}

TEST(SixConfigTable, AverageSelectedRegret) {
    const Benchmark b = fixture::six_config_table();
    const RunTrace t = fixture::replay(b, fixture::six_config_run());
    expect_points(avg_selected_regret(t, b), {{1, (77.0 / 64) / 6}, {2, 0.125}, {3, (18.0 / 64) / 3}});
}

TEST(SixConfigTable, PromotionFraction) {
    const Benchmark b = fixture::six_config_table();
    const RunTrace t = fixture::replay(b, fixture::six_config_run());
    expect_points(promotion_fraction(t, b), {{2, 0.0}, {3, 1.0}});
    expect_points(promotion_fraction_baseline(b), {{2, 0.0}, {3, 1.0}});
}

TEST(Precision, SmallExamples) {
    const Benchmark b = fixture::table_benchmark({{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.9}, {0.2, 0.3}});
    expect_points(precision_at_budget(fixture::replay(b, {{2, 1}, {2, 2}}), b), {{1, 1.0}, {2, 1.0}});
    const RunTrace all = fixture::replay(b, {{0, 2}, {1, 2}, {2, 2}, {3, 2}});
    expect_points(precision_at_budget(all, b), {{1, 0.25}, {2, 0.25}});
    EXPECT_THROW(precision_at_budget(all, b, 0.0), ArgumentError);
    EXPECT_THROW(precision_at_budget(all, b, 1.5), ArgumentError);
}

TEST(Precision, EmptyBudgetsAreOmitted) {
    const Benchmark b = fixture::table_benchmark({{0.1, 0.2, 0.3}, {0.3, 0.4, 0.5}});
    const auto p = precision_at_budget(fixture::replay(b, {{0, 1}}), b);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].budget, 1);
}

TEST(Precision, RandomSearchMatchesTheBaseRate) {
    // Pooled over seeds, the number of top configs among k uniform draws is a
    // sum of hypergeometric counts with mean k * top / n.
    const int n = 200;
    const int top = 10;
    const int k = 20;
    const int seeds = 50;
    double hits = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const Benchmark b = synth_benchmark(n, 5, 0.3, 0.01, 500 + s);
        const auto p = precision_at_budget(run_random_search(b, 5L * k, s), b, static_cast<double>(top) / n);
        ASSERT_EQ(p.front().budget, 1);
        hits += p.front().value * k;
    }
    const double q = static_cast<double>(top) / n;
    const double mean = seeds * k * q;
    const double sd = std::sqrt(seeds * k * q * (1 - q) * (n - k) / (n - 1.0));
    EXPECT_NEAR(hits, mean, 3.0 * sd);
}

TEST(Precision, BoundedWithShrinkingDenominator) {
    const Benchmark b = synth_benchmark(60, 9, 0.3, 0.01, 2);
    const RunTrace t = run_hyperband(b, 300, 1);
    const auto p = precision_at_budget(t, b, 0.1);
    const auto reach = t.max_budgets(b.size());
    std::size_t previous = b.size();
    for (const auto& [budget, value] : p) {
        EXPECT_GE(value, 0.0);
        EXPECT_LE(value, 1.0);
        const auto count = static_cast<std::size_t>(std::count_if(reach.begin(), reach.end(), [&](int r) { return r >= budget; }));
        EXPECT_LE(count, previous);
        previous = count;
    }
}

TEST(AvgSelectedRegret, SmallExamples) {
    const Benchmark b = fixture::table_benchmark({{0.5, 0.9}, {0.6, 0.7}});
    expect_points(avg_selected_regret(fixture::replay(b, {{0, 2}}), b), {{1, 0.0}, {2, 0.0}});
    const auto two = avg_selected_regret(fixture::replay(b, {{0, 2}, {1, 2}}), b);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_NEAR(two[1].value, 0.1, 1e-15);
}

TEST(AvgSelectedRegret, RandomSearchMatchesThePopulationMean) {
    const Benchmark b = synth_benchmark(150, 4, 0.3, 0.01, 9);
    double best = 0.0;
    for (std::size_t c = 0; c < b.size(); ++c) best = std::max(best, b.final_score(c));
    double population = 0.0;
    for (std::size_t c = 0; c < b.size(); ++c) population += best - b.final_score(c);
    population /= static_cast<double>(b.size());
    std::vector<double> samples;
    for (std::uint64_t s = 0; s < 200; ++s) {
        samples.push_back(avg_selected_regret(run_random_search(b, 4 * 10, s), b).back().value);
    }
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (samples.size() - 1) / samples.size());
    EXPECT_NEAR(mean, population, 3.0 * se);
}

TEST(Promotion, TwoBudgetHandExample) {
    // Top third at b=1 is {c0, c1}; at b=2 it is {c0, c2}, and c2 came from
    // the bottom two thirds.
    const Benchmark b = fixture::table_benchmark(
        {{0.9, 0.95}, {0.8, 0.85}, {0.7, 0.9}, {0.6, 0.65}, {0.5, 0.55}, {0.4, 0.45}}, "two-budget");
    expect_points(promotion_fraction_baseline(b), {{2, 0.5}});
    std::vector<std::pair<std::size_t, int>> all;
    for (std::size_t c = 0; c < 6; ++c) all.emplace_back(c, 2);
    expect_points(promotion_fraction(fixture::replay(b, all), b), {{2, 0.5}});
}

TEST(Promotion, ZeroOnRankStableTables) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Benchmark b = synth_benchmark(60, 10, 0.0, 0.0, seed);
        for (const auto& [budget, value] : promotion_fraction_baseline(b)) EXPECT_EQ(value, 0.0) << budget;
        for (const auto& [budget, value] : promotion_fraction(run_hyperband(b, 400, seed), b)) {
            EXPECT_EQ(value, 0.0) << budget;
        }
    }
}

TEST(Promotion, PositiveWithCrossings) {
    const Benchmark b = synth_benchmark(200, 20, 0.5, 0.01, 1);
    const auto p = promotion_fraction_baseline(b);
    ASSERT_FALSE(p.empty());
    double peak = 0.0;
    for (const auto& [budget, value] : p) {
        EXPECT_GE(value, 0.0);
        EXPECT_LE(value, 1.0);
        peak = std::max(peak, value);
    }
    EXPECT_GT(peak, 0.0);
}

TEST(Promotion, FewerThanThreeConfigsIsOmitted) {
    const Benchmark b = fixture::table_benchmark({{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.9}});
    EXPECT_TRUE(promotion_fraction(fixture::replay(b, {{0, 2}, {1, 2}, {2, 1}}), b).empty());
}

TEST(Csv, TidyColumns) {
    const std::vector<CsvRow> rows = {{"dyhpo", "synth", 3, 10.0, "regret", 0.25},
                                      {"rs", "synth", std::nullopt, 20.0, "rank", 1.5}};
    std::ostringstream out;
    write_csv(rows, out);
    EXPECT_EQ(out.str(), "method,dataset,seed,x,metric,value\ndyhpo,synth,3,10,regret,0.25\nrs,synth,,20,rank,1.5\n");
}
