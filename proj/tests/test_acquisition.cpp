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

#include "fixtures.hpp"
#include "graybox/acquisition.hpp"
#include "graybox/errors.hpp"
#include "graybox/rng.hpp"
#include "oracles.hpp"

using namespace graybox;

TEST(ExpectedImprovement, StandardNormalAtIncumbent) {
    EXPECT_NEAR(expected_improvement(0.3, 1.0, 0.3), 1.0 / std::sqrt(2.0 * M_PI), 1e-15);
    EXPECT_NEAR(expected_improvement(0.3, 1.0, 0.3), 0.3989423, 1e-7);
}

TEST(ExpectedImprovement, DeterministicLimitIsAHinge) {
    EXPECT_EQ(expected_improvement(0.4, 0.0, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(expected_improvement(0.7, 0.0, 0.5), 0.2);
    EXPECT_DOUBLE_EQ(expected_improvement(0.7, 1e-30, 0.5), 0.2);
    EXPECT_THROW(expected_improvement(0.7, -1.0, 0.5), ArgumentError);
}

TEST(ExpectedImprovement, MatchesMonteCarloOracle) {
    const auto mc = oracle::sampled_expected_improvement(0.6, 0.1, 0.5, 1'000'000, 1);
    EXPECT_NEAR(expected_improvement(0.6, 0.01, 0.5), mc.mean, 3.0 * mc.standard_error);
}

TEST(ExpectedImprovement, Properties) {
    Rng rng(2);
    for (int t = 0; t < 2000; ++t) {
        const double mean = rng.uniform(-2.0, 2.0);
        const double sd = rng.uniform(0.01, 2.0);
        const double inc = rng.uniform(-2.0, 2.0);
        const double ei = expected_improvement(mean, sd * sd, inc);
        ASSERT_GE(ei, 0.0);
        EXPECT_LT(ei, expected_improvement(mean + 0.05, sd * sd, inc) + 1e-300);
        const double c = rng.uniform(-1.0, 1.0);
        EXPECT_NEAR(expected_improvement(mean + c, sd * sd, inc + c), ei, 1e-12);
        if (mean <= inc) EXPECT_LT(ei, expected_improvement(mean, (sd + 0.05) * (sd + 0.05), inc));
    }
}

class IncumbentTest : public ::testing::Test {
protected:
    void SetUp() override {
        bench_ = fixture::table_benchmark({{0.6, 0.4, 0.3}, {0.2, 0.7, 0.8}, {0.1, 0.2, 0.3}});
        encoded_ = encode_all(Encoder(bench_.space), bench_);
    }
    History history(const std::vector<std::pair<std::size_t, int>>& seq) const {
        return fixture::build_history(bench_, encoded_, seq);
    }
    Benchmark bench_;
    std::vector<EncodedConfig> encoded_;
};

TEST_F(IncumbentTest, AtBudgetTakesTheMaximumThere) {
    const History h = history({{0, 1}, {1, 1}, {0, 2}, {1, 2}});
    const auto inc = incumbent_for_budget(h, 2);
    EXPECT_DOUBLE_EQ(inc.value, 0.7);
    EXPECT_EQ(inc.source, IncumbentSource::kAtBudget);
}

TEST_F(IncumbentTest, AtBudgetIgnoresBetterScoresElsewhere) {
    // best overall 0.6 sits at budget 1; budget 2 only has 0.4
    const History h = history({{0, 1}, {2, 1}, {0, 2}});
    const auto inc = incumbent_for_budget(h, 2);
    EXPECT_DOUBLE_EQ(inc.value, 0.4);
    EXPECT_EQ(inc.source, IncumbentSource::kAtBudget);
}

TEST_F(IncumbentTest, FallsBackToGlobalMaximum) {
    const History h = history({{0, 1}, {1, 1}, {2, 1}});
    const auto inc = incumbent_for_budget(h, 3);
    EXPECT_DOUBLE_EQ(inc.value, 0.6);
    EXPECT_EQ(inc.source, IncumbentSource::kGlobalFallback);
}

TEST_F(IncumbentTest, FallbackSeesHigherBudgetsToo) {
    const History h = history({{1, 1}, {1, 2}, {1, 3}});
    const auto inc = incumbent_for_budget(h, 2);
    EXPECT_DOUBLE_EQ(inc.value, 0.7);
    EXPECT_EQ(inc.source, IncumbentSource::kAtBudget);
    const History g = history({{0, 1}, {1, 1}, {1, 2}, {1, 3}});
    EXPECT_DOUBLE_EQ(incumbent_for_budget(g, 1).value, 0.6);
}

TEST_F(IncumbentTest, EmptyHistoryIsAnError) {
    EXPECT_THROW(incumbent_for_budget(History(3), 1), PreconditionError);
}

TEST_F(IncumbentTest, ValueAlwaysComesFromTheHistory) {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        std::vector<int> reached(3, 0);
        std::vector<std::pair<std::size_t, int>> seq;
        const int n = 1 + static_cast<int>(rng.below(9));
        while (static_cast<int>(seq.size()) < n) {
            const auto c = rng.below(3);
            if (reached[c] < 3) seq.emplace_back(c, ++reached[c]);
        }
        const History h = history(seq);
        for (int j = 1; j <= 3; ++j) {
            const double v = incumbent_for_budget(h, j).value;
            bool present = false;
            for (const auto& o : h.observations()) present |= o.y == v;
            EXPECT_TRUE(present);
        }
    }
}

TEST(SingleBudget, IncumbentIsTheGlobalMaximum) {
    const Benchmark b = fixture::table_benchmark({{0.3}, {0.9}, {0.5}});
    const auto encoded = encode_all(Encoder(b.space), b);
    const History h = fixture::build_history(b, encoded, {{0, 1}, {1, 1}, {2, 1}});
    EXPECT_EQ(incumbent_for_budget(h, 1).value, h.best_overall());
}

TEST(SingleBudget, MultiFidelityEiReducesToEi) {
    Benchmark b = synth_benchmark(50, 2, 0.3, 0.02, 3);
    b.max_budget = 1;
    for (auto& c : b.curves) c.resize(1);
    for (auto& s : b.epoch_seconds) s.resize(1);
    const auto encoded = encode_all(Encoder(b.space), b);
    std::vector<std::pair<std::size_t, int>> seq;
    for (std::size_t c = 0; c < 10; ++c) seq.emplace_back(c, 1);
    const History h = fixture::build_history(b, encoded, seq);
    const SurrogateState s = SurrogateState::initial(4, 1, 7);
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
        SurrogateInput cand;
        cand.x = encoded[rng.below(encoded.size())];
        cand.budget = 1;
        const auto post = predict(s, h, std::vector<SurrogateInput>{cand});
        EXPECT_EQ(mf_ei(s, h, cand), expected_improvement(post[0].mean, post[0].variance, h.best_overall()));
    }
}

TEST(MultiFidelityEi, DeterministicBelowIncumbentIsZero) {
    const Benchmark b = fixture::table_benchmark({{0.3, 0.5}, {0.6, 0.7}});
    const auto encoded = encode_all(Encoder(b.space), b);
    const History h = fixture::build_history(b, encoded, {{0, 1}, {1, 1}});
    EXPECT_EQ(mf_ei(PosteriorPrediction{0.5, 0.0}, h, 1), 0.0);
    EXPECT_THROW(mf_ei(PosteriorPrediction{0.5, 0.0}, h, 3), ArgumentError);
}

TEST(MultiFidelityEi, RankingMatchesMonteCarlo) {
    const Benchmark b = fixture::table_benchmark({{0.5, 0.55}, {0.6, 0.62}});
    const auto encoded = encode_all(Encoder(b.space), b);
    const History h = fixture::build_history(b, encoded, {{0, 1}, {1, 1}, {1, 2}});
    // candidates at budget 1 (incumbent 0.6) and budget 2 (incumbent 0.62)
    struct Cand {
        PosteriorPrediction post;
        int budget;
    };
    const std::vector<Cand> cands = {{{0.58, 0.02 * 0.02}, 1}, {{0.6, 0.05 * 0.05}, 2}, {{0.5, 0.15 * 0.15}, 1}};
    std::vector<double> closed;
    std::vector<double> sampled;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        closed.push_back(mf_ei(cands[i].post, h, cands[i].budget));
        const double inc = incumbent_for_budget(h, cands[i].budget).value;
        sampled.push_back(oracle::sampled_expected_improvement(cands[i].post.mean, std::sqrt(cands[i].post.variance),
                                                               inc, 400'000, 10 + i)
                              .mean);
    }
    auto order = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] > v[b]; });
        return idx;
    };
    EXPECT_EQ(order(closed), order(sampled));
}
