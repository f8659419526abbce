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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "graybox/benchmark.hpp"
#include "graybox/encoding.hpp"
#include "graybox/run_trace.hpp"
#include "graybox/surrogate.hpp"

namespace fixture {

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& child) const { return path_ / child; }

private:
    std::filesystem::path path_;
};

/// One numeric param "x" in [0, 1]; config i sits at i / (n - 1). One second
/// per epoch unless seconds are given.
graybox::Benchmark table_benchmark(std::vector<std::vector<double>> curves, std::string name = "table");

/// Observes each (config, budget) pair in order; budgets must be contiguous.
graybox::History build_history(const graybox::Benchmark& benchmark, const std::vector<graybox::EncodedConfig>& encoded,
                               const std::vector<std::pair<std::size_t, int>>& sequence);

/// Observes configs round-robin until each reached its target budget.
graybox::History history_to_budgets(const graybox::Benchmark& benchmark,
                                    const std::vector<graybox::EncodedConfig>& encoded,
                                    const std::vector<std::pair<std::size_t, int>>& targets);

/// Replays (config, budget) queries through a TraceRecorder with no cap pressure.
graybox::RunTrace replay(const graybox::Benchmark& benchmark, const std::vector<std::pair<std::size_t, int>>& sequence,
                         std::string method = "replay");

/// Cost accounting: incremental epochs sum to the per-config max budgets, the
/// cumulative columns add up, and no budget exceeds the maximum.
testing::AssertionResult cost_consistent(const graybox::RunTrace& trace, const graybox::Benchmark& benchmark);

/// One-epoch stepping: every step lifts exactly one config by exactly one
/// budget, starting at 1.
testing::AssertionResult single_epoch_steps(const graybox::RunTrace& trace, const graybox::Benchmark& benchmark);

/// Best-so-far regret never increases along the trace.
testing::AssertionResult regret_nonincreasing(const graybox::RunTrace& trace, const graybox::Benchmark& benchmark);

/// A random deep-kernel GP problem: a small synthetic benchmark, a seeded
/// state with perturbed kernel parameters, a history of 1..max_observations
/// one-epoch steps, and a few queries (one of them a training input).
struct GpCase {
    graybox::Benchmark benchmark;
    std::vector<graybox::EncodedConfig> encoded;
    graybox::SurrogateState state;
    graybox::History history{1};
    std::vector<graybox::SurrogateInput> queries;
};
GpCase random_gp_case(std::uint64_t seed, int max_observations);

/// Six configs over three epochs, scores in 1/64 units so every metric is
/// exact in binary floating point.
graybox::Benchmark six_config_table();

/// A run on six_config_table reaching budgets {1, 2, 3, 3, 1, 3}.
std::vector<std::pair<std::size_t, int>> six_config_run();

}  // namespace fixture
