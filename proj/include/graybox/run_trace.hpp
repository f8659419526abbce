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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "graybox/benchmark.hpp"

namespace graybox {

struct TraceStep {
    long step_index = 0;
    std::size_t config_index = 0;
    int budget = 0;
    double score = 0.0;
    int incremental_epochs = 0;
    long cumulative_epochs = 0;
    double cumulative_seconds = 0.0;
    /// The optimizer could not use its surrogate and picked at random.
    bool fallback = false;
};

/// Ordered log of one optimizer run.
struct RunTrace {
    std::string method;
    std::uint64_t seed = 0;
    std::string benchmark_name;
    std::vector<TraceStep> steps;

    /// Config with the largest observed score (earliest on ties).
    std::optional<std::size_t> recommendation() const;
    /// Highest budget reached per config (0 if never run).
    std::vector<int> max_budgets(std::size_t n_configs) const;
};

// JSON-lines: a header object {"method", "seed", "benchmark"} followed by one
// object per step with the TraceStep fields.
void write_trace(const RunTrace& trace, std::ostream& out);
RunTrace read_trace(std::istream& in);
void save_trace(const RunTrace& trace, const std::filesystem::path& path);
RunTrace load_trace(const std::filesystem::path& path);

/// Runs queries against a benchmark under a total-epoch cap and records them.
class TraceRecorder {
public:
    TraceRecorder(const Benchmark& benchmark, std::string method, std::uint64_t seed, long budget_cap);

    bool exhausted() const { return ledger_.cumulative_epochs() >= cap_; }
    long remaining() const { return cap_ - ledger_.cumulative_epochs(); }
    const BudgetLedger& ledger() const { return ledger_; }

    /// Queries one config at one budget; returns the score.
    double query(std::size_t config, int budget, bool fallback = false);

    /// Trains a config epoch by epoch up to target (truncated by the cap).
    /// Returns the score at the last budget reached, or nothing if the cap was
    /// already spent.
    std::optional<double> advance(std::size_t config, int target);

    RunTrace take() { return std::move(trace_); }
    const RunTrace& trace() const { return trace_; }

private:
    const Benchmark& benchmark_;
    BudgetLedger ledger_;
    long cap_;
    RunTrace trace_;
};

}  // namespace graybox
