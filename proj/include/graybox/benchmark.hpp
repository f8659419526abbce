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
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace graybox {

enum class ParamKind { kNumeric, kCategorical };

struct ParamSpec {
    std::string name;
    ParamKind kind = ParamKind::kNumeric;
    double low = 0.0;
    double high = 1.0;
    bool log_scale = false;
    std::vector<std::string> choices;

    static ParamSpec numeric(std::string name, double low, double high, bool log_scale = false);
    static ParamSpec categorical(std::string name, std::vector<std::string> choices);
};

struct SearchSpace {
    std::vector<ParamSpec> params;

    /// Throws ArgumentError on duplicate names, empty/duplicate choices,
    /// low >= high, or a non-positive lower bound on a log-scaled param.
    void validate() const;
    std::optional<std::size_t> index_of(const std::string& name) const;
};

/// Numeric params hold a double, categorical params the chosen label.
using ParamValue = std::variant<double, std::string>;

/// One value per SearchSpace param, in declaration order.
using RawConfig = std::vector<ParamValue>;

/// Immutable table of precomputed learning curves.
///
/// curves[i][j - 1] is the validation score of config i after j epochs, an
/// accuracy fraction in [0, 1] to be maximized. epoch_seconds[i][j - 1] is the
/// simulated duration of that epoch.
struct Benchmark {
    std::string name;
    SearchSpace space;
    int max_budget = 0;
    std::vector<RawConfig> configs;
    std::vector<std::vector<double>> curves;
    std::vector<std::vector<double>> epoch_seconds;

    std::size_t size() const { return configs.size(); }
    double score(std::size_t config, int budget) const { return curves[config][budget - 1]; }
    double final_score(std::size_t config) const { return curves[config].back(); }

    /// Throws LoadError naming the first offending record.
    void validate() const;
};

struct QueryResult {
    double score = 0.0;
    int incremental_epochs = 0;
    double incremental_seconds = 0.0;
};

/// Per-run record of how far each config has been trained.
class BudgetLedger {
public:
    explicit BudgetLedger(std::size_t n_configs) : highest_(n_configs, 0) {}

    int highest(std::size_t config) const { return highest_.at(config); }
    long cumulative_epochs() const { return cumulative_epochs_; }
    double cumulative_seconds() const { return cumulative_seconds_; }
    std::size_t n_configs() const { return highest_.size(); }

private:
    friend QueryResult query(const Benchmark&, BudgetLedger&, std::size_t, int);

    std::vector<int> highest_;
    long cumulative_epochs_ = 0;
    double cumulative_seconds_ = 0.0;
};

/// Looks up curves[config][budget] and charges only the epochs beyond the
/// config's previous highest budget.
QueryResult query(const Benchmark& benchmark, BudgetLedger& ledger, std::size_t config, int budget);

/// Largest final-budget score over all configs.
double best_score(const Benchmark& benchmark);

Benchmark load_benchmark(const std::filesystem::path& dir);
void save_benchmark(const Benchmark& benchmark, const std::filesystem::path& dir);

/// Saturating learning curves y = a (1 - exp(-b j / B)) + noise, clipped to
/// [0, 1]. A crossing_fraction share of the configs start slowly but reach a
/// higher asymptote, so their early rank is poor and their final rank good.
Benchmark synth_benchmark(int n_configs, int max_budget, double crossing_fraction, double noise_sd,
                          std::uint64_t seed);

}  // namespace graybox
