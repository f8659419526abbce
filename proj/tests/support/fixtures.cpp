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

#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "graybox/metrics.hpp"
#include "graybox/rng.hpp"

namespace fixture {

using graybox::Benchmark;

TempDir::TempDir(const std::string& tag) {
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    do {
        path_ = base / ("graybox-" + tag + "-" + std::to_string(rd()));
    } while (std::filesystem::exists(path_));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

Benchmark table_benchmark(std::vector<std::vector<double>> curves, std::string name) {
    Benchmark b;
    b.name = std::move(name);
    b.space.params = {graybox::ParamSpec::numeric("x", 0.0, 1.0)};
    b.max_budget = static_cast<int>(curves.front().size());
    const std::size_t n = curves.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.5;
        b.configs.push_back({x});
        b.epoch_seconds.emplace_back(static_cast<std::size_t>(b.max_budget), 1.0);
    }
    b.curves = std::move(curves);
    b.validate();
    return b;
}

graybox::History build_history(const Benchmark& benchmark, const std::vector<graybox::EncodedConfig>& encoded,
                               const std::vector<std::pair<std::size_t, int>>& sequence) {
    graybox::History h(benchmark.max_budget);
    for (const auto& [c, j] : sequence) {
        graybox::SurrogateInput in;
        in.x = encoded[c];
        const auto curve = h.curve(c);
        in.curve_prefix.assign(curve.begin(), curve.end());
        in.budget = j;
        h.add({c, std::move(in), benchmark.score(c, j)});
    }
    return h;
}

graybox::History history_to_budgets(const Benchmark& benchmark, const std::vector<graybox::EncodedConfig>& encoded,
                                    const std::vector<std::pair<std::size_t, int>>& targets) {
    std::vector<std::pair<std::size_t, int>> sequence;
    int deepest = 0;
    for (const auto& t : targets) deepest = std::max(deepest, t.second);
    for (int j = 1; j <= deepest; ++j) {
        for (const auto& [c, target] : targets) {
            if (j <= target) sequence.emplace_back(c, j);
        }
    }
    return build_history(benchmark, encoded, sequence);
}

graybox::RunTrace replay(const Benchmark& benchmark, const std::vector<std::pair<std::size_t, int>>& sequence,
                         std::string method) {
    graybox::TraceRecorder recorder(benchmark, std::move(method), 0, 1L << 40);
    for (const auto& [c, j] : sequence) recorder.query(c, j);
    return recorder.take();
}

testing::AssertionResult cost_consistent(const graybox::RunTrace& trace, const Benchmark& benchmark) {
    std::map<std::size_t, int> reached;
    long epochs = 0;
    double seconds = 0.0;
    for (const auto& s : trace.steps) {
        if (s.budget < 1 || s.budget > benchmark.max_budget) {
            return testing::AssertionFailure() << "step " << s.step_index << " has budget " << s.budget;
        }
        const int before = reached[s.config_index];
        const int charged = std::max(0, s.budget - before);
        if (s.incremental_epochs != charged) {
            return testing::AssertionFailure() << "step " << s.step_index << " charged " << s.incremental_epochs
                                               << " epochs, expected " << charged;
        }
        for (int j = before + 1; j <= s.budget; ++j) seconds += benchmark.epoch_seconds[s.config_index][j - 1];
        reached[s.config_index] = std::max(before, s.budget);
        epochs += s.incremental_epochs;
        if (s.cumulative_epochs != epochs) {
            return testing::AssertionFailure() << "step " << s.step_index << " cumulative epochs " << s.cumulative_epochs
                                               << " != " << epochs;
        }
        if (std::abs(s.cumulative_seconds - seconds) > 1e-9 * std::max(1.0, seconds)) {
            return testing::AssertionFailure() << "step " << s.step_index << " cumulative seconds drifted";
        }
        if (s.score != benchmark.score(s.config_index, s.budget)) {
            return testing::AssertionFailure() << "step " << s.step_index << " score differs from the table";
        }
    }
    long total_reached = 0;
    for (const auto& [c, j] : reached) total_reached += j;
    if (total_reached != epochs) {
        return testing::AssertionFailure() << "sum of incremental epochs " << epochs << " != sum of max budgets "
                                           << total_reached;
    }
    return testing::AssertionSuccess();
}

testing::AssertionResult single_epoch_steps(const graybox::RunTrace& trace, const Benchmark& benchmark) {
    std::map<std::size_t, int> reached;
    for (const auto& s : trace.steps) {
        const int before = reached[s.config_index];
        if (s.budget != before + 1) {
            return testing::AssertionFailure() << "step " << s.step_index << " moved config " << s.config_index
                                               << " from " << before << " to " << s.budget;
        }
        if (s.budget > benchmark.max_budget) {
            return testing::AssertionFailure() << "step " << s.step_index << " exceeds the maximum budget";
        }
        if (s.incremental_epochs != 1) {
            return testing::AssertionFailure() << "step " << s.step_index << " cost " << s.incremental_epochs;
        }
        reached[s.config_index] = s.budget;
    }
    return testing::AssertionSuccess();
}

testing::AssertionResult regret_nonincreasing(const graybox::RunTrace& trace, const Benchmark& benchmark) {
    const auto curve = graybox::regret_curve(trace, benchmark);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].regret > curve.points[i - 1].regret) {
            return testing::AssertionFailure() << "regret rose at step " << i;
        }
    }
    return testing::AssertionSuccess();
}

GpCase random_gp_case(std::uint64_t seed, int max_observations) {
    graybox::Rng rng(seed, "gp-case");
    GpCase c;
    c.benchmark = graybox::synth_benchmark(12, 6, 0.3, 0.01, seed);
    c.encoded = graybox::encode_all(graybox::Encoder(c.benchmark.space), c.benchmark);
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_observations)));
    std::vector<int> reached(c.benchmark.size(), 0);
    std::vector<std::pair<std::size_t, int>> sequence;
    while (static_cast<int>(sequence.size()) < n) {
        const auto config = rng.below(c.benchmark.size());
        if (reached[config] >= c.benchmark.max_budget) continue;
        sequence.emplace_back(config, ++reached[config]);
    }
    c.history = build_history(c.benchmark, c.encoded, sequence);

    c.state = graybox::SurrogateState::initial(static_cast<int>(c.encoded.front().size()), c.benchmark.max_budget,
                                               rng.next(), rng.uniform() < 0.8);
    c.state.kernel.log_lengthscale = rng.uniform(-0.5, 1.5);
    c.state.kernel.log_outputscale = rng.uniform(-1.0, 1.0);
    c.state.kernel.raw_noise = graybox::KernelParams::raw_noise_for(rng.uniform(1e-3, 0.2));
    const auto scaling = graybox::fit_target_scaling(c.history);
    c.state.y_mean = scaling.mean;
    c.state.y_sd = scaling.sd;

    c.queries.push_back(c.history.observations()[rng.below(c.history.size())].input);
    for (int q = 0; q < 4; ++q) {
        graybox::SurrogateInput in;
        in.x = c.encoded[rng.below(c.encoded.size())];
        in.budget = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(c.benchmark.max_budget)));
        for (int j = 1; j < in.budget; ++j) in.curve_prefix.push_back(rng.uniform());
        c.queries.push_back(std::move(in));
    }
    return c;
}

Benchmark six_config_table() {
    const std::vector<std::vector<int>> units = {
        {32, 38, 45}, {38, 42, 44}, {26, 35, 58}, {45, 46, 47}, {19, 22, 26}, {13, 32, 51},
    };
    std::vector<std::vector<double>> curves;
    for (const auto& row : units) {
        std::vector<double> c;
        for (int u : row) c.push_back(u / 64.0);
        curves.push_back(std::move(c));
    }
    return table_benchmark(std::move(curves), "six-config");
}

std::vector<std::pair<std::size_t, int>> six_config_run() {
    return {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {3, 2},
            {1, 2}, {2, 2}, {5, 2}, {2, 3}, {3, 3}, {5, 3}};
}

}  // namespace fixture
