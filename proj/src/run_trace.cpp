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

#include "graybox/run_trace.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "graybox/errors.hpp"

namespace graybox {

using nlohmann::json;

std::optional<std::size_t> RunTrace::recommendation() const {
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (const auto& s : steps) {
        if (!best || s.score > best_score) {
            best = s.config_index;
            best_score = s.score;
        }
    }
    return best;
}

std::vector<int> RunTrace::max_budgets(std::size_t n_configs) const {
    std::vector<int> out(n_configs, 0);
    for (const auto& s : steps) {
        if (s.config_index >= n_configs) throw ArgumentError("trace references config outside the benchmark");
        out[s.config_index] = std::max(out[s.config_index], s.budget);
    }
    return out;
}

void write_trace(const RunTrace& trace, std::ostream& out) {
    const json header = {{"method", trace.method}, {"seed", trace.seed}, {"benchmark", trace.benchmark_name}};
    out << header.dump() << '\n';
    for (const auto& s : trace.steps) {
        const json step = {{"step_index", s.step_index},
                           {"config_index", s.config_index},
                           {"j", s.budget},
                           {"score", s.score},
                           {"incremental_epochs", s.incremental_epochs},
                           {"cumulative_epochs", s.cumulative_epochs},
                           {"cumulative_seconds", s.cumulative_seconds},
                           {"fallback", s.fallback}};
        out << step.dump() << '\n';
    }
}

RunTrace read_trace(std::istream& in) {
    RunTrace t;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            if (!have_header) {
                t.method = j.at("method").get<std::string>();
                t.seed = j.at("seed").get<std::uint64_t>();
                t.benchmark_name = j.at("benchmark").get<std::string>();
                have_header = true;
                continue;
            }
            TraceStep s;
            s.step_index = j.at("step_index").get<long>();
            s.config_index = j.at("config_index").get<std::size_t>();
            s.budget = j.at("j").get<int>();
            s.score = j.at("score").get<double>();
            s.incremental_epochs = j.at("incremental_epochs").get<int>();
            s.cumulative_epochs = j.at("cumulative_epochs").get<long>();
            s.cumulative_seconds = j.at("cumulative_seconds").get<double>();
            s.fallback = j.value("fallback", false);
            t.steps.push_back(s);
        } catch (const json::exception& e) {
            throw LoadError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_header) throw LoadError("trace has no header line");
    return t;
}

void save_trace(const RunTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_trace(trace, out);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

RunTrace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("missing " + path.string());
    return read_trace(in);
}

TraceRecorder::TraceRecorder(const Benchmark& benchmark, std::string method, std::uint64_t seed, long budget_cap)
    : benchmark_(benchmark), ledger_(benchmark.size()), cap_(budget_cap) {
    if (budget_cap < 1) throw ArgumentError("budget cap must be positive");
    trace_.method = std::move(method);
    trace_.seed = seed;
    trace_.benchmark_name = benchmark.name;
}

double TraceRecorder::query(std::size_t config, int budget, bool fallback) {
    const QueryResult r = graybox::query(benchmark_, ledger_, config, budget);
    TraceStep s;
    s.step_index = static_cast<long>(trace_.steps.size());
    s.config_index = config;
    s.budget = budget;
    s.score = r.score;
    s.incremental_epochs = r.incremental_epochs;
    s.cumulative_epochs = ledger_.cumulative_epochs();
    s.cumulative_seconds = ledger_.cumulative_seconds();
    s.fallback = fallback;
    trace_.steps.push_back(s);
    return r.score;
}

std::optional<double> TraceRecorder::advance(std::size_t config, int target) {
    std::optional<double> last;
    for (int j = ledger_.highest(config) + 1; j <= target && !exhausted(); ++j) last = query(config, j);
    if (!last && ledger_.highest(config) >= target) return benchmark_.score(config, target);
    return last;
}

}  // namespace graybox
