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

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "graybox/baselines.hpp"
#include "graybox/benchmark.hpp"
#include "graybox/errors.hpp"
#include "graybox/logging.hpp"
#include "graybox/metrics.hpp"
#include "graybox/optimizer.hpp"
#include "graybox/run_trace.hpp"

namespace fs = std::filesystem;
using namespace graybox;

namespace {

const std::vector<std::string> kMethods = {"dyhpo", "dyhpo-nocurve", "rs", "sh", "hyperband", "asha"};
const std::vector<std::string> kMetrics = {"regret", "rank", "precision", "avg-selected-regret", "promotion"};

struct SynthArgs {
    int configs = 200;
    int budgets = 20;
    double crossing = 0.3;
    double noise = 0.01;
    std::uint64_t seed = 0;
    std::string out;
};

struct RunArgs {
    std::string benchmark;
    std::string method;
    std::vector<std::uint64_t> seeds;
    long budget_cap = 0;
    std::string out;
    int jobs = 1;
    int n_init = 10;
    int eta = 3;
    std::optional<int> candidates;
    double surrogate_lr = FitOptions{}.learning_rate;
};

struct ReportArgs {
    std::vector<std::string> traces;
    std::vector<std::string> benchmarks;
    std::string metric = "regret";
    std::string x_axis = "epochs";
    std::optional<double> at;
    double top_fraction = 0.01;
    std::string out;
};

int cmd_synth(const SynthArgs& a) {
    const Benchmark b = synth_benchmark(a.configs, a.budgets, a.crossing, a.noise, a.seed);
    save_benchmark(b, a.out);
    spdlog::info("wrote {} ({} configs, B={})", a.out, b.size(), b.max_budget);
    return 0;
}

RunTrace run_one(const Benchmark& b, const RunArgs& a, std::uint64_t seed) {
    if (a.method == "dyhpo" || a.method == "dyhpo-nocurve") {
        DyhpoOptions o;
        o.n_init_random = a.n_init;
        o.sampled_candidates = a.candidates;
        o.budget_cap_epochs = a.budget_cap;
        o.use_curve_input = a.method == "dyhpo";
        o.seed = seed;
        o.fit.learning_rate = a.surrogate_lr;
        return run_dyhpo(b, o);
    }
    if (a.method == "rs") return run_random_search(b, a.budget_cap, seed);
    if (a.method == "sh") return run_successive_halving(b, a.budget_cap, seed, a.eta);
    if (a.method == "hyperband") return run_hyperband(b, a.budget_cap, seed, a.eta);
    return run_asha(b, a.budget_cap, seed, a.eta);
}

int cmd_run(const RunArgs& a) {
    const Benchmark b = load_benchmark(a.benchmark);
    fs::create_directories(a.out);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < a.seeds.size(); i = next++) {
            const std::uint64_t seed = a.seeds[i];
            try {
                const RunTrace t = run_one(b, a, seed);
                save_trace(t, fs::path(a.out) / (a.method + "_seed" + std::to_string(seed) + ".jsonl"));
                spdlog::info("{} seed {}: {} steps", a.method, seed, t.steps.size());
            } catch (const std::exception& e) {
                std::lock_guard lock(log_mutex);
                std::cerr << "error: " << a.method << " seed " << seed << ": " << e.what() << '\n';
                failed = true;
            }
        }
    };
    const int jobs = std::clamp(a.jobs, 1, static_cast<int>(a.seeds.size()));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return failed ? 1 : 0;
}

int cmd_report(const ReportArgs& a) {
    std::map<std::string, Benchmark> benchmarks;
    for (const auto& dir : a.benchmarks) {
        Benchmark b = load_benchmark(dir);
        std::string name = b.name;
        benchmarks.emplace(std::move(name), std::move(b));
    }
    std::vector<RunTrace> traces;
    for (const auto& p : a.traces) traces.push_back(load_trace(p));
    if (traces.empty()) throw ArgumentError("no traces given");
    auto bench_of = [&](const RunTrace& t) -> const Benchmark& {
        const auto it = benchmarks.find(t.benchmark_name);
        if (it == benchmarks.end()) throw ArgumentError("no benchmark named '" + t.benchmark_name + "' was given");
        return it->second;
    };
    const XAxis axis = a.x_axis == "seconds" ? XAxis::kSeconds : XAxis::kEpochs;

    std::vector<CsvRow> rows;
    if (a.metric == "regret") {
        for (const auto& t : traces) {
            for (const auto& p : regret_curve(t, bench_of(t), axis).points) {
                rows.push_back({t.method, t.benchmark_name, t.seed, p.x, "regret", p.regret});
            }
        }
    } else if (a.metric == "rank") {
        // Seeds are averaged per (method, dataset) before ranking.
        std::map<std::string, std::map<std::string, std::vector<RegretCurve>>> grouped;
        double common_end = std::numeric_limits<double>::infinity();
        for (const auto& t : traces) {
            auto c = regret_curve(t, bench_of(t), axis);
            if (!c.points.empty()) common_end = std::min(common_end, c.points.back().x);
            grouped[t.method][t.benchmark_name].push_back(std::move(c));
        }
        const double at = a.at.value_or(common_end);
        CurveTable table;
        for (const auto& [method, per_dataset] : grouped) {
            for (const auto& [dataset, curves] : per_dataset) {
                const std::vector<double> grid = {at};
                table[method][dataset] = RegretCurve{{{at, mean_regret(curves, grid).front()}}};
            }
        }
        for (const auto& [method, per_dataset] : dataset_ranks(table, at)) {
            for (const auto& [dataset, rank] : per_dataset) rows.push_back({method, dataset, std::nullopt, at, "rank", rank});
        }
        for (const auto& [method, rank] : average_rank(table, at)) {
            rows.push_back({method, "all", std::nullopt, at, "average_rank", rank});
        }
    } else {
        std::set<std::string> baseline_done;
        for (const auto& t : traces) {
            const Benchmark& b = bench_of(t);
            std::vector<BudgetValue> values;
            if (a.metric == "precision") {
                values = precision_at_budget(t, b, a.top_fraction);
            } else if (a.metric == "avg-selected-regret") {
                values = avg_selected_regret(t, b);
            } else {
                values = promotion_fraction(t, b);
                if (!baseline_done.contains(b.name)) {
                    baseline_done.insert(b.name);
                    for (const auto& v : promotion_fraction_baseline(b)) {
                        rows.push_back({"baseline", b.name, std::nullopt, static_cast<double>(v.budget), a.metric, v.value});
                    }
                }
            }
            for (const auto& v : values) {
                rows.push_back({t.method, t.benchmark_name, t.seed, static_cast<double>(v.budget), a.metric, v.value});
            }
        }
    }

    if (a.out.empty()) {
        write_csv(rows, std::cout);
    } else {
        std::ofstream out(a.out);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        write_csv(rows, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"Gray-box hyperparameter optimization on tabular learning-curve benchmarks"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic benchmark directory");
    s->add_option("--configs", synth.configs)->check(CLI::PositiveNumber);
    s->add_option("--budgets", synth.budgets)->check(CLI::PositiveNumber);
    s->add_option("--crossing", synth.crossing)->check(CLI::Range(0.0, 1.0));
    s->add_option("--noise", synth.noise)->check(CLI::NonNegativeNumber);
    s->add_option("--seed", synth.seed);
    s->add_option("--out", synth.out, "Output directory")->required();

    RunArgs run;
    auto* r = app.add_subcommand("run", "Run one method over several seeds");
    r->add_option("--benchmark", run.benchmark, "Benchmark directory")->required();
    r->add_option("--method", run.method)->required()->check(CLI::IsMember(kMethods));
    r->add_option("--seeds", run.seeds)->required();
    r->add_option("--budget-cap", run.budget_cap, "Total epochs per run")->required()->check(CLI::PositiveNumber);
    r->add_option("--out", run.out, "Directory for <method>_seed<seed>.jsonl")->required();
    r->add_option("--jobs", run.jobs, "Seeds run concurrently")->check(CLI::PositiveNumber);
    r->add_option("--n-init", run.n_init)->check(CLI::PositiveNumber);
    r->add_option("--eta", run.eta)->check(CLI::Range(2, 1000));
    r->add_option("--candidates", run.candidates, "Sample this many unseen configs per step")
        ->check(CLI::PositiveNumber);
    r->add_option("--surrogate-lr", run.surrogate_lr, "Adam learning rate of the surrogate fit")
        ->check(CLI::PositiveNumber);

    ReportArgs report;
    auto* p = app.add_subcommand("report", "Compute metrics from traces as tidy CSV");
    p->add_option("--traces", report.traces)->required();
    p->add_option("--benchmark", report.benchmarks, "Benchmark directories the traces were run on")->required();
    p->add_option("--metric", report.metric)->check(CLI::IsMember(kMetrics));
    p->add_option("--x-axis", report.x_axis)->check(CLI::IsMember({"epochs", "seconds"}));
    p->add_option("--at", report.at, "Alignment point for rank (default: shortest run)");
    p->add_option("--top-fraction", report.top_fraction)->check(CLI::Range(0.0, 1.0));
    p->add_option("--out", report.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (s->parsed()) return cmd_synth(synth);
        if (r->parsed()) return cmd_run(run);
        return cmd_report(report);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
