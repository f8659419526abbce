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

#include "graybox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "graybox/errors.hpp"

namespace graybox {

namespace {

void check_consistent(const RunTrace& trace, const Benchmark& benchmark) {
    if (trace.benchmark_name != benchmark.name) {
        throw ArgumentError("trace was recorded on '" + trace.benchmark_name + "', not '" + benchmark.name + "'");
    }
    for (const auto& s : trace.steps) {
        if (s.config_index >= benchmark.size() || s.budget < 1 || s.budget > benchmark.max_budget) {
            throw ArgumentError("trace step " + std::to_string(s.step_index) + " does not fit the benchmark");
        }
    }
}

/// Configs of `pool` sorted best first by score at budget (ties: lower index).
std::vector<std::size_t> ranked(std::vector<std::size_t> pool, const Benchmark& benchmark, int budget) {
    std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
        const double sa = benchmark.score(a, budget);
        const double sb = benchmark.score(b, budget);
        return sa != sb ? sa > sb : a < b;
    });
    return pool;
}

std::size_t top_third(std::size_t n) { return (n + 2) / 3; }

std::vector<BudgetValue> promotion_from_reach(const std::vector<int>& reach, const Benchmark& benchmark) {
    const int B = benchmark.max_budget;
    // good[b] = configs in the top third at budget b among those run to >= b
    std::vector<std::set<std::size_t>> good(static_cast<std::size_t>(B) + 1);
    std::vector<std::size_t> population_size(static_cast<std::size_t>(B) + 1, 0);
    for (int b = 1; b <= B; ++b) {
        std::vector<std::size_t> pool;
        for (std::size_t c = 0; c < reach.size(); ++c) {
            if (reach[c] >= b) pool.push_back(c);
        }
        population_size[b] = pool.size();
        const auto order = ranked(std::move(pool), benchmark, b);
        const std::size_t cut = top_third(order.size());
        good[b].insert(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
    }
    std::vector<BudgetValue> out;
    for (int b = 2; b <= B; ++b) {
        if (population_size[b] < 3) continue;
        std::size_t promoted = 0;
        for (std::size_t c : good[b]) {
            for (int earlier = 1; earlier < b; ++earlier) {
                if (!good[earlier].contains(c)) {
                    ++promoted;
                    break;
                }
            }
        }
        out.push_back({b, static_cast<double>(promoted) / static_cast<double>(good[b].size())});
    }
    return out;
}

}  // namespace

std::optional<double> RegretCurve::at(double x) const {
    std::optional<double> v;
    for (const auto& p : points) {
        if (p.x > x) break;
        v = p.regret;
    }
    return v;
}

RegretCurve regret_curve(const RunTrace& trace, const Benchmark& benchmark, XAxis axis) {
    check_consistent(trace, benchmark);
    const double target = best_score(benchmark);
    RegretCurve curve;
    std::optional<double> best_seen;
    for (const auto& s : trace.steps) {
        best_seen = best_seen ? std::max(*best_seen, s.score) : s.score;
        const double x = axis == XAxis::kEpochs ? static_cast<double>(s.cumulative_epochs) : s.cumulative_seconds;
        curve.points.push_back({x, std::max(0.0, target - *best_seen)});
    }
    return curve;
}

std::vector<double> mean_regret(std::span<const RegretCurve> curves, std::span<const double> grid) {
    if (curves.empty()) throw ArgumentError("mean_regret: no curves");
    std::vector<double> out;
    for (double x : grid) {
        double sum = 0.0;
        for (const auto& c : curves) {
            const auto v = c.at(x);
            if (!v) throw ArgumentError("mean_regret: a curve has no value at x = " + std::to_string(x));
            sum += *v;
        }
        out.push_back(sum / static_cast<double>(curves.size()));
    }
    return out;
}

std::map<std::string, std::map<std::string, double>> dataset_ranks(const CurveTable& curves, double at) {
    std::set<std::string> datasets;
    for (const auto& [method, per_dataset] : curves) {
        for (const auto& [dataset, _] : per_dataset) datasets.insert(dataset);
    }
    std::vector<std::string> missing;
    for (const auto& [method, per_dataset] : curves) {
        for (const auto& d : datasets) {
            const auto it = per_dataset.find(d);
            if (it == per_dataset.end() || !it->second.at(at)) missing.push_back(method + "/" + d);
        }
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "average_rank: no value at x = " << at << " for";
        for (const auto& m : missing) msg << ' ' << m;
        throw ArgumentError(msg.str());
    }

    std::map<std::string, std::map<std::string, double>> ranks;
    for (const auto& d : datasets) {
        std::vector<std::pair<double, std::string>> scored;
        for (const auto& [method, per_dataset] : curves) scored.emplace_back(*per_dataset.at(d).at(at), method);
        std::sort(scored.begin(), scored.end());
        for (std::size_t i = 0; i < scored.size();) {
            std::size_t j = i;
            while (j < scored.size() && scored[j].first == scored[i].first) ++j;
            // positions i..j-1 (0-based) share the mean of ranks i+1..j
            const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
            for (std::size_t k = i; k < j; ++k) ranks[scored[k].second][d] = mean_rank;
            i = j;
        }
    }
    return ranks;
}

std::map<std::string, double> average_rank(const CurveTable& curves, double at) {
    std::map<std::string, double> out;
    for (const auto& [method, per_dataset] : dataset_ranks(curves, at)) {
        double sum = 0.0;
        for (const auto& [_, r] : per_dataset) sum += r;
        out[method] = sum / static_cast<double>(per_dataset.size());
    }
    return out;
}

std::vector<BudgetValue> precision_at_budget(const RunTrace& trace, const Benchmark& benchmark, double top_fraction) {
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw ArgumentError("top_fraction must lie in (0, 1]");
    check_consistent(trace, benchmark);
    const std::size_t n = benchmark.size();
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto order = ranked(std::move(all), benchmark, benchmark.max_budget);
    const auto top_size = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(n) - 1e-9)));
    const std::set<std::size_t> top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(top_size, n)));

    const auto reach = trace.max_budgets(n);
    std::vector<BudgetValue> out;
    for (int i = 1; i <= benchmark.max_budget; ++i) {
        std::size_t trained = 0;
        std::size_t hits = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (reach[c] < i) continue;
            ++trained;
            if (top.contains(c)) ++hits;
        }
        if (trained == 0) continue;
        out.push_back({i, static_cast<double>(hits) / static_cast<double>(trained)});
    }
    return out;
}

std::vector<BudgetValue> avg_selected_regret(const RunTrace& trace, const Benchmark& benchmark) {
    check_consistent(trace, benchmark);
    const double target = best_score(benchmark);
    const auto reach = trace.max_budgets(benchmark.size());
    std::vector<BudgetValue> out;
    for (int i = 1; i <= benchmark.max_budget; ++i) {
        std::size_t trained = 0;
        double sum = 0.0;
        for (std::size_t c = 0; c < reach.size(); ++c) {
            if (reach[c] < i) continue;
            ++trained;
            sum += target - benchmark.final_score(c);
        }
        if (trained == 0) continue;
        out.push_back({i, sum / static_cast<double>(trained)});
    }
    return out;
}

std::vector<BudgetValue> promotion_fraction(const RunTrace& trace, const Benchmark& benchmark) {
    check_consistent(trace, benchmark);
    return promotion_from_reach(trace.max_budgets(benchmark.size()), benchmark);
}

std::vector<BudgetValue> promotion_fraction_baseline(const Benchmark& benchmark) {
    return promotion_from_reach(std::vector<int>(benchmark.size(), benchmark.max_budget), benchmark);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_csv(std::span<const CsvRow> rows, std::ostream& out) {
    out << "method,dataset,seed,x,metric,value\n";
    std::ostringstream num;
    num.precision(17);
    for (const auto& r : rows) {
        out << csv_field(r.method) << ',' << csv_field(r.dataset) << ',';
        if (r.seed) out << *r.seed;
        num.str("");
        num << r.x << ',' << csv_field(r.metric) << ',' << r.value;
        out << ',' << num.str() << '\n';
    }
}

}  // namespace graybox
