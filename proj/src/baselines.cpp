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

#include "graybox/baselines.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "graybox/errors.hpp"
#include "graybox/rng.hpp"

namespace graybox {

namespace {

long ipow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

/// Hands out configs in a seeded random order, each at most once.
class ConfigSampler {
public:
    ConfigSampler(std::size_t n_configs, std::uint64_t seed) : order_(n_configs) {
        for (std::size_t i = 0; i < n_configs; ++i) order_[i] = i;
        Rng rng(seed, "baseline-sampling");
        rng.shuffle(order_);
    }

    std::optional<std::size_t> next() {
        if (next_ >= order_.size()) return std::nullopt;
        return order_[next_++];
    }

    std::vector<std::size_t> take(std::size_t k) {
        std::vector<std::size_t> out;
        while (out.size() < k) {
            const auto c = next();
            if (!c) break;
            out.push_back(*c);
        }
        return out;
    }

private:
    std::vector<std::size_t> order_;
    std::size_t next_ = 0;
};

/// Best first; ties broken by lower config index.
void rank_by_score(std::vector<std::size_t>& configs, const Benchmark& benchmark, int budget) {
    std::sort(configs.begin(), configs.end(), [&](std::size_t a, std::size_t b) {
        const double sa = benchmark.score(a, budget);
        const double sb = benchmark.score(b, budget);
        return sa != sb ? sa > sb : a < b;
    });
}

/// Runs one bracket; false once the cap or the config pool is spent.
bool run_bracket(const BracketSchedule& bracket, const Benchmark& benchmark, TraceRecorder& recorder,
                 ConfigSampler& sampler) {
    std::vector<std::size_t> survivors = sampler.take(static_cast<std::size_t>(bracket.rungs.front().n_configs));
    if (survivors.empty()) return false;
    for (std::size_t k = 0; k < bracket.rungs.size(); ++k) {
        const Rung& rung = bracket.rungs[k];
        if (k > 0) {
            const int previous = bracket.rungs[k - 1].budget;
            rank_by_score(survivors, benchmark, previous);
            survivors.resize(std::min(survivors.size(), static_cast<std::size_t>(rung.n_configs)));
        }
        for (std::size_t c : survivors) {
            recorder.advance(c, rung.budget);
            if (recorder.exhausted()) return false;
        }
    }
    return true;
}

void check_args(const Benchmark& benchmark, long budget_cap, int eta) {
    if (benchmark.size() == 0) throw ArgumentError("empty benchmark");
    if (budget_cap < 1) throw ArgumentError("budget cap must be positive");
    if (eta < 2) throw ArgumentError("eta must be >= 2");
}

}  // namespace

std::vector<BracketSchedule> hyperband_schedule(int max_budget, int eta) {
    if (max_budget < 1) throw ArgumentError("hyperband_schedule: R must be >= 1");
    if (eta < 2) throw ArgumentError("hyperband_schedule: eta must be >= 2");
    int s_max = 0;
    while (ipow(eta, s_max + 1) <= max_budget) ++s_max;

    std::vector<BracketSchedule> brackets;
    for (int s = s_max; s >= 0; --s) {
        BracketSchedule b;
        b.bracket_index = s;
        b.eta = eta;
        const long eta_s = ipow(eta, s);
        const long n = ((s_max + 1) * eta_s + s) / (s + 1);  // ceil
        for (int k = 0; k <= s; ++k) {
            const long eta_k = ipow(eta, k);
            Rung r;
            r.n_configs = static_cast<int>(n / eta_k);
            r.budget = static_cast<int>(std::max<long>(1, max_budget * eta_k / eta_s));
            b.rungs.push_back(r);
        }
        brackets.push_back(std::move(b));
    }
    return brackets;
}

RunTrace run_random_search(const Benchmark& benchmark, long budget_cap, std::uint64_t seed) {
    check_args(benchmark, budget_cap, 2);
    TraceRecorder recorder(benchmark, "rs", seed, budget_cap);
    ConfigSampler sampler(benchmark.size(), seed);
    while (!recorder.exhausted()) {
        const auto c = sampler.next();
        if (!c) break;
        recorder.advance(*c, benchmark.max_budget);
    }
    return recorder.take();
}

RunTrace run_successive_halving(const Benchmark& benchmark, long budget_cap, std::uint64_t seed, int eta) {
    check_args(benchmark, budget_cap, eta);
    const auto bracket = hyperband_schedule(benchmark.max_budget, eta).front();
    TraceRecorder recorder(benchmark, "sh", seed, budget_cap);
    ConfigSampler sampler(benchmark.size(), seed);
    while (run_bracket(bracket, benchmark, recorder, sampler)) {
    }
    return recorder.take();
}

RunTrace run_hyperband(const Benchmark& benchmark, long budget_cap, std::uint64_t seed, int eta) {
    check_args(benchmark, budget_cap, eta);
    const auto brackets = hyperband_schedule(benchmark.max_budget, eta);
    TraceRecorder recorder(benchmark, "hyperband", seed, budget_cap);
    ConfigSampler sampler(benchmark.size(), seed);
    for (std::size_t i = 0;; i = (i + 1) % brackets.size()) {
        if (!run_bracket(brackets[i], benchmark, recorder, sampler)) break;
    }
    return recorder.take();
}

RunTrace run_asha(const Benchmark& benchmark, long budget_cap, std::uint64_t seed, int eta) {
    check_args(benchmark, budget_cap, eta);
    const auto bracket = hyperband_schedule(benchmark.max_budget, eta).front();
    std::vector<int> budgets;
    for (const auto& r : bracket.rungs) budgets.push_back(r.budget);
    const std::size_t top_rung = budgets.size() - 1;

    TraceRecorder recorder(benchmark, "asha", seed, budget_cap);
    ConfigSampler sampler(benchmark.size(), seed);
    std::vector<std::vector<std::size_t>> rungs(budgets.size());
    std::vector<std::set<std::size_t>> promoted(budgets.size());

    while (!recorder.exhausted()) {
        std::optional<std::size_t> config;
        std::size_t target = 0;
        // deepest rung first
        for (std::size_t k = top_rung; k-- > 0 && !config;) {
            std::vector<std::size_t> members = rungs[k];
            rank_by_score(members, benchmark, budgets[k]);
            const std::size_t eligible = members.size() / static_cast<std::size_t>(eta);
            for (std::size_t m = 0; m < eligible; ++m) {
                if (!promoted[k].contains(members[m])) {
                    config = members[m];
                    target = k + 1;
                    promoted[k].insert(members[m]);
                    break;
                }
            }
        }
        if (!config) {
            config = sampler.next();
            target = 0;
            if (!config) break;
        }
        recorder.advance(*config, budgets[target]);
        if (recorder.ledger().highest(*config) < budgets[target]) break;
        rungs[target].push_back(*config);
    }
    return recorder.take();
}

}  // namespace graybox
