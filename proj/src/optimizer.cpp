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

#include "graybox/optimizer.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "graybox/acquisition.hpp"
#include "graybox/errors.hpp"
#include "graybox/rng.hpp"

namespace graybox {

int next_budget(const History& history, std::size_t config) {
    const int highest = history.highest_budget(config);
    if (highest >= history.max_budget()) {
        throw PreconditionError("config " + std::to_string(config) + " already reached the maximum budget");
    }
    return highest + 1;
}

SurrogateInput candidate_input(const History& history, std::size_t config, const EncodedConfig& x) {
    SurrogateInput in;
    in.x = x;
    const auto curve = history.curve(config);
    in.curve_prefix.assign(curve.begin(), curve.end());
    in.budget = next_budget(history, config);
    return in;
}

Selection select_next(const PosteriorFn& posterior, const History& history, std::span<const std::size_t> candidates,
                      std::span<const EncodedConfig> encoded) {
    if (candidates.empty()) throw PreconditionError("select_next: no candidates");
    std::vector<SurrogateInput> inputs;
    inputs.reserve(candidates.size());
    for (std::size_t c : candidates) {
        if (c >= encoded.size()) throw ArgumentError("select_next: candidate outside the benchmark");
        inputs.push_back(candidate_input(history, c, encoded[c]));
    }
    const auto post = posterior(inputs);
    if (post.size() != inputs.size()) throw ArgumentError("select_next: posterior returned the wrong count");

    Selection best;
    bool have = false;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const int budget = inputs[k].budget;
        const double ei = mf_ei(post[k], history, budget);
        const bool better = !have || ei > best.acquisition ||
                            (ei == best.acquisition &&
                             (budget < best.budget || (budget == best.budget && candidates[k] < best.config_index)));
        if (better) {
            best = {candidates[k], budget, ei};
            have = true;
        }
    }
    return best;
}

Selection select_next(const SurrogateState& state, const History& history, std::span<const std::size_t> candidates,
                      std::span<const EncodedConfig> encoded) {
    const GpPosterior gp(state, history);
    return select_next([&gp](std::span<const SurrogateInput> q) { return gp.predict(q); }, history, candidates,
                       encoded);
}

namespace {

std::vector<std::size_t> gather_candidates(const History& history, std::size_t n_configs,
                                           const std::optional<int>& sampled, Rng& rng) {
    std::vector<std::size_t> out;
    if (!sampled) {
        for (std::size_t c = 0; c < n_configs; ++c) {
            if (history.highest_budget(c) < history.max_budget()) out.push_back(c);
        }
        return out;
    }
    std::vector<std::size_t> unseen;
    for (std::size_t c = 0; c < n_configs; ++c) {
        const int h = history.highest_budget(c);
        if (h == 0) {
            unseen.push_back(c);
        } else if (h < history.max_budget()) {
            out.push_back(c);
        }
    }
    const auto pick = rng.sample_without_replacement(unseen.size(), static_cast<std::size_t>(std::max(*sampled, 0)));
    for (std::size_t k : pick) out.push_back(unseen[k]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

RunTrace run_dyhpo(const Benchmark& benchmark, const DyhpoOptions& options) {
    if (options.n_init_random < 1) throw ArgumentError("n_init_random must be >= 1");
    if (options.budget_cap_epochs < 1) throw ArgumentError("budget cap must be >= 1");
    if (options.budget_cap_epochs < options.n_init_random) throw ArgumentError("budget cap below n_init_random");
    if (options.sampled_candidates && *options.sampled_candidates < 1) {
        throw ArgumentError("sampled candidate count must be >= 1");
    }

    const Encoder encoder(benchmark.space);
    const auto encoded = encode_all(encoder, benchmark);
    TraceRecorder recorder(benchmark, options.use_curve_input ? "dyhpo" : "dyhpo-nocurve", options.seed,
                           options.budget_cap_epochs);
    History history(benchmark.max_budget);

    auto observe = [&](std::size_t config, int budget, bool fallback) {
        SurrogateInput in = candidate_input(history, config, encoded[config]);
        if (in.budget != budget) throw PreconditionError("observation skips a budget");
        const double y = recorder.query(config, budget, fallback);
        history.add(Observation{config, std::move(in), y});
    };

    Rng init_rng(options.seed, "init-design");
    const auto n_init = std::min<std::size_t>(static_cast<std::size_t>(options.n_init_random), benchmark.size());
    for (std::size_t c : init_rng.sample_without_replacement(benchmark.size(), n_init)) {
        if (recorder.exhausted()) break;
        observe(c, 1, false);
    }

    Rng candidate_rng(options.seed, "candidate-sampling");
    Rng fallback_rng(options.seed, "fallback");
    std::optional<SurrogateState> state;
    FitOptions fit_options = options.fit;
    fit_options.use_curve_input = options.use_curve_input;
    std::uint64_t round = 0;

    while (!recorder.exhausted()) {
        const auto candidates = gather_candidates(history, benchmark.size(), options.sampled_candidates, candidate_rng);
        if (candidates.empty()) break;
        Selection choice;
        bool fallback = false;
        try {
            FitResult fitted = fit(history, state, derive_seed(options.seed, "surrogate-fit", round), fit_options);
            if (fitted.warning) spdlog::debug("dyhpo seed {} round {}: {}", options.seed, round, fitted.message);
            if (!fitted.state.weights.all_finite()) throw NumericalError("surrogate weights are not finite");
            state = std::move(fitted.state);
            choice = select_next(*state, history, candidates, encoded);
        } catch (const NumericalError& e) {
            spdlog::warn("dyhpo seed {} round {}: surrogate failed ({}), picking a random candidate", options.seed,
                         round, e.what());
            const std::size_t c = candidates[fallback_rng.below(candidates.size())];
            choice = {c, next_budget(history, c), 0.0};
            fallback = true;
        }
        ++round;
        observe(choice.config_index, choice.budget, fallback);
    }
    return recorder.take();
}

}  // namespace graybox
