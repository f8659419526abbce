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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "graybox/benchmark.hpp"
#include "graybox/encoding.hpp"
#include "graybox/run_trace.hpp"
#include "graybox/surrogate.hpp"

namespace graybox {

struct DyhpoOptions {
    /// Configs evaluated at budget 1 before the surrogate takes over.
    int n_init_random = 10;
    /// Unset: every benchmark config is a candidate. Set to N: each step scores
    /// N freshly sampled unseen configs plus every partially trained one.
    std::optional<int> sampled_candidates;
    long budget_cap_epochs = 0;
    /// false runs the ablation without the learning-curve branch.
    bool use_curve_input = true;
    std::uint64_t seed = 0;
    FitOptions fit;
};

/// The budget a config would be evaluated at next: one above its highest
/// observed budget, or 1 if unseen. Throws PreconditionError if the config
/// already reached the maximum budget.
int next_budget(const History& history, std::size_t config);

struct Selection {
    std::size_t config_index = 0;
    int budget = 1;
    double acquisition = 0.0;
};

/// Produces posteriors for a batch of surrogate inputs.
using PosteriorFn = std::function<std::vector<PosteriorPrediction>(std::span<const SurrogateInput>)>;

/// Scores each candidate at its next budget with multi-fidelity EI and returns
/// the argmax. Ties go to the lower budget, then the lower config index.
Selection select_next(const PosteriorFn& posterior, const History& history, std::span<const std::size_t> candidates,
                      std::span<const EncodedConfig> encoded);

Selection select_next(const SurrogateState& state, const History& history, std::span<const std::size_t> candidates,
                      std::span<const EncodedConfig> encoded);

/// The surrogate input for a config at its next budget, with its observed curve.
SurrogateInput candidate_input(const History& history, std::size_t config, const EncodedConfig& x);

/// Dynamic one-epoch-at-a-time multi-fidelity Bayesian optimization.
RunTrace run_dyhpo(const Benchmark& benchmark, const DyhpoOptions& options);

}  // namespace graybox
