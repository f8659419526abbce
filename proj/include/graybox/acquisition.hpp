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

#include "graybox/surrogate.hpp"

namespace graybox {

/// Closed-form E[max(f - incumbent, 0)] for f ~ N(mean, variance). Below a
/// standard deviation of 1e-12 it returns the hinge max(mean - incumbent, 0).
double expected_improvement(double mean, double variance, double incumbent);

enum class IncumbentSource { kAtBudget, kGlobalFallback };

struct Incumbent {
    double value = 0.0;
    IncumbentSource source = IncumbentSource::kAtBudget;
};

/// Best score observed at exactly this budget, or the best at any budget when
/// nothing has been observed there yet. Throws PreconditionError on an empty
/// history.
Incumbent incumbent_for_budget(const History& history, int budget);

/// Multi-fidelity EI of one candidate at its budget.
double mf_ei(const SurrogateState& state, const History& history, const SurrogateInput& candidate);

/// Same, from an already computed posterior.
double mf_ei(const PosteriorPrediction& posterior, const History& history, int budget);

}  // namespace graybox
