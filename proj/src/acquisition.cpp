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

#include "graybox/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include "graybox/errors.hpp"

namespace graybox {

namespace {

constexpr double kMinSd = 1e-12;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

}  // namespace

double expected_improvement(double mean, double variance, double incumbent) {
    if (!(variance >= 0.0)) throw ArgumentError("expected_improvement: negative variance");
    const double sd = std::sqrt(variance);
    const double diff = mean - incumbent;
    if (sd < kMinSd) return std::max(diff, 0.0);
    const double z = diff / sd;
    return std::max(0.0, diff * normal_cdf(z) + sd * normal_pdf(z));
}

Incumbent incumbent_for_budget(const History& history, int budget) {
    if (history.empty()) throw PreconditionError("incumbent_for_budget: empty history");
    if (const auto at = history.best_at_budget(budget)) return {*at, IncumbentSource::kAtBudget};
    return {history.best_overall(), IncumbentSource::kGlobalFallback};
}

double mf_ei(const PosteriorPrediction& posterior, const History& history, int budget) {
    if (budget < 1 || budget > history.max_budget()) throw ArgumentError("mf_ei: budget out of range");
    return expected_improvement(posterior.mean, posterior.variance, incumbent_for_budget(history, budget).value);
}

double mf_ei(const SurrogateState& state, const History& history, const SurrogateInput& candidate) {
    const auto posterior = predict(state, history, std::span<const SurrogateInput>(&candidate, 1));
    return mf_ei(posterior.front(), history, candidate.budget);
}

}  // namespace graybox
