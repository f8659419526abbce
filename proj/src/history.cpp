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
#include <map>

#include "graybox/errors.hpp"
#include "graybox/surrogate.hpp"

namespace graybox {

History::History(int max_budget) : max_budget_(max_budget), best_at_budget_(static_cast<std::size_t>(max_budget) + 1) {
    if (max_budget < 1) throw ArgumentError("History: max_budget must be positive");
}

History History::from_observations(int max_budget, std::vector<Observation> observations) {
    History h(max_budget);
    std::map<std::size_t, std::vector<const Observation*>> by_config;
    for (const auto& o : observations) by_config[o.config_index].push_back(&o);
    for (auto& [config, list] : by_config) {
        std::sort(list.begin(), list.end(),
                  [](const Observation* a, const Observation* b) { return a->input.budget < b->input.budget; });
        std::vector<double> ys;
        for (std::size_t k = 0; k < list.size(); ++k) {
            const Observation& o = *list[k];
            if (o.input.budget != static_cast<int>(k) + 1) {
                throw PreconditionError("config " + std::to_string(config) + ": budgets are not contiguous from 1");
            }
            if (o.input.curve_prefix != ys) {
                throw PreconditionError("config " + std::to_string(config) + ": curve prefix does not match history");
            }
            ys.push_back(o.y);
        }
    }
    for (const auto& o : observations) {
        if (o.input.budget > max_budget) throw PreconditionError("observation budget exceeds max budget");
    }
    for (auto& o : observations) {
        h.observations_.push_back(std::move(o));
    }
    // curves are rebuilt in budget order
    for (const auto& [config, list] : by_config) {
        auto& c = h.curves_[config];
        c.resize(list.size());
    }
    for (const auto& o : h.observations_) {
        h.curves_[o.config_index][o.input.budget - 1] = o.y;
        auto& slot = h.best_at_budget_[o.input.budget];
        slot = slot ? std::max(*slot, o.y) : o.y;
        h.best_overall_ = h.best_overall_ ? std::max(*h.best_overall_, o.y) : o.y;
    }
    return h;
}

void History::add(Observation observation) {
    const int budget = observation.input.budget;
    const std::size_t config = observation.config_index;
    const int expected = highest_budget(config) + 1;
    if (budget != expected) {
        throw PreconditionError("config " + std::to_string(config) + ": expected budget " + std::to_string(expected) +
                                ", got " + std::to_string(budget));
    }
    if (budget > max_budget_) throw PreconditionError("observation budget exceeds max budget");
    const auto prior = curve(config);
    if (!std::equal(prior.begin(), prior.end(), observation.input.curve_prefix.begin(),
                    observation.input.curve_prefix.end())) {
        throw PreconditionError("config " + std::to_string(config) + ": curve prefix does not match history");
    }
    record(observation);
    observations_.push_back(std::move(observation));
}

void History::record(const Observation& observation) {
    curves_[observation.config_index].push_back(observation.y);
    auto& slot = best_at_budget_[observation.input.budget];
    slot = slot ? std::max(*slot, observation.y) : observation.y;
    best_overall_ = best_overall_ ? std::max(*best_overall_, observation.y) : observation.y;
}

int History::highest_budget(std::size_t config) const {
    const auto it = curves_.find(config);
    return it == curves_.end() ? 0 : static_cast<int>(it->second.size());
}

std::span<const double> History::curve(std::size_t config) const {
    const auto it = curves_.find(config);
    if (it == curves_.end()) return {};
    return it->second;
}

std::optional<double> History::best_at_budget(int budget) const {
    if (budget < 1 || budget > max_budget_) return std::nullopt;
    return best_at_budget_[static_cast<std::size_t>(budget)];
}

double History::best_overall() const {
    if (!best_overall_) throw PreconditionError("empty history");
    return *best_overall_;
}

}  // namespace graybox
