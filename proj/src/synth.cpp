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
#include <array>
#include <cmath>
#include <numeric>

#include "graybox/benchmark.hpp"
#include "graybox/errors.hpp"
#include "graybox/rng.hpp"

namespace graybox {

namespace {

constexpr double kCrosserRate = 1.5;
constexpr double kCrosserBoost = 0.08;
constexpr double kMaxTarget = 0.97;

double from_unit(const ParamSpec& p, double u) {
    if (p.log_scale) return std::exp(std::log(p.low) + u * (std::log(p.high) - std::log(p.low)));
    return p.low + u * (p.high - p.low);
}

}  // namespace

Benchmark synth_benchmark(int n_configs, int max_budget, double crossing_fraction, double noise_sd,
                          std::uint64_t seed) {
    if (n_configs < 2) throw ArgumentError("synth_benchmark: n_configs must be >= 2");
    if (max_budget < 2) throw ArgumentError("synth_benchmark: max_budget must be >= 2");
    if (!(crossing_fraction >= 0.0 && crossing_fraction <= 1.0)) {
        throw ArgumentError("synth_benchmark: crossing_fraction must lie in [0, 1]");
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw ArgumentError("synth_benchmark: noise_sd must be >= 0");
    }

    Benchmark b;
    b.name = "synth-n" + std::to_string(n_configs) + "-b" + std::to_string(max_budget) + "-s" + std::to_string(seed);
    b.max_budget = max_budget;
    b.space.params = {
        ParamSpec::numeric("learning_rate", 1e-4, 1e-1, true),
        ParamSpec::numeric("weight_decay", 1e-5, 1e-1, true),
        ParamSpec::numeric("momentum", 0.1, 0.99),
        ParamSpec::numeric("dropout", 0.0, 0.8),
    };
    enum { kLr, kWd, kMom, kDrop };

    const auto n = static_cast<std::size_t>(n_configs);
    Rng config_rng(seed, "synth-configs");
    Rng quality_rng(seed, "synth-quality");
    Rng noise_rng(seed, "synth-noise");
    Rng cost_rng(seed, "synth-cost");

    std::vector<std::array<double, 4>> unit(n);
    for (auto& u : unit) {
        for (double& v : u) v = config_rng.uniform();
    }

    // Crossers are the configs with the strongest regularization, an analog of
    // well-regularized networks that converge slowly but generalize better.
    const auto n_cross = static_cast<std::size_t>(std::llround(crossing_fraction * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return unit[a][kWd] > unit[c][kWd]; });
    std::vector<bool> crosser(n, false);
    for (std::size_t k = 0; k < n_cross; ++k) crosser[order[k]] = true;

    const double B = static_cast<double>(max_budget);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = unit[i];
        RawConfig raw;
        for (std::size_t k = 0; k < 4; ++k) raw.emplace_back(from_unit(b.space.params[k], u[k]));
        b.configs.push_back(std::move(raw));

        const double dlr = u[kLr] - 0.65;
        const double dmom = u[kMom] - 0.7;
        double quality = 0.55 + 0.3 * std::exp(-(dlr * dlr + dmom * dmom) / (2.0 * 0.2 * 0.2)) +
                         0.04 * (0.5 - std::abs(u[kDrop] - 0.3)) + 0.01 * quality_rng.normal();
        quality = std::clamp(quality, 0.5, 0.9);

        double asymptote;
        double rate;
        if (crosser[i]) {
            rate = kCrosserRate;
            const double target = std::min(kMaxTarget, quality + kCrosserBoost);
            asymptote = target / (1.0 - std::exp(-rate));
        } else {
            rate = 3.0 + 5.0 * (quality - 0.55) / 0.3;
            asymptote = quality;
        }

        std::vector<double> curve(static_cast<std::size_t>(max_budget));
        for (int j = 1; j <= max_budget; ++j) {
            double y = asymptote * (1.0 - std::exp(-rate * j / B));
            if (noise_sd > 0.0) y += noise_sd * noise_rng.normal();
            curve[j - 1] = std::clamp(y, 0.0, 1.0);
        }
        b.curves.push_back(std::move(curve));
        b.epoch_seconds.emplace_back(static_cast<std::size_t>(max_budget), cost_rng.uniform(0.5, 2.0));
    }
    b.validate();
    return b;
}

}  // namespace graybox
