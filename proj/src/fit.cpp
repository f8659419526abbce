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

#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "deep_kernel.hpp"
#include "graybox/errors.hpp"
#include "graybox/rng.hpp"

namespace graybox {

namespace {

class Adam {
public:
    Adam(Eigen::Index size, double learning_rate)
        : lr_(learning_rate), m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)) {}

    void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
        ++t_;
        m_ = kBeta1 * m_ + (1.0 - kBeta1) * grad;
        v_ = kBeta2 * v_ + (1.0 - kBeta2) * grad.cwiseAbs2();
        const double c1 = 1.0 - std::pow(kBeta1, t_);
        const double c2 = 1.0 - std::pow(kBeta2, t_);
        params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + kEps);
    }

private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;
    double lr_;
    int t_ = 0;
    Eigen::VectorXd m_;
    Eigen::VectorXd v_;
};

}  // namespace

FitResult fit(const History& history, const std::optional<SurrogateState>& warm_start, std::uint64_t seed,
              const FitOptions& options) {
    if (history.empty()) throw PreconditionError("fit needs at least one observation");
    const int config_dim = static_cast<int>(history.observations().front().input.x.size());

    FitResult result;
    SurrogateState state;
    if (warm_start) {
        state = *warm_start;
        if (state.weights.config_dim() != config_dim) throw ArgumentError("warm start has a different input dimension");
    } else {
        state = SurrogateState::initial(config_dim, history.max_budget(), derive_seed(seed, "extractor-init"),
                                        options.use_curve_input);
    }
    state.max_budget = history.max_budget();
    const TargetScaling scaling = fit_target_scaling(history);
    state.y_mean = scaling.mean;
    state.y_sd = scaling.sd;

    const auto all = detail::refs_of(history);
    const Eigen::VectorXd targets = detail::standardized_targets(history, scaling);
    const auto n = static_cast<Eigen::Index>(all.size());
    const bool full_batch = n <= options.batch_size;

    Eigen::VectorXd params = state.pack();
    Eigen::VectorXd best_params = params;
    Adam adam(params.size(), options.learning_rate);
    Rng batch_rng(seed, "minibatch");
    Eigen::VectorXd grad;

    auto evaluate = [&](const Eigen::VectorXd& p, Eigen::VectorXd* g) {
        state.unpack(p);
        return detail::nll_terms(state, all, targets, g).value;
    };

    double best;
    try {
        best = evaluate(params, full_batch ? &grad : nullptr);
    } catch (const NumericalError& e) {
        result.state = state;
        result.warning = true;
        result.message = e.what();
        result.initial_nll = result.final_nll = std::numeric_limits<double>::quiet_NaN();
        spdlog::warn("surrogate fit: initial state is not usable: {}", e.what());
        return result;
    }
    result.initial_nll = best;

    int stale = 0;
    const auto steps_per_epoch = full_batch ? Eigen::Index{1} : (n + options.batch_size - 1) / options.batch_size;
    const auto batch = static_cast<std::size_t>(options.batch_size);
    try {
        for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
            if (full_batch) {
                adam.step(params, grad);
            } else {
                for (Eigen::Index s = 0; s < steps_per_epoch; ++s) {
                    const auto pick = batch_rng.sample_without_replacement(all.size(), batch);
                    detail::InputRefs sub;
                    Eigen::VectorXd sub_targets(static_cast<Eigen::Index>(pick.size()));
                    for (std::size_t k = 0; k < pick.size(); ++k) {
                        sub.push_back(all[pick[k]]);
                        sub_targets[static_cast<Eigen::Index>(k)] = targets[static_cast<Eigen::Index>(pick[k])];
                    }
                    state.unpack(params);
                    detail::nll_terms(state, sub, sub_targets, &grad);
                    adam.step(params, grad);
                }
            }
            result.epochs = epoch;
            const double current = evaluate(params, full_batch ? &grad : nullptr);
            if (current < best - options.min_improvement) {
                stale = 0;
            } else {
                ++stale;
            }
            if (current < best) {
                best = current;
                best_params = params;
            }
            if (stale >= options.patience) break;
        }
    } catch (const NumericalError& e) {
        result.warning = true;
        result.message = e.what();
        spdlog::debug("surrogate fit stopped after {} epochs: {}", result.epochs, e.what());
    }

    state.unpack(best_params);
    result.state = state;
    result.final_nll = best;
    spdlog::debug("surrogate fit: n={} epochs={} nll {:.4f} -> {:.4f}", n, result.epochs, result.initial_nll, best);
    return result;
}

}  // namespace graybox
