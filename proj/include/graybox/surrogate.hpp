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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "graybox/encoding.hpp"

namespace graybox {

// Deep-kernel Gaussian process over (config, learning curve so far, budget).
//
// The feature extractor maps [x, j/B] through a 128-unit dense layer and the
// observed curve through a width-3, 4-channel 1-D convolution followed by
// global max pooling; both are concatenated and projected by a 256-unit dense
// layer. A squared-exponential kernel acts on the 256-d features.

inline constexpr int kHiddenUnits = 128;
inline constexpr int kLatentUnits = 256;
inline constexpr int kConvWidth = 3;
inline constexpr int kConvChannels = 4;
inline constexpr double kLeakySlope = 0.01;
inline constexpr double kNoiseFloor = 1e-4;
inline constexpr double kInitialJitter = 1e-6;
inline constexpr double kMaxJitter = 1e-2;

/// A point in surrogate input space: the encoded config, the scores already
/// observed on it at budgets 1..j-1, and the budget j.
struct SurrogateInput {
    EncodedConfig x;
    std::vector<double> curve_prefix;
    int budget = 1;
};

struct Observation {
    std::size_t config_index = 0;
    SurrogateInput input;
    double y = 0.0;
};

/// The optimizer's dataset. Each config's observed budgets always form the
/// contiguous range 1..j_max and every curve prefix repeats the scores already
/// recorded for that config.
class History {
public:
    explicit History(int max_budget);

    /// Validates the observations as a set; any order is accepted.
    static History from_observations(int max_budget, std::vector<Observation> observations);

    /// Appends the next observation of a config. Throws PreconditionError if
    /// the budget is not one above the config's highest or the prefix does not
    /// match its recorded curve.
    void add(Observation observation);

    const std::vector<Observation>& observations() const { return observations_; }
    std::size_t size() const { return observations_.size(); }
    bool empty() const { return observations_.empty(); }
    int max_budget() const { return max_budget_; }

    /// 0 when the config has not been observed.
    int highest_budget(std::size_t config) const;
    /// Scores observed on the config at budgets 1..highest_budget.
    std::span<const double> curve(std::size_t config) const;

    std::optional<double> best_at_budget(int budget) const;
    /// Throws PreconditionError on an empty history.
    double best_overall() const;

private:
    void record(const Observation& observation);

    int max_budget_;
    std::vector<Observation> observations_;
    std::unordered_map<std::size_t, std::vector<double>> curves_;
    std::vector<std::optional<double>> best_at_budget_;
    std::optional<double> best_overall_;
};

struct ExtractorWeights {
    Eigen::MatrixXd dense1_weight;  // kHiddenUnits x (d + 1)
    Eigen::VectorXd dense1_bias;
    Eigen::MatrixXd conv_weight;  // kConvChannels x kConvWidth
    Eigen::VectorXd conv_bias;
    Eigen::MatrixXd dense2_weight;  // kLatentUnits x (kHiddenUnits + kConvChannels)
    Eigen::VectorXd dense2_bias;

    /// Fan-in scaled uniform init, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
    static ExtractorWeights random(int config_dim, std::uint64_t seed);

    int config_dim() const { return static_cast<int>(dense1_weight.cols()) - 1; }
    bool all_finite() const;
};

/// Kernel hyperparameters in unconstrained form. The noise variance is
/// kNoiseFloor + softplus(raw_noise).
// TODO: budget-dependent noise; a single variance is shared by all budgets.
struct KernelParams {
    double log_lengthscale = 0.0;
    double log_outputscale = 0.0;
    double raw_noise = 0.0;

    double lengthscale() const;
    double outputscale() const;
    double noise() const;

    static double raw_noise_for(double noise);
};

struct SurrogateState {
    ExtractorWeights weights;
    KernelParams kernel;
    double y_mean = 0.0;
    double y_sd = 1.0;
    int max_budget = 1;
    /// false replaces the pooled curve features by zeros (ablation).
    bool use_curve_input = true;

    /// lengthscale 1, outputscale 1, noise 1e-2, seeded extractor.
    static SurrogateState initial(int config_dim, int max_budget, std::uint64_t seed, bool use_curve_input = true);

    /// Flat parameter vector: dense1 weight (column-major), dense1 bias, conv
    /// weight, conv bias, dense2 weight, dense2 bias, log lengthscale, log
    /// outputscale, raw noise.
    Eigen::VectorXd pack() const;
    void unpack(const Eigen::Ref<const Eigen::VectorXd>& params);
    Eigen::Index parameter_count() const;
};

struct PosteriorPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Target standardization constants; sd falls back to 1 with fewer than two
/// distinct values.
struct TargetScaling {
    double mean = 0.0;
    double sd = 1.0;
};
TargetScaling fit_target_scaling(const History& history);

/// phi(x, Y, j) as a kLatentUnits vector.
Eigen::VectorXd extract_features(const ExtractorWeights& weights, const EncodedConfig& x,
                                 std::span<const double> curve_prefix, double budget_fraction,
                                 bool use_curve_input = true);

/// Features of many inputs, one column each.
Eigen::MatrixXd extract_features(const SurrogateState& state, std::span<const SurrogateInput> inputs);

/// outputscale * exp(-|phi_a - phi_b|^2 / (2 lengthscale^2)).
Eigen::MatrixXd kernel_matrix(const SurrogateState& state, std::span<const SurrogateInput> inputs);

/// y^T Kn^-1 y + log|Kn| with Kn = K + noise I (+ jitter) on standardized
/// targets. Throws NumericalError when Cholesky fails at the largest jitter.
double nll(const SurrogateState& state, const History& history);

struct NllGradient {
    double value = 0.0;
    /// Same layout as SurrogateState::pack().
    Eigen::VectorXd gradient;
    double jitter = 0.0;
};
NllGradient nll_gradients(const SurrogateState& state, const History& history);

struct FitOptions {
    /// At 0.1 the first Adam steps move every extractor weight by more than
    /// its init scale and the fit never improves on the initialization.
    double learning_rate = 0.01;
    int batch_size = 64;
    int patience = 10;
    int max_epochs = 1000;
    /// An epoch counts as improving when the full-batch nll drops below the
    /// best so far by more than this.
    double min_improvement = 1e-3;
    /// Only used for a cold start; a warm start keeps its own flag.
    bool use_curve_input = true;
};

struct FitResult {
    SurrogateState state;
    int epochs = 0;
    double initial_nll = 0.0;
    double final_nll = 0.0;
    /// Set when training hit a numerical failure; state is the last finite best.
    bool warning = false;
    std::string message;
};

/// Maximizes the marginal likelihood with Adam. Full batch when the history
/// holds at most batch_size observations, otherwise each step draws a random
/// batch_size subset and patience is judged on the full-batch nll once per
/// epoch. Returns the best state seen.
FitResult fit(const History& history, const std::optional<SurrogateState>& warm_start, std::uint64_t seed,
              const FitOptions& options = {});

/// Cholesky-factored posterior over a fixed history, reusable across queries.
class GpPosterior {
public:
    GpPosterior(const SurrogateState& state, const History& history);

    std::vector<PosteriorPrediction> predict(std::span<const SurrogateInput> queries) const;
    double jitter() const { return jitter_; }

private:
    SurrogateState state_;
    Eigen::MatrixXd train_features_;
    Eigen::MatrixXd cholesky_lower_;
    Eigen::VectorXd alpha_;
    double jitter_ = 0.0;
};

std::vector<PosteriorPrediction> predict(const SurrogateState& state, const History& history,
                                         std::span<const SurrogateInput> queries);

/// predict() with the curve branch switched off regardless of the state's flag.
std::vector<PosteriorPrediction> predict_without_curve(const SurrogateState& state, const History& history,
                                                       std::span<const SurrogateInput> queries);

}  // namespace graybox
