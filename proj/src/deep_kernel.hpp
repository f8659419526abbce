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

// Internal forward/backward machinery shared by the surrogate sources.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Cholesky>

#include "graybox/surrogate.hpp"

namespace graybox::detail {

using InputRefs = std::vector<const SurrogateInput*>;

InputRefs refs_of(std::span<const SurrogateInput> inputs);
InputRefs refs_of(const History& history);

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
    InputRefs inputs;
    Eigen::MatrixXd input;       // (d + 1) x n
    Eigen::MatrixXd hidden_pre;  // kHiddenUnits x n
    Eigen::MatrixXd pooled_pre;  // kConvChannels x n, max over positions before activation
    std::vector<std::array<int, kConvChannels>> argmax;
    Eigen::MatrixXd joint;     // (kHiddenUnits + kConvChannels) x n, activated
    Eigen::MatrixXd features;  // kLatentUnits x n
};

ForwardCache forward(const SurrogateState& state, const InputRefs& inputs);

/// Accumulates d(loss)/d(weights) into the leading entries of a pack()-layout
/// gradient given d(loss)/d(features).
void backward(const SurrogateState& state, const ForwardCache& cache, const Eigen::MatrixXd& d_features,
              Eigen::Ref<Eigen::VectorXd> gradient);

/// Squared Euclidean distances between the columns of a and b.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a);

Eigen::MatrixXd rbf(const KernelParams& kernel, const Eigen::MatrixXd& sq_dist);

/// Cholesky of k + (noise + jitter) I with jitter escalating from
/// kInitialJitter by x10 up to kMaxJitter.
struct Factorization {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};
Factorization factorize(const Eigen::MatrixXd& k, double noise);

struct NllTerms {
    double value = 0.0;
    double jitter = 0.0;
};

/// nll on already-standardized targets; gradient (optional) in pack() layout.
NllTerms nll_terms(const SurrogateState& state, const InputRefs& inputs, const Eigen::VectorXd& targets,
                   Eigen::VectorXd* gradient);

Eigen::VectorXd standardized_targets(const History& history, const TargetScaling& scaling);

inline double leaky(double z) { return z > 0.0 ? z : kLeakySlope * z; }
inline double leaky_slope(double z) { return z > 0.0 ? 1.0 : kLeakySlope; }

}  // namespace graybox::detail
