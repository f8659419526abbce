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
#include <cmath>
#include <limits>

#include "deep_kernel.hpp"
#include "graybox/errors.hpp"
#include "graybox/rng.hpp"

namespace graybox {

namespace {

constexpr int kJointUnits = kHiddenUnits + kConvChannels;

void fill_uniform(Eigen::Ref<Eigen::MatrixXd> m, double bound, Rng& rng) {
    // column-major fill so the draw order matches pack()
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform(-bound, bound);
    }
}

double softplus(double z) {
    return z > 30.0 ? z : std::log1p(std::exp(z));
}

}  // namespace

ExtractorWeights ExtractorWeights::random(int config_dim, std::uint64_t seed) {
    if (config_dim < 0) throw ArgumentError("config dimension must be non-negative");
    Rng rng(seed);
    ExtractorWeights w;
    const int in1 = config_dim + 1;
    w.dense1_weight.resize(kHiddenUnits, in1);
    w.dense1_bias.resize(kHiddenUnits);
    w.conv_weight.resize(kConvChannels, kConvWidth);
    w.conv_bias.resize(kConvChannels);
    w.dense2_weight.resize(kLatentUnits, kJointUnits);
    w.dense2_bias.resize(kLatentUnits);

    const double b1 = 1.0 / std::sqrt(static_cast<double>(in1));
    const double bc = 1.0 / std::sqrt(static_cast<double>(kConvWidth));
    const double b2 = 1.0 / std::sqrt(static_cast<double>(kJointUnits));
    fill_uniform(w.dense1_weight, b1, rng);
    fill_uniform(w.dense1_bias, b1, rng);
    fill_uniform(w.conv_weight, bc, rng);
    fill_uniform(w.conv_bias, bc, rng);
    fill_uniform(w.dense2_weight, b2, rng);
    fill_uniform(w.dense2_bias, b2, rng);
    return w;
}

bool ExtractorWeights::all_finite() const {
    return dense1_weight.allFinite() && dense1_bias.allFinite() && conv_weight.allFinite() && conv_bias.allFinite() &&
           dense2_weight.allFinite() && dense2_bias.allFinite();
}

double KernelParams::lengthscale() const { return std::exp(log_lengthscale); }
double KernelParams::outputscale() const { return std::exp(log_outputscale); }
double KernelParams::noise() const { return kNoiseFloor + softplus(raw_noise); }

double KernelParams::raw_noise_for(double noise) {
    const double excess = noise - kNoiseFloor;
    if (!(excess > 0.0)) throw ArgumentError("noise must exceed the noise floor");
    // inverse softplus
    return excess > 30.0 ? excess : std::log(std::expm1(excess));
}

SurrogateState SurrogateState::initial(int config_dim, int max_budget, std::uint64_t seed, bool use_curve_input) {
    if (max_budget < 1) throw ArgumentError("max_budget must be positive");
    SurrogateState s;
    s.weights = ExtractorWeights::random(config_dim, seed);
    s.kernel.log_lengthscale = 0.0;
    s.kernel.log_outputscale = 0.0;
    s.kernel.raw_noise = KernelParams::raw_noise_for(1e-2);
    s.max_budget = max_budget;
    s.use_curve_input = use_curve_input;
    return s;
}

Eigen::Index SurrogateState::parameter_count() const {
    const auto& w = weights;
    return w.dense1_weight.size() + w.dense1_bias.size() + w.conv_weight.size() + w.conv_bias.size() +
           w.dense2_weight.size() + w.dense2_bias.size() + 3;
}

Eigen::VectorXd SurrogateState::pack() const {
    Eigen::VectorXd p(parameter_count());
    Eigen::Index at = 0;
    auto put = [&](const auto& m) {
        p.segment(at, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
        at += m.size();
    };
    put(weights.dense1_weight);
    put(weights.dense1_bias);
    put(weights.conv_weight);
    put(weights.conv_bias);
    put(weights.dense2_weight);
    put(weights.dense2_bias);
    p[at++] = kernel.log_lengthscale;
    p[at++] = kernel.log_outputscale;
    p[at++] = kernel.raw_noise;
    return p;
}

void SurrogateState::unpack(const Eigen::Ref<const Eigen::VectorXd>& p) {
    if (p.size() != parameter_count()) throw ArgumentError("parameter vector has the wrong length");
    Eigen::Index at = 0;
    auto take = [&](auto& m) {
        Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = p.segment(at, m.size());
        at += m.size();
    };
    take(weights.dense1_weight);
    take(weights.dense1_bias);
    take(weights.conv_weight);
    take(weights.conv_bias);
    take(weights.dense2_weight);
    take(weights.dense2_bias);
    kernel.log_lengthscale = p[at++];
    kernel.log_outputscale = p[at++];
    kernel.raw_noise = p[at++];
}

namespace detail {

InputRefs refs_of(std::span<const SurrogateInput> inputs) {
    InputRefs refs;
    refs.reserve(inputs.size());
    for (const auto& in : inputs) refs.push_back(&in);
    return refs;
}

InputRefs refs_of(const History& history) {
    InputRefs refs;
    refs.reserve(history.size());
    for (const auto& o : history.observations()) refs.push_back(&o.input);
    return refs;
}

namespace {

// Same-padded convolution output at position t of a curve (an empty curve is
// treated as the single value 0).
inline double conv_at(const ExtractorWeights& w, int channel, std::span<const double> curve, int t) {
    double acc = w.conv_bias[channel];
    const int len = static_cast<int>(curve.size());
    for (int k = 0; k < kConvWidth; ++k) {
        const int pos = t + k - kConvWidth / 2;
        if (pos >= 0 && pos < len) acc += w.conv_weight(channel, k) * curve[pos];
    }
    return acc;
}

}  // namespace

ForwardCache forward(const SurrogateState& state, const InputRefs& inputs) {
    const auto& w = state.weights;
    const int d = w.config_dim();
    const auto n = static_cast<Eigen::Index>(inputs.size());
    ForwardCache c;
    c.inputs = inputs;
    c.input.resize(d + 1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const SurrogateInput& in = *inputs[i];
        if (in.x.size() != d) throw ArgumentError("encoded config has the wrong dimension");
        c.input.col(i).head(d) = in.x;
        c.input(d, i) = normalize_budget(in.budget, state.max_budget);
    }
    c.hidden_pre.noalias() = w.dense1_weight * c.input;
    c.hidden_pre.colwise() += w.dense1_bias;

    c.pooled_pre.setZero(kConvChannels, n);
    c.argmax.assign(static_cast<std::size_t>(n), {});
    if (state.use_curve_input) {
        static constexpr double kZero[1] = {0.0};
        for (Eigen::Index i = 0; i < n; ++i) {
            std::span<const double> curve = inputs[i]->curve_prefix;
            if (curve.empty()) curve = std::span<const double>(kZero, 1);
            const int len = static_cast<int>(curve.size());
            for (int ch = 0; ch < kConvChannels; ++ch) {
                double best = conv_at(w, ch, curve, 0);
                int best_t = 0;
                for (int t = 1; t < len; ++t) {
                    const double v = conv_at(w, ch, curve, t);
                    if (v > best) {
                        best = v;
                        best_t = t;
                    }
                }
                c.pooled_pre(ch, i) = best;
                c.argmax[i][ch] = best_t;
            }
        }
    }

    c.joint.resize(kJointUnits, n);
    c.joint.topRows(kHiddenUnits) = c.hidden_pre.unaryExpr(&leaky);
    if (state.use_curve_input) {
        c.joint.bottomRows(kConvChannels) = c.pooled_pre.unaryExpr(&leaky);
    } else {
        c.joint.bottomRows(kConvChannels).setZero();
    }
    c.features.noalias() = w.dense2_weight * c.joint;
    c.features.colwise() += w.dense2_bias;
    return c;
}

void backward(const SurrogateState& state, const ForwardCache& c, const Eigen::MatrixXd& d_features,
              Eigen::Ref<Eigen::VectorXd> gradient) {
    const auto& w = state.weights;
    Eigen::Index at = 0;
    auto slot = [&](Eigen::Index rows, Eigen::Index cols) {
        Eigen::Map<Eigen::MatrixXd> m(gradient.data() + at, rows, cols);
        at += rows * cols;
        return m;
    };
    auto g_w1 = slot(w.dense1_weight.rows(), w.dense1_weight.cols());
    auto g_b1 = slot(w.dense1_bias.size(), 1);
    auto g_cw = slot(kConvChannels, kConvWidth);
    auto g_cb = slot(kConvChannels, 1);
    auto g_w2 = slot(w.dense2_weight.rows(), w.dense2_weight.cols());
    auto g_b2 = slot(w.dense2_bias.size(), 1);

    g_w2.noalias() += d_features * c.joint.transpose();
    g_b2 += d_features.rowwise().sum();
    const Eigen::MatrixXd d_joint = w.dense2_weight.transpose() * d_features;

    const Eigen::MatrixXd d_hidden =
        d_joint.topRows(kHiddenUnits).cwiseProduct(c.hidden_pre.unaryExpr(&leaky_slope));
    g_w1.noalias() += d_hidden * c.input.transpose();
    g_b1 += d_hidden.rowwise().sum();

    if (!state.use_curve_input) return;
    static constexpr double kZero[1] = {0.0};
    for (Eigen::Index i = 0; i < c.features.cols(); ++i) {
        std::span<const double> curve = c.inputs[i]->curve_prefix;
        if (curve.empty()) curve = std::span<const double>(kZero, 1);
        const int len = static_cast<int>(curve.size());
        for (int ch = 0; ch < kConvChannels; ++ch) {
            const double d_pool = d_joint(kHiddenUnits + ch, i) * leaky_slope(c.pooled_pre(ch, i));
            if (d_pool == 0.0) continue;
            const int t = c.argmax[i][ch];
            g_cb(ch, 0) += d_pool;
            for (int k = 0; k < kConvWidth; ++k) {
                const int pos = t + k - kConvWidth / 2;
                if (pos >= 0 && pos < len) g_cw(ch, k) += d_pool * curve[pos];
            }
        }
    }
}

}  // namespace detail

Eigen::VectorXd extract_features(const ExtractorWeights& weights, const EncodedConfig& x,
                                 std::span<const double> curve_prefix, double budget_fraction,
                                 bool use_curve_input) {
    if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
        throw ArgumentError("budget fraction must lie in (0, 1]");
    }
    // Takes the budget as a fraction rather than (j, B), so it evaluates the
    // layers directly instead of going through forward().
    const int d = weights.config_dim();
    if (x.size() != d) throw ArgumentError("encoded config has the wrong dimension");

    Eigen::VectorXd input(d + 1);
    input.head(d) = x;
    input[d] = budget_fraction;
    const Eigen::VectorXd hidden = (weights.dense1_weight * input + weights.dense1_bias).unaryExpr(&detail::leaky);

    Eigen::VectorXd joint(kJointUnits);
    joint.head(kHiddenUnits) = hidden;
    joint.tail(kConvChannels).setZero();
    if (use_curve_input) {
        static constexpr double kZero[1] = {0.0};
        std::span<const double> curve = curve_prefix.empty() ? std::span<const double>(kZero, 1) : curve_prefix;
        const int len = static_cast<int>(curve.size());
        for (int ch = 0; ch < kConvChannels; ++ch) {
            double best = -std::numeric_limits<double>::infinity();
            for (int t = 0; t < len; ++t) {
                double acc = weights.conv_bias[ch];
                for (int k = 0; k < kConvWidth; ++k) {
                    const int pos = t + k - kConvWidth / 2;
                    if (pos >= 0 && pos < len) acc += weights.conv_weight(ch, k) * curve[pos];
                }
                best = std::max(best, acc);
            }
            joint[kHiddenUnits + ch] = detail::leaky(best);
        }
    }
    return weights.dense2_weight * joint + weights.dense2_bias;
}

Eigen::MatrixXd extract_features(const SurrogateState& state, std::span<const SurrogateInput> inputs) {
    return detail::forward(state, detail::refs_of(inputs)).features;
}

}  // namespace graybox
