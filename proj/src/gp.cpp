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
#include <set>

#include <Eigen/Cholesky>

#include "deep_kernel.hpp"
#include "graybox/errors.hpp"

namespace graybox {

namespace detail {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd d = -2.0 * (a.transpose() * b);
    d.colwise() += a.colwise().squaredNorm().transpose();
    d.rowwise() += b.colwise().squaredNorm();
    return d.cwiseMax(0.0);
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a) {
    Eigen::MatrixXd d = squared_distances(a, a);
    d.diagonal().setZero();
    // symmetrize away round-off from the Gram route
    d = 0.5 * (d + d.transpose()).eval();
    return d;
}

Eigen::MatrixXd rbf(const KernelParams& kernel, const Eigen::MatrixXd& sq_dist) {
    const double ls = kernel.lengthscale();
    const double scale = -0.5 / (ls * ls);
    const double out = kernel.outputscale();
    return (sq_dist.array() * scale).exp() * out;
}

Factorization factorize(const Eigen::MatrixXd& k, double noise) {
    Factorization f;
    Eigen::MatrixXd kn = k;
    for (double jitter = kInitialJitter; jitter <= kMaxJitter * (1.0 + 1e-9); jitter *= 10.0) {
        kn.diagonal() = k.diagonal().array() + (noise + jitter);
        f.llt.compute(kn);
        if (f.llt.info() == Eigen::Success && f.llt.matrixLLT().diagonal().allFinite()) {
            f.jitter = jitter;
            return f;
        }
    }
    throw NumericalError("kernel matrix is not positive definite even with jitter " + std::to_string(kMaxJitter));
}

NllTerms nll_terms(const SurrogateState& state, const InputRefs& inputs, const Eigen::VectorXd& targets,
                   Eigen::VectorXd* gradient) {
    if (inputs.empty()) throw PreconditionError("nll needs at least one observation");
    const ForwardCache cache = forward(state, inputs);
    if (!cache.features.allFinite()) throw NumericalError("non-finite features");
    const Eigen::MatrixXd sq = squared_distances(cache.features);
    const Eigen::MatrixXd k = rbf(state.kernel, sq);
    const double noise = state.kernel.noise();
    const Factorization f = factorize(k, noise);

    const Eigen::VectorXd alpha = f.llt.solve(targets);
    const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
    NllTerms out;
    out.value = targets.dot(alpha) + log_det;
    out.jitter = f.jitter;
    if (!std::isfinite(out.value)) throw NumericalError("non-finite nll");
    if (gradient == nullptr) return out;

    const auto n = static_cast<Eigen::Index>(inputs.size());
    gradient->setZero(state.parameter_count());
    // dL/dKn = Kn^-1 - alpha alpha^T
    Eigen::MatrixXd g = f.llt.solve(Eigen::MatrixXd::Identity(n, n));
    g.noalias() -= alpha * alpha.transpose();

    const Eigen::MatrixXd m = g.cwiseProduct(k);
    const double ls = state.kernel.lengthscale();
    const double inv_ls2 = 1.0 / (ls * ls);
    const Eigen::Index p = state.parameter_count();
    (*gradient)[p - 3] = m.cwiseProduct(sq).sum() * inv_ls2;
    (*gradient)[p - 2] = m.sum();
    const double sigmoid = 1.0 / (1.0 + std::exp(-state.kernel.raw_noise));
    (*gradient)[p - 1] = g.trace() * sigmoid;

    // dL/dphi_a = -(2 / ls^2) sum_b M_ab (phi_a - phi_b)
    const Eigen::VectorXd row_sums = m.rowwise().sum();
    Eigen::MatrixXd d_features = cache.features * m;
    d_features -= cache.features * row_sums.asDiagonal();
    d_features *= 2.0 * inv_ls2;
    backward(state, cache, d_features, *gradient);
    if (!gradient->allFinite()) throw NumericalError("non-finite gradient");
    return out;
}

Eigen::VectorXd standardized_targets(const History& history, const TargetScaling& scaling) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(history.size()));
    for (std::size_t i = 0; i < history.size(); ++i) {
        y[static_cast<Eigen::Index>(i)] = (history.observations()[i].y - scaling.mean) / scaling.sd;
    }
    return y;
}

}  // namespace detail

TargetScaling fit_target_scaling(const History& history) {
    TargetScaling s;
    if (history.empty()) return s;
    double sum = 0.0;
    std::set<double> distinct;
    for (const auto& o : history.observations()) {
        sum += o.y;
        distinct.insert(o.y);
    }
    const double n = static_cast<double>(history.size());
    s.mean = sum / n;
    if (distinct.size() < 2) {
        s.sd = 1.0;
        return s;
    }
    double ss = 0.0;
    for (const auto& o : history.observations()) ss += (o.y - s.mean) * (o.y - s.mean);
    s.sd = std::sqrt(ss / n);
    if (!(s.sd > 0.0)) s.sd = 1.0;
    return s;
}

Eigen::MatrixXd kernel_matrix(const SurrogateState& state, std::span<const SurrogateInput> inputs) {
    if (inputs.empty()) throw PreconditionError("kernel_matrix needs at least one input");
    const Eigen::MatrixXd phi = extract_features(state, inputs);
    return detail::rbf(state.kernel, detail::squared_distances(phi));
}

double nll(const SurrogateState& state, const History& history) {
    if (history.empty()) throw PreconditionError("nll needs at least one observation");
    const auto targets = detail::standardized_targets(history, fit_target_scaling(history));
    return detail::nll_terms(state, detail::refs_of(history), targets, nullptr).value;
}

NllGradient nll_gradients(const SurrogateState& state, const History& history) {
    if (history.empty()) throw PreconditionError("nll needs at least one observation");
    const auto targets = detail::standardized_targets(history, fit_target_scaling(history));
    NllGradient out;
    const auto terms = detail::nll_terms(state, detail::refs_of(history), targets, &out.gradient);
    out.value = terms.value;
    out.jitter = terms.jitter;
    return out;
}

GpPosterior::GpPosterior(const SurrogateState& state, const History& history) : state_(state) {
    if (history.empty()) throw PreconditionError("predict needs at least one observation");
    if (history.max_budget() != state.max_budget) throw ArgumentError("history and surrogate disagree on max budget");
    train_features_ = detail::forward(state_, detail::refs_of(history)).features;
    if (!train_features_.allFinite()) throw NumericalError("non-finite features");
    const Eigen::MatrixXd k = detail::rbf(state_.kernel, detail::squared_distances(train_features_));
    const auto f = detail::factorize(k, state_.kernel.noise());
    jitter_ = f.jitter;
    cholesky_lower_ = f.llt.matrixL();
    const TargetScaling scaling{state_.y_mean, state_.y_sd};
    alpha_ = f.llt.solve(detail::standardized_targets(history, scaling));
}

std::vector<PosteriorPrediction> GpPosterior::predict(std::span<const SurrogateInput> queries) const {
    std::vector<PosteriorPrediction> out(queries.size());
    if (queries.empty()) return out;
    const Eigen::MatrixXd q = detail::forward(state_, detail::refs_of(queries)).features;
    if (!q.allFinite()) throw NumericalError("non-finite query features");
    const Eigen::MatrixXd k_star = detail::rbf(state_.kernel, detail::squared_distances(train_features_, q));
    const Eigen::VectorXd mean = k_star.transpose() * alpha_;
    const Eigen::MatrixXd v = cholesky_lower_.triangularView<Eigen::Lower>().solve(k_star);
    const Eigen::VectorXd reduction = v.colwise().squaredNorm().transpose();
    const double prior = state_.kernel.outputscale();
    const double sd2 = state_.y_sd * state_.y_sd;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        out[i].mean = mean[idx] * state_.y_sd + state_.y_mean;
        out[i].variance = std::max(0.0, prior - reduction[idx]) * sd2;
    }
    return out;
}

std::vector<PosteriorPrediction> predict(const SurrogateState& state, const History& history,
                                         std::span<const SurrogateInput> queries) {
    return GpPosterior(state, history).predict(queries);
}

std::vector<PosteriorPrediction> predict_without_curve(const SurrogateState& state, const History& history,
                                                       std::span<const SurrogateInput> queries) {
    SurrogateState ablated = state;
    ablated.use_curve_input = false;
    return GpPosterior(ablated, history).predict(queries);
}

}  // namespace graybox
