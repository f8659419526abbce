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

#include "graybox/encoding.hpp"

#include <algorithm>
#include <cmath>

#include "graybox/errors.hpp"

namespace graybox {

namespace {

// Values a hair outside the bounds (export round-off) are accepted and clamped.
constexpr double kBoundSlack = 1e-9;

}  // namespace

Encoder::Encoder(SearchSpace space) : space_(std::move(space)) {
    space_.validate();
    for (const auto& p : space_.params) {
        offsets_.push_back(dimension_);
        dimension_ += p.kind == ParamKind::kNumeric ? 1 : static_cast<int>(p.choices.size());
    }
}

EncodedConfig Encoder::encode(const RawConfig& raw) const {
    if (raw.size() != space_.params.size()) {
        throw EncodingError("expected " + std::to_string(space_.params.size()) + " values, got " +
                            std::to_string(raw.size()));
    }
    EncodedConfig out = EncodedConfig::Zero(dimension_);
    for (std::size_t k = 0; k < space_.params.size(); ++k) {
        const auto& p = space_.params[k];
        const int at = offsets_[k];
        if (p.kind == ParamKind::kNumeric) {
            const double* v = std::get_if<double>(&raw[k]);
            if (v == nullptr) throw EncodingError("parameter '" + p.name + "' expects a number");
            const double span = p.high - p.low;
            if (!std::isfinite(*v) || *v < p.low - kBoundSlack * span || *v > p.high + kBoundSlack * span) {
                throw EncodingError("parameter '" + p.name + "' value out of bounds");
            }
            double u;
            if (p.log_scale) {
                u = (std::log(std::max(*v, p.low)) - std::log(p.low)) / (std::log(p.high) - std::log(p.low));
            } else {
                u = (*v - p.low) / span;
            }
            out[at] = std::clamp(u, 0.0, 1.0);
        } else {
            const std::string* v = std::get_if<std::string>(&raw[k]);
            if (v == nullptr) throw EncodingError("parameter '" + p.name + "' expects a category label");
            const auto it = std::find(p.choices.begin(), p.choices.end(), *v);
            if (it == p.choices.end()) {
                throw EncodingError("parameter '" + p.name + "': unknown category '" + *v + "'");
            }
            out[at + static_cast<int>(it - p.choices.begin())] = 1.0;
        }
    }
    return out;
}

Encoder build_encoder(const SearchSpace& space) {
    return Encoder(space);
}

std::vector<EncodedConfig> encode_all(const Encoder& encoder, const Benchmark& benchmark) {
    std::vector<EncodedConfig> out;
    out.reserve(benchmark.size());
    for (const auto& raw : benchmark.configs) out.push_back(encoder.encode(raw));
    return out;
}

double normalize_budget(int budget, int max_budget) {
    if (max_budget < 1 || budget < 1 || budget > max_budget) {
        throw ArgumentError("normalize_budget: need 1 <= j <= B");
    }
    return static_cast<double>(budget) / static_cast<double>(max_budget);
}

}  // namespace graybox
