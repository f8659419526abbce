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

#include <vector>

#include <Eigen/Core>

#include "graybox/benchmark.hpp"

namespace graybox {

/// Numeric feature vector fed to the surrogate: one entry per numeric param
/// (min-max scaled, optionally after a log transform) followed in declaration
/// order by a one-hot block per categorical param.
using EncodedConfig = Eigen::VectorXd;

/// Stateless config encoder. Scaling bounds come from the search space, not
/// from observed data, so encodings do not depend on run order.
class Encoder {
public:
    explicit Encoder(SearchSpace space);

    const SearchSpace& space() const { return space_; }
    int dimension() const { return dimension_; }

    /// Throws EncodingError naming the param on an out-of-bounds numeric value
    /// or an unknown category.
    EncodedConfig encode(const RawConfig& raw) const;

private:
    SearchSpace space_;
    std::vector<int> offsets_;
    int dimension_ = 0;
};

Encoder build_encoder(const SearchSpace& space);

/// Encodes every config of a benchmark, in index order.
std::vector<EncodedConfig> encode_all(const Encoder& encoder, const Benchmark& benchmark);

/// j / B.
double normalize_budget(int budget, int max_budget);

}  // namespace graybox
