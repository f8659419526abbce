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

#include <filesystem>

#include <json.hpp>

#include "graybox/surrogate.hpp"

namespace graybox {

// Surrogate checkpoint layout:
//   { "dense1": {"rows", "cols", "weight": [...], "bias": [...]},
//     "conv":   {"channels", "width", "weight": [...], "bias": [...]},
//     "dense2": {"rows", "cols", "weight": [...], "bias": [...]},
//     "kernel": {"log_lengthscale", "log_outputscale", "raw_noise", "noise_floor"},
//     "y_mean", "y_sd", "max_budget", "use_curve_input" }
// Weight arrays are row-major.

nlohmann::json checkpoint_to_json(const SurrogateState& state);
SurrogateState checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const SurrogateState& state, const std::filesystem::path& path);
SurrogateState load_checkpoint(const std::filesystem::path& path);

}  // namespace graybox
