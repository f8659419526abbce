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
#include <vector>

#include "graybox/benchmark.hpp"
#include "graybox/run_trace.hpp"

namespace graybox {

struct Rung {
    int n_configs = 0;
    int budget = 0;
};

/// One successive-halving bracket of Hyperband.
struct BracketSchedule {
    int bracket_index = 0;  // s
    int eta = 3;
    std::vector<Rung> rungs;
};

/// Hyperband brackets s = s_max..0 with s_max = floor(log_eta R). Bracket s
/// starts n = ceil((s_max + 1) / (s + 1) * eta^s) configs; rung k keeps
/// floor(n / eta^k) of them at budget max(1, floor(R * eta^(k - s))), so the
/// last rung of every bracket runs at R.
std::vector<BracketSchedule> hyperband_schedule(int max_budget, int eta);

/// Trains uniformly sampled unseen configs to the maximum budget until the cap.
RunTrace run_random_search(const Benchmark& benchmark, long budget_cap, std::uint64_t seed);

/// Repeats the most aggressive Hyperband bracket with fresh configs until the cap.
RunTrace run_successive_halving(const Benchmark& benchmark, long budget_cap, std::uint64_t seed, int eta = 3);

/// Cycles the Hyperband brackets s_max..0 until the cap.
RunTrace run_hyperband(const Benchmark& benchmark, long budget_cap, std::uint64_t seed, int eta = 3);

/// Sequential single-worker asynchronous successive halving over the rung
/// budgets of the most aggressive bracket.
RunTrace run_asha(const Benchmark& benchmark, long budget_cap, std::uint64_t seed, int eta = 3);

}  // namespace graybox
