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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graybox/benchmark.hpp"
#include "graybox/run_trace.hpp"

namespace graybox {

enum class XAxis { kEpochs, kSeconds };

struct RegretPoint {
    double x = 0.0;
    double regret = 0.0;
};

/// Best-so-far regret after each trace step; nonincreasing.
struct RegretCurve {
    std::vector<RegretPoint> points;

    /// Step interpolation: the value of the last point at or before x.
    std::optional<double> at(double x) const;
};

/// regret = best final-budget score - best score observed so far, floored at 0.
/// Throws ArgumentError if the trace was produced on a different benchmark.
RegretCurve regret_curve(const RunTrace& trace, const Benchmark& benchmark, XAxis axis = XAxis::kEpochs);

/// Arithmetic mean of the curves at each grid point (step interpolation).
std::vector<double> mean_regret(std::span<const RegretCurve> curves, std::span<const double> grid);

/// method -> dataset -> curve
using CurveTable = std::map<std::string, std::map<std::string, RegretCurve>>;

/// method -> dataset -> rank (1 = lowest regret, ties share the mean rank).
std::map<std::string, std::map<std::string, double>> dataset_ranks(const CurveTable& curves, double at);

/// Per-method mean of dataset_ranks over datasets. Throws ArgumentError
/// listing any missing (method, dataset) pair.
std::map<std::string, double> average_rank(const CurveTable& curves, double at);

struct BudgetValue {
    int budget = 0;
    double value = 0.0;
};

/// Share of the configs trained for at least i epochs that belong to the
/// ground-truth top max(1, ceil(top_fraction * n)) by final score.
std::vector<BudgetValue> precision_at_budget(const RunTrace& trace, const Benchmark& benchmark,
                                             double top_fraction = 0.01);

/// Mean final-score regret of the configs trained for at least i epochs.
std::vector<BudgetValue> avg_selected_regret(const RunTrace& trace, const Benchmark& benchmark);

/// At each budget b >= 2: of the configs in the top third at b (among the
/// configs run to at least b), the fraction that sat in the bottom two thirds
/// at some smaller budget. Budgets with fewer than 3 configs are omitted.
std::vector<BudgetValue> promotion_fraction(const RunTrace& trace, const Benchmark& benchmark);

/// promotion_fraction over the full benchmark table.
std::vector<BudgetValue> promotion_fraction_baseline(const Benchmark& benchmark);

/// One row of the tidy report: (method, dataset, seed, x, metric, value).
struct CsvRow {
    std::string method;
    std::string dataset;
    std::optional<std::uint64_t> seed;
    double x = 0.0;
    std::string metric;
    double value = 0.0;
};

void write_csv(std::span<const CsvRow> rows, std::ostream& out);

}  // namespace graybox
