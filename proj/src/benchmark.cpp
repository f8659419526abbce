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

#include "graybox/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "graybox/errors.hpp"

namespace graybox {

using nlohmann::json;

ParamSpec ParamSpec::numeric(std::string name, double low, double high, bool log_scale) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::kNumeric;
    p.low = low;
    p.high = high;
    p.log_scale = log_scale;
    return p;
}

ParamSpec ParamSpec::categorical(std::string name, std::vector<std::string> choices) {
    ParamSpec p;
    p.name = std::move(name);
    p.kind = ParamKind::kCategorical;
    p.choices = std::move(choices);
    return p;
}

void SearchSpace::validate() const {
    std::set<std::string> names;
    for (const auto& p : params) {
        if (!names.insert(p.name).second) {
            throw ArgumentError("duplicate parameter name '" + p.name + "'");
        }
        if (p.kind == ParamKind::kNumeric) {
            if (!(std::isfinite(p.low) && std::isfinite(p.high)) || !(p.low < p.high)) {
                throw ArgumentError("parameter '" + p.name + "': bounds must satisfy low < high");
            }
            if (p.log_scale && p.low <= 0.0) {
                throw ArgumentError("parameter '" + p.name + "': log scale needs a positive lower bound");
            }
        } else {
            if (p.choices.empty()) {
                throw ArgumentError("parameter '" + p.name + "': no choices");
            }
            std::set<std::string> unique(p.choices.begin(), p.choices.end());
            if (unique.size() != p.choices.size()) {
                throw ArgumentError("parameter '" + p.name + "': duplicate choices");
            }
        }
    }
}

std::optional<std::size_t> SearchSpace::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].name == name) return i;
    }
    return std::nullopt;
}

void Benchmark::validate() const {
    try {
        space.validate();
    } catch (const ArgumentError& e) {
        throw LoadError(std::string("invalid search space: ") + e.what());
    }
    if (max_budget < 1) throw LoadError("max_budget must be positive");
    if (configs.empty()) throw LoadError("benchmark has no configurations");
    if (curves.size() != configs.size() || epoch_seconds.size() != configs.size()) {
        throw LoadError("configs, curves and epoch_seconds differ in length");
    }
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const std::string where = "config " + std::to_string(i) + ": ";
        if (configs[i].size() != space.params.size()) {
            throw LoadError(where + "expected " + std::to_string(space.params.size()) + " parameter values");
        }
        for (std::size_t k = 0; k < space.params.size(); ++k) {
            const auto& p = space.params[k];
            if (p.kind == ParamKind::kNumeric) {
                const double* v = std::get_if<double>(&configs[i][k]);
                if (v == nullptr || !std::isfinite(*v)) {
                    throw LoadError(where + "parameter '" + p.name + "' must be a finite number");
                }
            } else {
                const std::string* v = std::get_if<std::string>(&configs[i][k]);
                if (v == nullptr || std::find(p.choices.begin(), p.choices.end(), *v) == p.choices.end()) {
                    throw LoadError(where + "parameter '" + p.name + "' must be one of its declared choices");
                }
            }
        }
        if (curves[i].size() != static_cast<std::size_t>(max_budget)) {
            throw LoadError(where + "curve has length " + std::to_string(curves[i].size()) + ", expected " +
                            std::to_string(max_budget));
        }
        for (double s : curves[i]) {
            if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
                throw LoadError(where + "score outside [0, 1]");
            }
        }
        if (epoch_seconds[i].size() != static_cast<std::size_t>(max_budget)) {
            throw LoadError(where + "epoch_seconds has wrong length");
        }
        for (double t : epoch_seconds[i]) {
            if (!std::isfinite(t) || t < 0.0) throw LoadError(where + "negative or non-finite epoch duration");
        }
    }
}

QueryResult query(const Benchmark& benchmark, BudgetLedger& ledger, std::size_t config, int budget) {
    if (config >= benchmark.size() || config >= ledger.n_configs()) {
        throw ArgumentError("config index " + std::to_string(config) + " out of range");
    }
    if (budget < 1 || budget > benchmark.max_budget) {
        throw ArgumentError("budget " + std::to_string(budget) + " outside [1, " +
                            std::to_string(benchmark.max_budget) + "]");
    }
    QueryResult r;
    r.score = benchmark.score(config, budget);
    int& highest = ledger.highest_[config];
    if (budget > highest) {
        r.incremental_epochs = budget - highest;
        const auto& secs = benchmark.epoch_seconds[config];
        for (int e = highest; e < budget; ++e) r.incremental_seconds += secs[e];
        highest = budget;
        ledger.cumulative_epochs_ += r.incremental_epochs;
        ledger.cumulative_seconds_ += r.incremental_seconds;
    }
    return r;
}

double best_score(const Benchmark& benchmark) {
    if (benchmark.size() == 0) throw PreconditionError("best_score of an empty benchmark");
    double best = benchmark.final_score(0);
    for (std::size_t i = 1; i < benchmark.size(); ++i) best = std::max(best, benchmark.final_score(i));
    return best;
}

namespace {

ParamSpec parse_param(const json& j) {
    ParamSpec p;
    p.name = j.at("name").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "numeric") {
        p.kind = ParamKind::kNumeric;
        p.low = j.at("low").get<double>();
        p.high = j.at("high").get<double>();
        p.log_scale = j.value("log_scale", false);
    } else if (kind == "categorical") {
        p.kind = ParamKind::kCategorical;
        p.choices = j.at("choices").get<std::vector<std::string>>();
    } else {
        throw LoadError("parameter '" + p.name + "': unknown kind '" + kind + "'");
    }
    return p;
}

json dump_param(const ParamSpec& p) {
    json j;
    j["name"] = p.name;
    if (p.kind == ParamKind::kNumeric) {
        j["kind"] = "numeric";
        j["low"] = p.low;
        j["high"] = p.high;
        j["log_scale"] = p.log_scale;
    } else {
        j["kind"] = "categorical";
        j["choices"] = p.choices;
    }
    return j;
}

}  // namespace

Benchmark load_benchmark(const std::filesystem::path& dir) {
    const auto meta_path = dir / "meta.json";
    const auto curves_path = dir / "curves.jsonl";
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw LoadError("missing " + meta_path.string());
    std::ifstream curves_in(curves_path);
    if (!curves_in) throw LoadError("missing " + curves_path.string());

    Benchmark b;
    try {
        const json meta = json::parse(meta_in);
        b.name = meta.value("name", dir.filename().string());
        b.max_budget = meta.at("max_budget").get<int>();
        if (meta.contains("direction") && meta.at("direction") != "max") {
            throw LoadError("only direction \"max\" is supported; convert losses at export time");
        }
        for (const auto& p : meta.at("space")) b.space.params.push_back(parse_param(p));
    } catch (const json::exception& e) {
        throw LoadError("meta.json: " + std::string(e.what()));
    }
    try {
        b.space.validate();
    } catch (const ArgumentError& e) {
        throw LoadError(std::string("meta.json: ") + e.what());
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(curves_in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::size_t expected_id = b.configs.size();
        const std::string where = "curves.jsonl line " + std::to_string(line_no) + " (config " +
                                  std::to_string(expected_id) + "): ";
        try {
            const json rec = json::parse(line);
            if (rec.at("id").get<long>() != static_cast<long>(expected_id)) {
                throw LoadError(where + "ids must be contiguous from 0");
            }
            const json& cfg = rec.at("config");
            for (const auto& [key, _] : cfg.items()) {
                if (!b.space.index_of(key)) throw LoadError(where + "unknown parameter '" + key + "'");
            }
            RawConfig raw;
            for (const auto& p : b.space.params) {
                if (!cfg.contains(p.name)) throw LoadError(where + "missing parameter '" + p.name + "'");
                const json& v = cfg.at(p.name);
                if (p.kind == ParamKind::kNumeric) {
                    if (!v.is_number()) throw LoadError(where + "parameter '" + p.name + "' must be numeric");
                    raw.emplace_back(v.get<double>());
                } else {
                    if (!v.is_string()) throw LoadError(where + "parameter '" + p.name + "' must be a string");
                    raw.emplace_back(v.get<std::string>());
                }
            }
            auto curve = rec.at("curve").get<std::vector<double>>();
            std::vector<double> secs(static_cast<std::size_t>(std::max(b.max_budget, 0)), 1.0);
            if (rec.contains("epoch_seconds")) secs = rec.at("epoch_seconds").get<std::vector<double>>();
            b.configs.push_back(std::move(raw));
            b.curves.push_back(std::move(curve));
            b.epoch_seconds.push_back(std::move(secs));
        } catch (const json::exception& e) {
            throw LoadError(where + e.what());
        }
    }
    b.validate();
    return b;
}

void save_benchmark(const Benchmark& benchmark, const std::filesystem::path& dir) {
    benchmark.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    json meta;
    meta["name"] = benchmark.name;
    meta["max_budget"] = benchmark.max_budget;
    meta["metric"] = "val_accuracy";
    meta["direction"] = "max";
    meta["space"] = json::array();
    for (const auto& p : benchmark.space.params) meta["space"].push_back(dump_param(p));

    std::ofstream meta_out(dir / "meta.json");
    if (!meta_out) throw std::runtime_error("cannot write " + (dir / "meta.json").string());
    meta_out << meta.dump(2) << '\n';

    std::ofstream curves_out(dir / "curves.jsonl");
    if (!curves_out) throw std::runtime_error("cannot write " + (dir / "curves.jsonl").string());
    for (std::size_t i = 0; i < benchmark.size(); ++i) {
        json rec;
        rec["id"] = i;
        json cfg = json::object();
        for (std::size_t k = 0; k < benchmark.space.params.size(); ++k) {
            std::visit([&](const auto& v) { cfg[benchmark.space.params[k].name] = v; }, benchmark.configs[i][k]);
        }
        rec["config"] = std::move(cfg);
        rec["curve"] = benchmark.curves[i];
        rec["epoch_seconds"] = benchmark.epoch_seconds[i];
        curves_out << rec.dump() << '\n';
    }
    if (!curves_out) throw std::runtime_error("failed writing " + (dir / "curves.jsonl").string());
}

}  // namespace graybox
