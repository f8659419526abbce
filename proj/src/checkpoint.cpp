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

#include "graybox/checkpoint.hpp"

#include <fstream>

#include "graybox/errors.hpp"

namespace graybox {

using nlohmann::json;

namespace {

json dump_matrix(const Eigen::MatrixXd& m) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
    }
    return flat;
}

Eigen::MatrixXd read_matrix(const json& j, Eigen::Index rows, Eigen::Index cols) {
    const auto flat = j.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(flat.size()) != rows * cols) throw LoadError("checkpoint: weight array has wrong size");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
    }
    return m;
}

Eigen::VectorXd read_vector(const json& j, Eigen::Index size) {
    const auto flat = j.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(flat.size()) != size) throw LoadError("checkpoint: bias array has wrong size");
    return Eigen::Map<const Eigen::VectorXd>(flat.data(), size);
}

json dump_layer(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
    return {{"rows", w.rows()}, {"cols", w.cols()}, {"weight", dump_matrix(w)},
            {"bias", std::vector<double>(b.data(), b.data() + b.size())}};
}

}  // namespace

json checkpoint_to_json(const SurrogateState& s) {
    const auto& w = s.weights;
    json j;
    j["dense1"] = dump_layer(w.dense1_weight, w.dense1_bias);
    j["conv"] = {{"channels", w.conv_weight.rows()},
                 {"width", w.conv_weight.cols()},
                 {"weight", dump_matrix(w.conv_weight)},
                 {"bias", std::vector<double>(w.conv_bias.data(), w.conv_bias.data() + w.conv_bias.size())}};
    j["dense2"] = dump_layer(w.dense2_weight, w.dense2_bias);
    j["kernel"] = {{"log_lengthscale", s.kernel.log_lengthscale},
                   {"log_outputscale", s.kernel.log_outputscale},
                   {"raw_noise", s.kernel.raw_noise},
                   {"noise_floor", kNoiseFloor}};
    j["y_mean"] = s.y_mean;
    j["y_sd"] = s.y_sd;
    j["max_budget"] = s.max_budget;
    j["use_curve_input"] = s.use_curve_input;
    return j;
}

SurrogateState checkpoint_from_json(const json& j) {
    try {
        SurrogateState s;
        const auto& d1 = j.at("dense1");
        const auto rows1 = d1.at("rows").get<Eigen::Index>();
        const auto cols1 = d1.at("cols").get<Eigen::Index>();
        if (rows1 != kHiddenUnits || cols1 < 1) throw LoadError("checkpoint: dense1 has wrong shape");
        s.weights.dense1_weight = read_matrix(d1.at("weight"), rows1, cols1);
        s.weights.dense1_bias = read_vector(d1.at("bias"), rows1);

        const auto& conv = j.at("conv");
        if (conv.at("channels").get<int>() != kConvChannels || conv.at("width").get<int>() != kConvWidth) {
            throw LoadError("checkpoint: conv has wrong shape");
        }
        s.weights.conv_weight = read_matrix(conv.at("weight"), kConvChannels, kConvWidth);
        s.weights.conv_bias = read_vector(conv.at("bias"), kConvChannels);

        const auto& d2 = j.at("dense2");
        if (d2.at("rows").get<int>() != kLatentUnits || d2.at("cols").get<int>() != kHiddenUnits + kConvChannels) {
            throw LoadError("checkpoint: dense2 has wrong shape");
        }
        s.weights.dense2_weight = read_matrix(d2.at("weight"), kLatentUnits, kHiddenUnits + kConvChannels);
        s.weights.dense2_bias = read_vector(d2.at("bias"), kLatentUnits);

        const auto& k = j.at("kernel");
        s.kernel.log_lengthscale = k.at("log_lengthscale").get<double>();
        s.kernel.log_outputscale = k.at("log_outputscale").get<double>();
        s.kernel.raw_noise = k.at("raw_noise").get<double>();
        s.y_mean = j.at("y_mean").get<double>();
        s.y_sd = j.at("y_sd").get<double>();
        s.max_budget = j.at("max_budget").get<int>();
        s.use_curve_input = j.value("use_curve_input", true);
        if (!s.weights.all_finite() || !(s.y_sd > 0.0) || s.max_budget < 1) {
            throw LoadError("checkpoint: invalid values");
        }
        return s;
    } catch (const json::exception& e) {
        throw LoadError(std::string("checkpoint: ") + e.what());
    }
}

void save_checkpoint(const SurrogateState& state, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << checkpoint_to_json(state).dump() << '\n';
}

SurrogateState load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("missing " + path.string());
    try {
        return checkpoint_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw LoadError(std::string("checkpoint: ") + e.what());
    }
}

}  // namespace graybox
