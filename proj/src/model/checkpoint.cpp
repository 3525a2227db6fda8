#include "newsim/model/checkpoint.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"

namespace newsim::model {

void to_json(nlohmann::json& j, const RegressionHead& head) {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : head.layers)
        layers.push_back({{"inputs", l.inputs}, {"outputs", l.outputs}, {"weights", l.weights}, {"bias", l.bias}});
    j = nlohmann::json{{"metric", metric_name(head.metric)},
                       {"input_dim", head.input_dim},
                       {"layer_sizes", head.layer_sizes()},
                       {"layers", layers}};
}

void from_json(const nlohmann::json& j, RegressionHead& head) {
    const auto metric = parse_metric(j.at("metric").get<std::string>());
    if (!metric) throw FormatError("unknown metric in checkpoint");
    head.metric = *metric;
    head.input_dim = j.at("input_dim").get<std::size_t>();
    head.layers.clear();
    std::size_t fan_in = head.input_dim;
    for (const auto& lj : j.at("layers")) {
        DenseLayer l;
        l.inputs = lj.at("inputs").get<std::size_t>();
        l.outputs = lj.at("outputs").get<std::size_t>();
        l.weights = lj.at("weights").get<std::vector<double>>();
        l.bias = lj.at("bias").get<std::vector<double>>();
        if (l.inputs != fan_in || l.weights.size() != l.inputs * l.outputs || l.bias.size() != l.outputs)
            throw FormatError("checkpoint layer shapes are inconsistent");
        fan_in = l.outputs;
        head.layers.push_back(std::move(l));
    }
    if (head.layers.empty() || head.layers.back().outputs != 1)
        throw FormatError("checkpoint head must end in a single output");
}

void to_json(nlohmann::json& j, const Checkpoint& c) {
    j = c.head;
    j["train_config"] = c.config;
    j["loss_history"] = c.loss_history;
}

void from_json(const nlohmann::json& j, Checkpoint& c) {
    c.head = j.get<RegressionHead>();
    c.config = j.at("train_config").get<TrainConfig>();
    c.loss_history = j.at("loss_history").get<std::vector<double>>();
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + path.string());
    out << nlohmann::json(checkpoint).dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("checkpoint not found: " + path.string());
    try {
        nlohmann::json j;
        in >> j;
        return j.get<Checkpoint>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

} // namespace newsim::model
