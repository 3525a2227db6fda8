#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "newsim/model/head.hpp"
#include "newsim/model/train.hpp"

namespace newsim::model {

// One trained head with the configuration and loss curve that produced it.
struct Checkpoint {
    RegressionHead head;
    TrainConfig config;
    std::vector<double> loss_history;
};

void to_json(nlohmann::json& j, const RegressionHead& head);
void from_json(const nlohmann::json& j, RegressionHead& head);
void to_json(nlohmann::json& j, const Checkpoint& c);
void from_json(const nlohmann::json& j, Checkpoint& c);

// Doubles are written in shortest round-trip form, so loading reproduces
// every parameter bit for bit.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

// Throws NotFoundError if the file is missing, FormatError if it is malformed.
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace newsim::model
