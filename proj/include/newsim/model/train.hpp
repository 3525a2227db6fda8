#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "newsim/model/head.hpp"

namespace newsim::model {

struct TrainConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t epochs = 8;
    std::uint64_t seed = 0;
    bool shuffle = true;

    // Throws RangeError unless lr > 0, 0 <= momentum < 1 and epochs >= 1.
    void validate() const;
    bool operator==(const TrainConfig&) const = default;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

// Velocity buffers, zero-initialized, shaped like the head.
struct MomentumState {
    ParameterSet velocity;

    static MomentumState for_head(const RegressionHead& head);
};

struct TrainExample {
    std::vector<double> input;
    double target = 0.0;
};

// Mean of squared differences. Throws ArgumentError on empty or unequal input.
double mse_loss(std::span<const double> preds, std::span<const double> targets);

// Classical momentum: v <- momentum * v + g; param <- param - lr * v.
// Throws DimensionError if shapes disagree.
void sgd_momentum_step(RegressionHead& head, const ParameterSet& grads, MomentumState& state,
                       double learning_rate, double momentum);

struct TrainResult {
    RegressionHead head;
    // One entry per epoch: mean squared error over that epoch's examples,
    // each measured just before its update.
    std::vector<double> loss_history;
};

// Called after every update with the updated head and the 0-based step index.
using StepObserver = std::function<void(const RegressionHead&, std::size_t step)>;

// Per-example SGD with momentum for config.epochs epochs. With shuffle on,
// each epoch visits examples in a permutation drawn from config.seed.
// Throws EmptyDatasetError for no examples.
TrainResult train(RegressionHead head, std::span<const TrainExample> examples, const TrainConfig& config,
                  const StepObserver& observer = {});

} // namespace newsim::model
