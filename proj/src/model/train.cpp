#include "newsim/model/train.hpp"

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/random.hpp"

namespace newsim::model {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw RangeError("learning_rate must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw RangeError("momentum must be in [0, 1)");
    if (epochs < 1) throw RangeError("epochs must be >= 1");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
    j = nlohmann::json{{"learning_rate", c.learning_rate},
                       {"momentum", c.momentum},
                       {"epochs", c.epochs},
                       {"seed", c.seed},
                       {"shuffle", c.shuffle}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
    c.learning_rate = j.at("learning_rate").get<double>();
    c.momentum = j.at("momentum").get<double>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.shuffle = j.value("shuffle", true);
}

MomentumState MomentumState::for_head(const RegressionHead& head) {
    return MomentumState{ParameterSet::zeros_like(head)};
}

double mse_loss(std::span<const double> preds, std::span<const double> targets) {
    if (preds.size() != targets.size()) throw ArgumentError("mse: length mismatch");
    if (preds.empty()) throw ArgumentError("mse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double e = preds[i] - targets[i];
        sum += e * e;
    }
    return sum / static_cast<double>(preds.size());
}

void sgd_momentum_step(RegressionHead& head, const ParameterSet& grads, MomentumState& state,
                       double learning_rate, double momentum) {
    if (!grads.matches(head) || !state.velocity.matches(head))
        throw DimensionError("gradient or momentum shape does not match the head");
    for (std::size_t l = 0; l < head.layers.size(); ++l) {
        auto& layer = head.layers[l];
        const auto& g = grads.layers[l];
        auto& v = state.velocity.layers[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i) {
            v.weights[i] = momentum * v.weights[i] + g.weights[i];
            layer.weights[i] -= learning_rate * v.weights[i];
        }
        for (std::size_t i = 0; i < layer.bias.size(); ++i) {
            v.bias[i] = momentum * v.bias[i] + g.bias[i];
            layer.bias[i] -= learning_rate * v.bias[i];
        }
    }
}

TrainResult train(RegressionHead head, std::span<const TrainExample> examples, const TrainConfig& config,
                  const StepObserver& observer) {
    config.validate();
    if (examples.empty()) throw EmptyDatasetError("no training examples");

    MomentumState state = MomentumState::for_head(head);
    Rng rng(config.seed);
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result;
    result.loss_history.reserve(config.epochs);
    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t idx : order) {
            const auto& ex = examples[idx];
            const auto back = backward(head, ex.input, ex.target);
            epoch_loss += back.loss;
            sgd_momentum_step(head, back.gradients, state, config.learning_rate, config.momentum);
            if (observer) observer(head, step);
            ++step;
        }
        result.loss_history.push_back(epoch_loss / static_cast<double>(examples.size()));
    }
    result.head = std::move(head);
    return result;
}

} // namespace newsim::model
