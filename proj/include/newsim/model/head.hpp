#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "newsim/metric.hpp"

namespace newsim::model {

inline constexpr std::size_t kHidden1 = 120;
inline constexpr std::size_t kHidden2 = 84;

// Fully connected layer; weights are row-major (outputs x inputs).
struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    DenseLayer() = default;
    DenseLayer(std::size_t in, std::size_t out)
        : inputs(in), outputs(out), weights(in * out, 0.0), bias(out, 0.0) {}

    double& w(std::size_t row, std::size_t col) { return weights[row * inputs + col]; }
    double w(std::size_t row, std::size_t col) const { return weights[row * inputs + col]; }

    bool same_shape(const DenseLayer& o) const { return inputs == o.inputs && outputs == o.outputs; }
    bool operator==(const DenseLayer&) const = default;
};

// relu(W1 x + b1) -> relu(W2 h1 + b2) -> sigmoid(W3 h2 + b3).
// Default hidden sizes are 120 and 84; the last layer has one output.
struct RegressionHead {
    MetricKind metric = MetricKind::Overall;
    std::size_t input_dim = 0;
    std::vector<DenseLayer> layers;

    std::vector<std::size_t> layer_sizes() const;
    bool operator==(const RegressionHead&) const = default;
};

// Same layout as the head's parameters; used for gradients and momentum.
struct ParameterSet {
    std::vector<DenseLayer> layers;

    static ParameterSet zeros_like(const RegressionHead& head);
    bool matches(const RegressionHead& head) const;
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
// Deterministic in (metric, input_dim, seed, hidden).
RegressionHead init_head(MetricKind metric, std::size_t input_dim, std::uint64_t seed,
                         std::vector<std::size_t> hidden = {kHidden1, kHidden2});

// All weights and biases zero (forward gives 0.5 everywhere).
RegressionHead zero_head(MetricKind metric, std::size_t input_dim,
                         std::vector<std::size_t> hidden = {kHidden1, kHidden2});

double sigmoid(double z);

// Score in (0, 1). Throws DimensionError if x.size() != input_dim.
double forward(const RegressionHead& head, std::span<const double> x);

struct BackwardResult {
    ParameterSet gradients;
    double prediction = 0.0;
    double loss = 0.0; // (prediction - target)^2
};

// Exact gradients of (forward(x) - target)^2; relu'(0) is taken as 0.
BackwardResult backward(const RegressionHead& head, std::span<const double> x, double target);

} // namespace newsim::model
