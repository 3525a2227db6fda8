#include "newsim/model/head.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "newsim/errors.hpp"
#include "newsim/random.hpp"

namespace newsim::model {
namespace {

// Largest double below 1; keeps the output strictly inside (0, 1).
constexpr double kMaxProb = 1.0 - 0x1.0p-53;
constexpr double kMinProb = std::numeric_limits<double>::denorm_min();

std::vector<DenseLayer> build_layers(std::size_t input_dim, const std::vector<std::size_t>& hidden) {
    if (input_dim == 0) throw ArgumentError("head input_dim must be >= 1");
    std::vector<DenseLayer> layers;
    std::size_t fan_in = input_dim;
    for (std::size_t h : hidden) {
        if (h == 0) throw ArgumentError("hidden layer size must be >= 1");
        layers.emplace_back(fan_in, h);
        fan_in = h;
    }
    layers.emplace_back(fan_in, 1);
    return layers;
}

void check_input(const RegressionHead& head, std::span<const double> x) {
    if (x.size() != head.input_dim)
        throw DimensionError("head for " + std::string(metric_name(head.metric)) + " expects input dim " +
                             std::to_string(head.input_dim) + ", got " + std::to_string(x.size()));
}

// out[r] = b[r] + sum_c W[r][c] * in[c], accumulated in column order.
void affine(const DenseLayer& layer, std::span<const double> in, std::vector<double>& out) {
    out.resize(layer.outputs);
    for (std::size_t r = 0; r < layer.outputs; ++r) {
        double acc = layer.bias[r];
        const double* row = layer.weights.data() + r * layer.inputs;
        for (std::size_t c = 0; c < layer.inputs; ++c) acc += row[c] * in[c];
        out[r] = acc;
    }
}

} // namespace

std::vector<std::size_t> RegressionHead::layer_sizes() const {
    std::vector<std::size_t> sizes;
    for (const auto& l : layers) sizes.push_back(l.outputs);
    return sizes;
}

ParameterSet ParameterSet::zeros_like(const RegressionHead& head) {
    ParameterSet p;
    for (const auto& l : head.layers) p.layers.emplace_back(l.inputs, l.outputs);
    return p;
}

bool ParameterSet::matches(const RegressionHead& head) const {
    if (layers.size() != head.layers.size()) return false;
    for (std::size_t i = 0; i < layers.size(); ++i)
        if (!layers[i].same_shape(head.layers[i]) || layers[i].weights.size() != head.layers[i].weights.size() ||
            layers[i].bias.size() != head.layers[i].bias.size())
            return false;
    return true;
}

RegressionHead init_head(MetricKind metric, std::size_t input_dim, std::uint64_t seed,
                         std::vector<std::size_t> hidden) {
    RegressionHead head;
    head.metric = metric;
    head.input_dim = input_dim;
    head.layers = build_layers(input_dim, hidden);
    Rng rng(mix_seed(seed, metric_index(metric)));
    for (auto& layer : head.layers) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs));
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
    }
    return head;
}

RegressionHead zero_head(MetricKind metric, std::size_t input_dim, std::vector<std::size_t> hidden) {
    RegressionHead head;
    head.metric = metric;
    head.input_dim = input_dim;
    head.layers = build_layers(input_dim, hidden);
    return head;
}

double sigmoid(double z) {
    const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    return std::clamp(p, kMinProb, kMaxProb);
}

double forward(const RegressionHead& head, std::span<const double> x) {
    check_input(head, x);
    std::vector<double> a(x.begin(), x.end());
    std::vector<double> z;
    for (std::size_t l = 0; l < head.layers.size(); ++l) {
        affine(head.layers[l], a, z);
        if (l + 1 < head.layers.size())
            for (double& v : z) v = v > 0.0 ? v : 0.0;
        a.swap(z);
    }
    return sigmoid(a[0]);
}

BackwardResult backward(const RegressionHead& head, std::span<const double> x, double target) {
    check_input(head, x);
    const std::size_t depth = head.layers.size();

    // activations[0] = x, activations[l + 1] = output of layer l (post-relu for
    // hidden layers); pre[l] = pre-activation of layer l.
    std::vector<std::vector<double>> activations(depth + 1);
    std::vector<std::vector<double>> pre(depth);
    activations[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < depth; ++l) {
        affine(head.layers[l], activations[l], pre[l]);
        activations[l + 1] = pre[l];
        if (l + 1 < depth)
            for (double& v : activations[l + 1]) v = v > 0.0 ? v : 0.0;
    }

    BackwardResult result;
    result.prediction = sigmoid(pre[depth - 1][0]);
    const double residual = result.prediction - target;
    result.loss = residual * residual;
    result.gradients = ParameterSet::zeros_like(head);

    // dL/dz for the output unit.
    std::vector<double> delta{2.0 * residual * result.prediction * (1.0 - result.prediction)};
    for (std::size_t l = depth; l-- > 0;) {
        const DenseLayer& layer = head.layers[l];
        DenseLayer& grad = result.gradients.layers[l];
        const auto& input = activations[l];
        for (std::size_t r = 0; r < layer.outputs; ++r) {
            grad.bias[r] = delta[r];
            double* row = grad.weights.data() + r * layer.inputs;
            for (std::size_t c = 0; c < layer.inputs; ++c) row[c] = delta[r] * input[c];
        }
        if (l == 0) break;
        std::vector<double> next(layer.inputs, 0.0);
        for (std::size_t r = 0; r < layer.outputs; ++r) {
            const double* row = layer.weights.data() + r * layer.inputs;
            for (std::size_t c = 0; c < layer.inputs; ++c) next[c] += row[c] * delta[r];
        }
        for (std::size_t c = 0; c < layer.inputs; ++c)
            if (!(pre[l - 1][c] > 0.0)) next[c] = 0.0;
        delta.swap(next);
    }
    return result;
}

} // namespace newsim::model
