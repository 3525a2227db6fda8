#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/model/checkpoint.hpp"
#include "newsim/model/head.hpp"
#include "newsim/model/predict.hpp"
#include "newsim/model/train.hpp"
#include "newsim/random.hpp"
#include "support.hpp"

using namespace newsim;
using namespace newsim::model;
using newsim::testing::TempDir;
using newsim::testing::write_file;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

// Parameter by flat index over (weights, bias) of every layer.
double& param(RegressionHead& h, std::size_t l, std::size_t i) {
    auto& layer = h.layers[l];
    return i < layer.weights.size() ? layer.weights[i] : layer.bias[i - layer.weights.size()];
}
double param(const ParameterSet& p, std::size_t l, std::size_t i) {
    const auto& layer = p.layers[l];
    return i < layer.weights.size() ? layer.weights[i] : layer.bias[i - layer.weights.size()];
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("head shapes and initialization bounds") {
    const auto h = init_head(MetricKind::Tone, 768, 7);
    CHECK(h.layer_sizes() == std::vector<std::size_t>{120, 84, 1});
    CHECK(h.layers[0].inputs == 768);
    for (const auto& layer : h.layers) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs));
        for (double w : layer.weights) {
            CHECK(w >= -bound);
            CHECK(w <= bound);
        }
        for (double b : layer.bias) CHECK(b == 0.0);
    }
    CHECK(h == init_head(MetricKind::Tone, 768, 7));
    CHECK(h != init_head(MetricKind::Tone, 768, 8));
    CHECK(h.layers != init_head(MetricKind::Style, 768, 7).layers);
}

TEST_CASE("all-zero parameters predict one half") {
    const auto h = zero_head(MetricKind::Overall, 4);
    CHECK(forward(h, std::vector<double>{1, -2, 3, 4}) == 0.5);
}

TEST_CASE("hand-computed forward pass") {
    auto h = zero_head(MetricKind::Overall, 2, {2});
    h.layers[0].weights = {1, -1, 0.5, 0.5};
    h.layers[0].bias = {0, 0.5};
    h.layers[1].weights = {1, 1};
    h.layers[1].bias = {-1};
    // hidden = relu([1-2, 0.5+1+0.5]) = [0, 2]; out = sigmoid(0 + 2 - 1)
    CHECK(forward(h, std::vector<double>{1, 2}) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
    CHECK_THROWS_AS(forward(h, std::vector<double>{1}), DimensionError);
}

TEST_CASE("sigmoid output stays strictly inside (0, 1)") {
    for (double z : {-1e6, -745.0, -40.0, 0.0, 40.0, 1e6}) {
        const double p = sigmoid(z);
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
    CHECK(sigmoid(0.0) == 0.5);
}

TEST_CASE("backward matches central finite differences") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        auto h = init_head(MetricKind::Entities, 6, 100 + trial, {5, 4});
        for (auto& l : h.layers)
            for (auto& b : l.bias) b = rng.uniform(-0.1, 0.1);
        const auto x = random_vector(rng, 6);
        const double y = rng.uniform01();
        const auto back = backward(h, x, y);
        CHECK(back.prediction == forward(h, x));
        CHECK(back.loss == doctest::Approx((back.prediction - y) * (back.prediction - y)));

        const double eps = 1e-5;
        for (std::size_t l = 0; l < h.layers.size(); ++l) {
            const std::size_t n = h.layers[l].weights.size() + h.layers[l].bias.size();
            for (std::size_t i = 0; i < n; ++i) {
                auto plus = h, minus = h;
                param(plus, l, i) += eps;
                param(minus, l, i) -= eps;
                const double fp = forward(plus, x) - y, fm = forward(minus, x) - y;
                const double numeric = (fp * fp - fm * fm) / (2 * eps);
                const double analytic = param(back.gradients, l, i);
                CHECK(std::abs(numeric - analytic) <= 1e-6 + 1e-4 * std::abs(numeric));
            }
        }
    }
}

TEST_CASE("mse loss") {
    CHECK(mse_loss(std::vector<double>{0.2, 0.4}, std::vector<double>{0, 0}) == doctest::Approx(0.10).epsilon(1e-12));
    CHECK_THROWS_AS(mse_loss(std::vector<double>{}, std::vector<double>{}), ArgumentError);
    CHECK_THROWS_AS(mse_loss(std::vector<double>{1}, std::vector<double>{1, 2}), ArgumentError);
}

TEST_CASE("two momentum steps with a constant gradient move lr*g*(2+mu)") {
    auto h = zero_head(MetricKind::Overall, 3, {2});
    const auto start = h;
    auto g = ParameterSet::zeros_like(h);
    for (auto& l : g.layers) {
        for (auto& w : l.weights) w = 0.3;
        for (auto& b : l.bias) b = -0.2;
    }
    auto state = MomentumState::for_head(h);
    const double lr = 0.01, mu = 0.9;
    sgd_momentum_step(h, g, state, lr, mu);
    sgd_momentum_step(h, g, state, lr, mu);
    for (std::size_t l = 0; l < h.layers.size(); ++l) {
        for (std::size_t i = 0; i < h.layers[l].weights.size(); ++i)
            CHECK(start.layers[l].weights[i] - h.layers[l].weights[i] == doctest::Approx(lr * 0.3 * (2 + mu)));
        for (std::size_t i = 0; i < h.layers[l].bias.size(); ++i)
            CHECK(start.layers[l].bias[i] - h.layers[l].bias[i] == doctest::Approx(lr * -0.2 * (2 + mu)));
    }

    auto other = zero_head(MetricKind::Overall, 4, {2});
    CHECK_THROWS_AS(sgd_momentum_step(other, g, state, lr, mu), DimensionError);
}

TEST_CASE("training is deterministic and records one loss per epoch") {
    Rng rng(3);
    std::vector<TrainExample> data;
    for (int i = 0; i < 20; ++i) data.push_back({random_vector(rng, 6), rng.uniform01()});
    TrainConfig config;
    config.epochs = 8;
    config.seed = 7;
    const auto head = init_head(MetricKind::Narrative, 6, 7, {5, 4});
    const auto a = train(head, data, config);
    const auto b = train(head, data, config);
    CHECK(a.head == b.head);
    CHECK(a.loss_history == b.loss_history);
    CHECK(a.loss_history.size() == 8);

    config.seed = 8;
    CHECK(train(head, data, config).head != a.head);

    std::size_t steps = 0;
    train(head, data, config, [&](const RegressionHead&, std::size_t step) { CHECK(step == steps++); });
    CHECK(steps == 8 * data.size());
}

TEST_CASE("constant target is learned") {
    Rng rng(12);
    std::vector<TrainExample> data;
    for (int i = 0; i < 16; ++i) data.push_back({random_vector(rng, 4), 0.8});
    TrainConfig config;
    config.epochs = 200;
    config.seed = 1;
    const auto result = train(init_head(MetricKind::Overall, 4, 1, {6, 4}), data, config);
    CHECK(result.loss_history.back() < 0.05);
    CHECK(result.loss_history.back() < result.loss_history.front());
}

TEST_CASE("training config is validated") {
    const auto head = zero_head(MetricKind::Overall, 2, {2});
    const std::vector<TrainExample> data{{{1, 2}, 0.5}};
    TrainConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(train(head, data, bad), RangeError);
    bad = {};
    bad.momentum = 1.0;
    CHECK_THROWS_AS(train(head, data, bad), RangeError);
    bad = {};
    bad.epochs = 0;
    CHECK_THROWS_AS(train(head, data, bad), RangeError);
    CHECK_THROWS_AS(train(head, std::vector<TrainExample>{}, TrainConfig{}), EmptyDatasetError);
}

TEST_CASE("checkpoints round-trip exactly") {
    TempDir dir;
    Rng rng(5);
    std::vector<TrainExample> data;
    for (int i = 0; i < 8; ++i) data.push_back({random_vector(rng, 10), rng.uniform01()});
    TrainConfig config;
    config.seed = 3;
    auto result = train(init_head(MetricKind::Geography, 10, 3, {7, 5}), data, config);
    const Checkpoint cp{result.head, config, result.loss_history};
    save_checkpoint(dir / "geography.json", cp);
    const auto back = load_checkpoint(dir / "geography.json");
    CHECK(back.head == cp.head);
    CHECK(back.config == cp.config);
    CHECK(back.loss_history == cp.loss_history);

    const auto x = random_vector(rng, 10);
    CHECK(forward(back.head, x) == forward(cp.head, x));
}

TEST_CASE("bad checkpoints are reported") {
    TempDir dir;
    CHECK_THROWS_AS(load_checkpoint(dir / "none.json"), NotFoundError);
    write_file(dir / "junk.json", "{not json");
    CHECK_THROWS_AS(load_checkpoint(dir / "junk.json"), FormatError);
    write_file(dir / "shape.json",
               R"({"metric":"time","input_dim":2,"layer_sizes":[1],"layers":[{"inputs":2,"outputs":1,"weights":[1],"bias":[0]}],"train_config":{"learning_rate":0.01,"momentum":0.9,"epochs":1,"seed":0,"shuffle":true},"loss_history":[]})");
    CHECK_THROWS_AS(load_checkpoint(dir / "shape.json"), FormatError);
}

TEST_CASE("model set keeps heads per metric") {
    TempDir dir;
    MetricModelSet set;
    const auto h = init_head(MetricKind::Time, 4, 1, {3});
    set.set_head(MetricKind::Time, h);
    CHECK(set.head(MetricKind::Time) == h);
    CHECK_THROWS_AS(set.set_head(MetricKind::Style, h), ArgumentError);
    CHECK_THROWS_AS(MetricModelSet::load(dir.path()), NotFoundError);

    for (MetricKind m : kAllMetrics)
        save_checkpoint(dir / (std::string(metric_name(m)) + ".json"), {init_head(m, 4, 9, {3}), {}, {}});
    const auto loaded = MetricModelSet::load(dir.path());
    for (MetricKind m : kAllMetrics) CHECK(loaded.head(m) == init_head(m, 4, 9, {3}));
}

}
