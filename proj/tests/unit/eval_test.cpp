#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/eval/metrics.hpp"
#include "newsim/eval/report.hpp"
#include "newsim/random.hpp"

using namespace newsim;
using namespace newsim::eval;
using V = std::vector<double>;

namespace {

ScoredSets complete_sets(Rng& rng, std::size_t n) {
    ScoredSets sets;
    for (MetricKind m : kAllMetrics)
        for (Approach a : kAllApproaches) {
            auto& s = sets[{m, a}];
            for (std::size_t i = 0; i < n; ++i) {
                s.preds.push_back(rng.uniform01());
                s.targets.push_back(rng.uniform01());
            }
        }
    return sets;
}

} // namespace

TEST_SUITE("eval") {

TEST_CASE("tolerance accuracy") {
    CHECK(tolerance_accuracy(V{0.5, 0.9, 0.1}, V{0.45, 0.2, 0.15}, 0.33) == doctest::Approx(2.0 / 3.0));
    CHECK(tolerance_accuracy(V{0.1, 0.7}, V{0.1, 0.7}, 1e-9) == 1.0);
    CHECK(tolerance_accuracy(V{0.5}, V{0.25}, 0.25) == 0.0); // boundary is not a hit
    CHECK_THROWS_AS(tolerance_accuracy(V{}, V{}, 0.2), ArgumentError);
    CHECK_THROWS_AS(tolerance_accuracy(V{1}, V{1, 2}, 0.2), ArgumentError);
    CHECK_THROWS_AS(tolerance_accuracy(V{1}, V{1}, 0.0), RangeError);
}

TEST_CASE("tolerance accuracy is nondecreasing in the tolerance") {
    Rng rng(8);
    for (int t = 0; t < 100; ++t) {
        V p(20), y(20);
        for (auto& x : p) x = rng.uniform01();
        for (auto& x : y) x = rng.uniform01();
        double last = 0.0;
        for (double tol = 0.05; tol < 1.2; tol += 0.05) {
            const double acc = tolerance_accuracy(p, y, tol);
            CHECK(acc >= last);
            last = acc;
        }
    }
}

TEST_CASE("pearson correlation") {
    CHECK(pearson(V{1, 2, 3}, V{2, 4, 6}) == doctest::Approx(1.0));
    CHECK(pearson(V{1, 2, 3}, V{6, 4, 2}) == doctest::Approx(-1.0));
    CHECK(pearson(V{1, 2, 3}, V{1, 3, 2}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(pearson(V{1, 1, 1}, V{1, 2, 3}), DegenerateError);
    CHECK_THROWS_AS(pearson(V{1}, V{1}), ArgumentError);
    CHECK_THROWS_AS(pearson(V{1, 2}, V{1}), ArgumentError);
}

TEST_CASE("pearson is affine invariant and sign-flips under negation") {
    Rng rng(13);
    for (int t = 0; t < 100; ++t) {
        V x(15), y(15);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        const double r = pearson(x, y);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        V ax = x, ny = y;
        const double scale = rng.uniform(0.1, 10.0), shift = rng.uniform(-5.0, 5.0);
        for (auto& v : ax) v = scale * v + shift;
        for (auto& v : ny) v = -v;
        CHECK(std::abs(pearson(ax, y) - r) < 1e-9);
        CHECK(std::abs(pearson(x, ny) + r) < 1e-9);
    }
}

TEST_CASE("mean and population variance") {
    CHECK(mean(V{1, 2, 3, 4}) == 2.5);
    CHECK(population_variance(V{1, 2, 3, 4}) == 1.25);
    CHECK_THROWS_AS(mean(V{}), ArgumentError);
}

TEST_CASE("report covers every metric and approach") {
    Rng rng(1);
    const auto report = build_report(complete_sets(rng, 10));
    CHECK(report.cells.size() == 14);
    CHECK(report.tolerances == kDefaultTolerances);
    const auto& cell = report.cell(MetricKind::Style, Approach::Ffn);
    CHECK(cell.n == 10);
    CHECK(cell.accuracies.size() == 3);
    REQUIRE(cell.pearson);
    for (const auto& c : report.cells) {
        CHECK(c.mse >= 0.0);
        for (const auto& [tol, acc] : c.accuracies) {
            CHECK(acc >= 0.0);
            CHECK(acc <= 1.0);
        }
    }
}

TEST_CASE("constant series leave pearson empty") {
    Rng rng(2);
    auto sets = complete_sets(rng, 5);
    sets[{MetricKind::Time, Approach::BaselineCosine}].preds = V(5, 0.0);
    const auto report = build_report(sets);
    CHECK_FALSE(report.cell(MetricKind::Time, Approach::BaselineCosine).pearson);
    const nlohmann::json j = report;
    bool saw_null = false;
    for (const auto& c : j.at("cells"))
        if (c.at("metric") == "time" && c.at("approach") == "baseline-cosine") saw_null = c.at("pearson").is_null();
    CHECK(saw_null);
}

TEST_CASE("missing cells make the report incomplete") {
    Rng rng(3);
    auto sets = complete_sets(rng, 5);
    sets.erase({MetricKind::Tone, Approach::Ffn});
    CHECK_THROWS_AS(build_report(sets), IncompleteError);
}

TEST_CASE("report JSON uses stable keys and round-trips") {
    Rng rng(4);
    const auto report = build_report(complete_sets(rng, 6), {0.2, 0.33, 0.5});
    const nlohmann::json j = report;
    const auto& c = j.at("cells").at(0);
    for (const char* key : {"metric", "approach", "mse", "acc@0.2", "acc@0.33", "acc@0.5", "pearson", "n"}) {
        CAPTURE(key);
        CHECK(c.contains(key));
    }
    CHECK(j.get<EvalReport>() == report);
    CHECK(accuracy_key(0.33) == "acc@0.33");
    CHECK(parse_approach("ffn") == Approach::Ffn);
    CHECK_FALSE(parse_approach("svm"));
}

TEST_CASE("rendered table lists every cell") {
    Rng rng(5);
    const auto table = render_table(build_report(complete_sets(rng, 4)));
    for (MetricKind m : kAllMetrics) CHECK(table.find(std::string(metric_name(m))) != std::string::npos);
    CHECK(table.find("baseline-cosine") != std::string::npos);
}

}
