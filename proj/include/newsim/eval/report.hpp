#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "newsim/metric.hpp"

namespace newsim::eval {

enum class Approach { BaselineCosine, Ffn };

inline constexpr std::array<Approach, 2> kAllApproaches{Approach::BaselineCosine, Approach::Ffn};

constexpr std::string_view approach_name(Approach a) {
    return a == Approach::BaselineCosine ? "baseline-cosine" : "ffn";
}

std::optional<Approach> parse_approach(std::string_view name);

inline const std::vector<double> kDefaultTolerances{0.2, 0.33, 0.5};

struct ScoredSeries {
    std::vector<double> preds;
    std::vector<double> targets;
};

using ScoredSets = std::map<std::pair<MetricKind, Approach>, ScoredSeries>;

struct EvalCell {
    MetricKind metric = MetricKind::Overall;
    Approach approach = Approach::Ffn;
    double mse = 0.0;
    std::vector<std::pair<double, double>> accuracies; // (tolerance, accuracy)
    std::optional<double> pearson;                     // empty when a series is constant
    std::size_t n = 0;
    double constant_mse = 0.0; // MSE of predicting mean(targets)

    bool operator==(const EvalCell&) const = default;
};

struct EvalReport {
    std::vector<double> tolerances;
    std::vector<EvalCell> cells; // metric-major, baseline before ffn

    const EvalCell& cell(MetricKind m, Approach a) const;
    bool operator==(const EvalReport&) const = default;
};

// Fills every (metric, approach) cell. Throws IncompleteError naming the cell
// when its series is missing or has fewer than two pairs.
EvalReport build_report(const ScoredSets& scored, const std::vector<double>& tolerances = kDefaultTolerances);

// "acc@0.33" style key.
std::string accuracy_key(double tol);

void to_json(nlohmann::json& j, const EvalReport& r);
void from_json(const nlohmann::json& j, EvalReport& r);

// Aligned plain-text table.
std::string render_table(const EvalReport& r);

} // namespace newsim::eval
