#include "newsim/eval/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/eval/metrics.hpp"

namespace newsim::eval {

std::optional<Approach> parse_approach(std::string_view name) {
    for (Approach a : kAllApproaches)
        if (approach_name(a) == name) return a;
    return std::nullopt;
}

std::string accuracy_key(double tol) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "acc@%g", tol);
    return buf;
}

const EvalCell& EvalReport::cell(MetricKind m, Approach a) const {
    for (const auto& c : cells)
        if (c.metric == m && c.approach == a) return c;
    throw IncompleteError("report has no cell " + std::string(metric_name(m)) + "/" +
                          std::string(approach_name(a)));
}

EvalReport build_report(const ScoredSets& scored, const std::vector<double>& tolerances) {
    EvalReport report;
    report.tolerances = tolerances;
    for (MetricKind m : kAllMetrics) {
        for (Approach a : kAllApproaches) {
            const std::string cell_name = std::string(metric_name(m)) + "/" + std::string(approach_name(a));
            const auto it = scored.find({m, a});
            if (it == scored.end()) throw IncompleteError("no scored pairs for cell " + cell_name);
            const auto& series = it->second;
            if (series.preds.size() != series.targets.size())
                throw IncompleteError("cell " + cell_name + " has mismatched predictions and targets");
            if (series.preds.size() < 2)
                throw IncompleteError("cell " + cell_name + " needs at least two scored pairs");

            EvalCell cell;
            cell.metric = m;
            cell.approach = a;
            cell.n = series.preds.size();
            cell.mse = mse_loss(series.preds, series.targets);
            for (double tol : tolerances)
                cell.accuracies.emplace_back(tol, tolerance_accuracy(series.preds, series.targets, tol));
            try {
                cell.pearson = pearson(series.preds, series.targets);
            } catch (const DegenerateError&) {
                cell.pearson.reset();
            }
            cell.constant_mse = population_variance(series.targets);
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

void to_json(nlohmann::json& j, const EvalReport& r) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells) {
        nlohmann::json cj{{"metric", metric_name(c.metric)},
                          {"approach", approach_name(c.approach)},
                          {"n", c.n},
                          {"mse", c.mse},
                          {"constant_mse", c.constant_mse}};
        for (const auto& [tol, acc] : c.accuracies) cj[accuracy_key(tol)] = acc;
        cj["pearson"] = c.pearson ? nlohmann::json(*c.pearson) : nlohmann::json(nullptr);
        cells.push_back(std::move(cj));
    }
    j = nlohmann::json{{"tolerances", r.tolerances}, {"cells", cells}};
}

void from_json(const nlohmann::json& j, EvalReport& r) {
    r.tolerances = j.at("tolerances").get<std::vector<double>>();
    r.cells.clear();
    for (const auto& cj : j.at("cells")) {
        EvalCell c;
        const auto metric = parse_metric(cj.at("metric").get<std::string>());
        const auto approach = parse_approach(cj.at("approach").get<std::string>());
        if (!metric || !approach) throw FormatError("report cell with unknown metric or approach");
        c.metric = *metric;
        c.approach = *approach;
        c.n = cj.at("n").get<std::size_t>();
        c.mse = cj.at("mse").get<double>();
        c.constant_mse = cj.at("constant_mse").get<double>();
        for (double tol : r.tolerances) c.accuracies.emplace_back(tol, cj.at(accuracy_key(tol)).get<double>());
        if (!cj.at("pearson").is_null()) c.pearson = cj.at("pearson").get<double>();
        r.cells.push_back(std::move(c));
    }
}

std::string render_table(const EvalReport& r) {
    std::vector<std::string> header{"metric", "approach", "n", "mse", "const_mse"};
    for (double tol : r.tolerances) header.push_back(accuracy_key(tol));
    header.push_back("pearson");

    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        return std::string(buf);
    };
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : r.cells) {
        std::vector<std::string> row{std::string(metric_name(c.metric)), std::string(approach_name(c.approach)),
                                     std::to_string(c.n), fmt(c.mse), fmt(c.constant_mse)};
        for (const auto& [tol, acc] : c.accuracies) row.push_back(fmt(acc));
        row.push_back(c.pearson ? fmt(*c.pearson) : "n/a");
        rows.push_back(std::move(row));
    }

    std::vector<std::size_t> width(header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
        width[k] = header[k].size();
        for (const auto& row : rows) width[k] = std::max(width[k], row[k].size());
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out << "  ";
            // Text columns left-aligned, numbers right-aligned.
            if (k < 2) out << std::left; else out << std::right;
            out << std::setw(static_cast<int>(width[k])) << row[k];
        }
        out << '\n';
    };
    emit(header);
    std::size_t total = 0;
    for (auto w : width) total += w;
    out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    for (const auto& row : rows) emit(row);
    return out.str();
}

} // namespace newsim::eval
