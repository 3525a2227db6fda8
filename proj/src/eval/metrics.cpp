#include "newsim/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "newsim/errors.hpp"

namespace newsim::eval {

double tolerance_accuracy(std::span<const double> preds, std::span<const double> targets, double tol) {
    if (preds.size() != targets.size()) throw ArgumentError("tolerance_accuracy: length mismatch");
    if (preds.empty()) throw ArgumentError("tolerance_accuracy: empty input");
    if (!(tol > 0.0)) throw RangeError("tolerance must be > 0");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (std::abs(preds[i] - targets[i]) < tol) ++hits;
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw ArgumentError("mean of an empty series");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double population_variance(std::span<const double> xs) {
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size());
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ArgumentError("pearson: length mismatch");
    if (xs.size() < 2) throw ArgumentError("pearson needs at least two points");
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateError("pearson undefined for a constant series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

} // namespace newsim::eval
