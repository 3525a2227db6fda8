#pragma once

#include <span>

#include "newsim/model/train.hpp"

namespace newsim::eval {

using model::mse_loss;

// Fraction of i with |preds[i] - targets[i]| < tol (strict). Throws
// ArgumentError on empty or unequal input, RangeError unless tol > 0.
double tolerance_accuracy(std::span<const double> preds, std::span<const double> targets, double tol);

// Sample Pearson correlation. Throws ArgumentError for n < 2 or unequal
// lengths and DegenerateError if either series has zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> xs);

// Population variance; equals the MSE of always predicting the mean.
double population_variance(std::span<const double> xs);

} // namespace newsim::eval
