#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace newsim::corpus {

inline constexpr double kDefaultTrainRatio = 0.67;

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> test;
    std::uint64_t seed = 0;
    double ratio = kDefaultTrainRatio;

    bool operator==(const DatasetSplit&) const = default;
};

// Seeded shuffle of the ids; the first floor(ratio * N) go to train.
// Throws RangeError unless 0 < ratio < 1, EmptyDatasetError for N = 0.
DatasetSplit split_dataset(const std::vector<std::string>& pair_ids, double ratio,
                           std::uint64_t seed);

std::size_t train_size(std::size_t n, double ratio);

void to_json(nlohmann::json& j, const DatasetSplit& s);
void from_json(const nlohmann::json& j, DatasetSplit& s);

} // namespace newsim::corpus
