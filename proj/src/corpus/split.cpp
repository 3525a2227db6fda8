#include "newsim/corpus/split.hpp"

#include <cmath>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/random.hpp"

namespace newsim::corpus {

std::size_t train_size(std::size_t n, double ratio) {
    // The epsilon absorbs representation error in ratio (0.29 * 100 -> 28.999...).
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

DatasetSplit split_dataset(const std::vector<std::string>& pair_ids, double ratio,
                           std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw RangeError("split ratio must be in (0, 1)");
    if (pair_ids.empty()) throw EmptyDatasetError("cannot split an empty dataset");
    std::unordered_set<std::string> seen;
    for (const auto& id : pair_ids)
        if (!seen.insert(id).second) throw ArgumentError("duplicate pair id in split input: " + id);

    std::vector<std::string> order = pair_ids;
    Rng rng(seed);
    rng.shuffle(order);

    const std::size_t cut = train_size(order.size(), ratio);
    DatasetSplit split;
    split.seed = seed;
    split.ratio = ratio;
    split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
    split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
    return split;
}

void to_json(nlohmann::json& j, const DatasetSplit& s) {
    j = nlohmann::json{{"seed", s.seed}, {"ratio", s.ratio}, {"train", s.train}, {"test", s.test}};
}

void from_json(const nlohmann::json& j, DatasetSplit& s) {
    s.seed = j.at("seed").get<std::uint64_t>();
    s.ratio = j.at("ratio").get<double>();
    s.train = j.at("train").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
}

} // namespace newsim::corpus
