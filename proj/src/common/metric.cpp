#include "newsim/metric.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace newsim {

std::optional<MetricKind> parse_metric(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (MetricKind m : kAllMetrics)
        if (metric_name(m) == lowered) return m;
    return std::nullopt;
}

} // namespace newsim
