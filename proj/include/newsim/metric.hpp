#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace newsim {

// The seven rated similarity dimensions of a news pair.
enum class MetricKind { Geography, Entities, Time, Narrative, Style, Tone, Overall };

inline constexpr std::array<MetricKind, 7> kAllMetrics{
    MetricKind::Geography, MetricKind::Entities, MetricKind::Time,  MetricKind::Narrative,
    MetricKind::Style,     MetricKind::Tone,     MetricKind::Overall};

constexpr std::string_view metric_name(MetricKind m) {
    switch (m) {
    case MetricKind::Geography: return "geography";
    case MetricKind::Entities: return "entities";
    case MetricKind::Time: return "time";
    case MetricKind::Narrative: return "narrative";
    case MetricKind::Style: return "style";
    case MetricKind::Tone: return "tone";
    case MetricKind::Overall: return "overall";
    }
    return "";
}

constexpr std::size_t metric_index(MetricKind m) { return static_cast<std::size_t>(m); }

// Accepts the canonical lowercase names; case-insensitive for ASCII.
std::optional<MetricKind> parse_metric(std::string_view name);

// Entity-based metrics fall back to full text when extraction is empty.
constexpr bool is_entity_metric(MetricKind m) {
    return m == MetricKind::Geography || m == MetricKind::Entities || m == MetricKind::Time;
}

// Fixed-size map keyed by MetricKind.
template <typename T>
using PerMetric = std::array<T, kAllMetrics.size()>;

} // namespace newsim
