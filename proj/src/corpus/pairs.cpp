#include "newsim/corpus/pairs.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "newsim/errors.hpp"
#include "newsim/text.hpp"

namespace newsim::corpus {
namespace {

constexpr double kMinRaw = 1.0;
constexpr double kMaxRaw = 4.0;

std::string lower(std::string_view s) {
    std::string out(text::trim(s));
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::optional<double> parse_double(std::string_view field) {
    field = text::trim(field);
    if (field.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
    return v;
}

} // namespace

double normalize_score(double raw) {
    if (!(raw >= kMinRaw && raw <= kMaxRaw))
        throw RangeError("raw score outside [1, 4]: " + std::to_string(raw));
    return (kMaxRaw - raw) / (kMaxRaw - kMinRaw);
}

double denormalize_score(double score) { return kMaxRaw - (kMaxRaw - kMinRaw) * score; }

NormalizedPair normalize(const PairRecord& pair) {
    NormalizedPair out{pair.pair_id, {}};
    for (MetricKind m : kAllMetrics)
        out.scores[metric_index(m)] = normalize_score(pair.raw_scores[metric_index(m)]);
    return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view content) {
    if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        // A lone empty field is a blank line.
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r') {
            if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
            end_row();
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (quoted) throw FormatError("CSV ends inside a quoted field");
    if (field_started || !row.empty()) end_row();
    return rows;
}

LoadResult load_pairs(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read pairs file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto rows = parse_csv(buffer.str());
    if (rows.empty()) throw FormatError("pairs file has no header row: " + path.string());

    const auto& header = rows.front();
    auto find_column = [&](const std::vector<std::string>& names) -> std::optional<std::size_t> {
        for (std::size_t c = 0; c < header.size(); ++c)
            for (const auto& name : names)
                if (lower(header[c]) == lower(name)) return c;
        return std::nullopt;
    };
    auto aliases_for = [&](const std::string& key) {
        const auto it = options.aliases.find(key);
        return it == options.aliases.end() ? std::vector<std::string>{key} : it->second;
    };
    auto require = [&](const std::string& key) {
        const auto col = find_column(aliases_for(key));
        if (!col) throw FormatError("pairs header lacks column '" + key + "' in " + path.string());
        return *col;
    };

    const std::size_t pair_col = require("pair_id");
    const std::size_t url1_col = require("url1");
    const std::size_t url2_col = require("url2");
    const std::size_t lang1_col = require("lang1");
    const std::size_t lang2_col = require("lang2");
    const auto id1_col = find_column(aliases_for("id1"));
    const auto id2_col = find_column(aliases_for("id2"));
    if (id1_col.has_value() != id2_col.has_value())
        throw FormatError("pairs header must have both id1 and id2 or neither");
    PerMetric<std::size_t> metric_cols{};
    for (MetricKind m : kAllMetrics) metric_cols[metric_index(m)] = require(std::string(metric_name(m)));

    LoadResult result;
    auto& report = result.report;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        ++report.rows;
        auto cell = [&](std::size_t c) -> std::string {
            return c < row.size() ? std::string(text::trim(row[c])) : std::string{};
        };

        PairRecord pair;
        pair.pair_id = cell(pair_col);
        pair.url1 = cell(url1_col);
        pair.url2 = cell(url2_col);
        if (id1_col) {
            pair.article1_id = cell(*id1_col);
            pair.article2_id = cell(*id2_col);
        } else {
            const auto sep = pair.pair_id.find('_');
            if (sep == std::string::npos)
                throw FormatError("row " + std::to_string(r + 1) +
                                  ": no id columns and pair_id is not '<id1>_<id2>'");
            pair.article1_id = pair.pair_id.substr(0, sep);
            pair.article2_id = pair.pair_id.substr(sep + 1);
        }
        pair.lang_pair = lower(cell(lang1_col)) + "-" + lower(cell(lang2_col));

        bool missing = false;
        bool invalid = false;
        for (MetricKind m : kAllMetrics) {
            const std::string raw = cell(metric_cols[metric_index(m)]);
            if (raw.empty()) {
                missing = true;
                break;
            }
            const auto v = parse_double(raw);
            if (!v || !std::isfinite(*v) || *v < kMinRaw || *v > kMaxRaw) {
                invalid = true;
                break;
            }
            pair.raw_scores[metric_index(m)] = *v;
        }
        if (missing) {
            ++report.skipped_missing_score;
            continue;
        }
        if (invalid) {
            ++report.skipped_invalid_score;
            continue;
        }
        if (options.is_available &&
            (!options.is_available(pair.article1_id) || !options.is_available(pair.article2_id))) {
            ++report.skipped_unavailable;
            continue;
        }
        ++report.language_histogram[pair.lang_pair];
        result.pairs.push_back(std::move(pair));
    }
    report.loaded = result.pairs.size();
    return result;
}

} // namespace newsim::corpus
