#include "newsim/embedding/cache_file.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"
#include "newsim/text.hpp"

namespace newsim::embedding {

void write_cache(const std::filesystem::path& path, const EmbeddingCache& cache) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write embedding cache " + path.string());
    out << "dim=" << cache.dim << " provider=" << cache.provider << '\n';
    char buf[32];
    for (const auto& [key, vec] : cache.entries) {
        if (vec.dim() != cache.dim)
            throw DimensionError("cache entry " + key + " has dim " + std::to_string(vec.dim()));
        out << key << '\t';
        for (std::size_t i = 0; i < vec.dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%.9g", vec[i]);
            if (i) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

EmbeddingCache read_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("embedding cache not found: " + path.string());

    EmbeddingCache cache;
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        const std::string prefix = "dim=";
        const auto space = line.find(" provider=");
        if (line.rfind(prefix, 0) != 0 || space == std::string::npos)
            throw FormatError(path.string() + ": header must be 'dim=<d> provider=<name>'");
        const std::string_view dim_text = std::string_view(line).substr(prefix.size(), space - prefix.size());
        const auto [ptr, ec] = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), cache.dim);
        if (ec != std::errc{} || ptr != dim_text.data() + dim_text.size() || cache.dim == 0)
            throw FormatError(path.string() + ": bad dim in header");
        cache.provider = line.substr(space + std::string(" provider=").size());
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto where = path.string() + ":" + std::to_string(lineno);
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) throw FormatError(where + ": expected <key><TAB><values>");
        std::string key = line.substr(0, tab);
        const auto fields = text::split_whitespace(std::string_view(line).substr(tab + 1));
        if (fields.size() != cache.dim)
            throw FormatError(where + ": row has " + std::to_string(fields.size()) +
                              " values, header says " + std::to_string(cache.dim));
        std::vector<double> values(cache.dim);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto f = fields[i];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw FormatError(where + ": bad number '" + std::string(f) + "'");
        }
        try {
            cache.entries.insert_or_assign(std::move(key), EmbeddingVector(std::move(values)));
        } catch (const Error& e) {
            throw FormatError(where + ": " + e.what());
        }
    }
    return cache;
}

void write_export_requests(const std::filesystem::path& path, std::vector<ExportRequest> requests) {
    std::sort(requests.begin(), requests.end(),
              [](const ExportRequest& a, const ExportRequest& b) { return a.key < b.key; });
    requests.erase(std::unique(requests.begin(), requests.end(),
                               [](const ExportRequest& a, const ExportRequest& b) { return a.key == b.key; }),
                   requests.end());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write export requests " + path.string());
    for (const auto& r : requests) out << nlohmann::json{{"key", r.key}, {"text", r.text}}.dump() << '\n';
}

std::vector<ExportRequest> read_export_requests(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("export requests not found: " + path.string());
    std::vector<ExportRequest> out;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            out.push_back({j.at("key").get<std::string>(), j.at("text").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }
    return out;
}

} // namespace newsim::embedding
