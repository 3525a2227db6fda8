#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace newsim::corpus {

using Timestamp = std::chrono::sys_seconds;

// One cleaned news article. body is never empty.
struct ArticleRecord {
    std::string id;
    std::string url;
    std::string language; // ISO-639-1
    std::string title;
    std::vector<std::string> headings;
    std::string body;
    Timestamp fetched_at{};

    bool operator==(const ArticleRecord&) const = default;
};

// Title and body as a single text, separated by a newline when both exist.
std::string full_text(const ArticleRecord& article);

std::string format_utc(Timestamp t);      // "YYYY-MM-DDTHH:MM:SSZ"
Timestamp parse_utc(const std::string& s); // throws FormatError

void to_json(nlohmann::json& j, const ArticleRecord& a);
void from_json(const nlohmann::json& j, ArticleRecord& a);

// Directory of <id>.json files. Writes replace existing files atomically.
class ArticleStore {
public:
    explicit ArticleStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    void store(const ArticleRecord& article) const;
    ArticleRecord load(const std::string& id) const; // NotFoundError if absent
    bool contains(const std::string& id) const;
    std::filesystem::path path_for(const std::string& id) const;

    // Ids of every stored article, sorted.
    std::vector<std::string> ids() const;

private:
    std::filesystem::path dir_;
};

} // namespace newsim::corpus
