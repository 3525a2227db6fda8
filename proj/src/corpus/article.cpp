#include "newsim/corpus/article.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"

namespace newsim::corpus {

namespace fs = std::filesystem;

std::string full_text(const ArticleRecord& article) {
    if (article.title.empty()) return article.body;
    return article.title + "\n" + article.body;
}

std::string format_utc(Timestamp t) {
    const std::time_t tt = t.time_since_epoch().count();
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Timestamp parse_utc(const std::string& s) {
    std::tm tm{};
    char z = 0;
    const int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &tm.tm_year, &tm.tm_mon,
                              &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &z);
    if (n != 7 || z != 'Z') throw FormatError("bad UTC timestamp: " + s);
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    return Timestamp{std::chrono::seconds{timegm(&tm)}};
}

void to_json(nlohmann::json& j, const ArticleRecord& a) {
    j = nlohmann::json{{"id", a.id},
                       {"url", a.url},
                       {"language", a.language},
                       {"title", a.title},
                       {"headings", a.headings},
                       {"body", a.body},
                       {"fetched_at", format_utc(a.fetched_at)}};
}

void from_json(const nlohmann::json& j, ArticleRecord& a) {
    try {
        a.id = j.at("id").get<std::string>();
        a.url = j.at("url").get<std::string>();
        a.language = j.at("language").get<std::string>();
        a.title = j.at("title").get<std::string>();
        a.headings = j.at("headings").get<std::vector<std::string>>();
        a.body = j.at("body").get<std::string>();
        a.fetched_at = parse_utc(j.at("fetched_at").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("article JSON: ") + e.what());
    }
}

ArticleStore::ArticleStore(fs::path dir) : dir_(std::move(dir)) {}

fs::path ArticleStore::path_for(const std::string& id) const {
    if (id.empty() || id == "." || id == ".." || id.find_first_of("/\\") != std::string::npos)
        throw ArgumentError("article id not usable as a file name: '" + id + "'");
    return dir_ / (id + ".json");
}

void ArticleStore::store(const ArticleRecord& article) const {
    fs::create_directories(dir_);
    const fs::path target = path_for(article.id);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << nlohmann::json(article).dump(2) << '\n';
    }
    fs::rename(tmp, target);
}

ArticleRecord ArticleStore::load(const std::string& id) const {
    const fs::path p = path_for(id);
    std::ifstream in(p, std::ios::binary);
    if (!in) throw NotFoundError("article not in store: " + id);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
    return j.get<ArticleRecord>();
}

bool ArticleStore::contains(const std::string& id) const { return fs::exists(path_for(id)); }

std::vector<std::string> ArticleStore::ids() const {
    std::vector<std::string> out;
    if (!fs::exists(dir_)) return out;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            out.push_back(entry.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace newsim::corpus
