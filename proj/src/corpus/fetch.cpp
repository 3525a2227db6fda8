#include "newsim/corpus/fetch.hpp"

#include <atomic>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>

namespace newsim::corpus {
namespace {

using Clock = std::chrono::steady_clock;

struct ParsedUrl {
    std::string scheme_host_port; // "http://example.com:8080"
    std::string host;
    std::string path; // path + query, never empty
};

std::optional<ParsedUrl> parse_http_url(const std::string& url) {
    static const std::regex re(R"(^(https?)://([^/:?#]+)(:[0-9]{1,5})?([^#]*)(#.*)?$)",
                               std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re)) return std::nullopt;
    ParsedUrl out;
    out.host = m[2].str();
    out.scheme_host_port = m[1].str() + "://" + out.host + m[3].str();
    out.path = m[4].str().empty() ? "/" : m[4].str();
    if (out.path.front() == '?') out.path.insert(out.path.begin(), '/');
    return out;
}

const char* kind_name(FetchError::Kind kind) {
    switch (kind) {
    case FetchError::Kind::HttpStatus: return "http status";
    case FetchError::Kind::Timeout: return "timeout";
    case FetchError::Kind::Connection: return "connection";
    case FetchError::Kind::InvalidUrl: return "invalid url";
    case FetchError::Kind::File: return "file";
    }
    return "unknown";
}

} // namespace

FetchError::FetchError(std::string url, Kind kind, int status, const std::string& detail)
    : Error("fetch " + url + " failed (" + kind_name(kind) +
            (status ? " " + std::to_string(status) : std::string{}) + "): " + detail),
      url_(std::move(url)), kind_(kind), status_(status) {}

struct Fetcher::HostSlot {
    std::mutex mutex;
    std::optional<Clock::time_point> last_request;
};

Fetcher::Fetcher(PolitenessConfig config) : config_(std::move(config)) {
    if (config_.max_concurrency == 0) config_.max_concurrency = 1;
    if (config_.max_retries < 0) config_.max_retries = 0;
}

Fetcher::~Fetcher() = default;

Fetcher::HostSlot& Fetcher::slot_for(const std::string& host) {
    std::lock_guard lock(slots_mutex_);
    auto& slot = slots_[host];
    if (!slot) slot = std::make_unique<HostSlot>();
    return *slot;
}

std::string Fetcher::fetch(const std::string& url) {
    if (url.rfind("file:", 0) == 0) return fetch_file(url);
    return fetch_http(url);
}

std::string Fetcher::fetch_file(const std::string& url) const {
    std::string rest = url.substr(5);
    if (rest.rfind("//", 0) == 0) rest = rest.substr(2); // file:///abs -> /abs
    std::filesystem::path p(rest);
    if (p.is_relative()) p = config_.file_base / p;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FetchError(url, FetchError::Kind::File, 0, "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string Fetcher::fetch_http(const std::string& url) {
    const auto parsed = parse_http_url(url);
    if (!parsed) throw FetchError(url, FetchError::Kind::InvalidUrl, 0, "not an http(s) URL");

    HostSlot& slot = slot_for(parsed->host);
    std::lock_guard host_lock(slot.mutex);

    std::optional<FetchError> last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config_.retry_backoff * attempt);
        if (slot.last_request) {
            const auto ready = *slot.last_request + config_.min_host_delay;
            if (Clock::now() < ready) std::this_thread::sleep_until(ready);
        }
        slot.last_request = Clock::now();

        httplib::Client client(parsed->scheme_host_port);
        client.set_follow_location(true);
        client.set_connection_timeout(config_.timeout);
        client.set_read_timeout(config_.timeout);
        client.set_write_timeout(config_.timeout);
        const httplib::Headers headers{{"User-Agent", config_.user_agent}};

        auto res = client.Get(parsed->path, headers);
        if (!res) {
            const auto err = res.error();
            const auto kind = err == httplib::Error::ConnectionTimeout
                                  ? FetchError::Kind::Timeout
                                  : FetchError::Kind::Connection;
            last_error.emplace(url, kind, 0, httplib::to_string(err));
            continue;
        }
        if (res->status >= 200 && res->status < 300) return res->body;
        last_error.emplace(url, FetchError::Kind::HttpStatus, res->status, "non-2xx response");
    }
    throw *last_error;
}

std::vector<FetchOutcome> Fetcher::fetch_all(const std::vector<std::string>& urls) {
    std::vector<FetchOutcome> outcomes(urls.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < urls.size(); i = next++) {
            outcomes[i].url = urls[i];
            try {
                outcomes[i].body = fetch(urls[i]);
            } catch (const FetchError& e) {
                outcomes[i].error = e;
            }
        }
    };
    {
        const std::size_t n = std::min(config_.max_concurrency, urls.size());
        std::vector<std::jthread> threads;
        threads.reserve(n);
        for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
    }
    return outcomes;
}

} // namespace newsim::corpus
