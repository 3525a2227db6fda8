#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "newsim/errors.hpp"

namespace newsim::corpus {

struct PolitenessConfig {
    std::chrono::milliseconds min_host_delay{1000}; // between requests to one host
    int max_retries = 2;                            // extra attempts after the first
    std::chrono::milliseconds retry_backoff{500};
    std::chrono::milliseconds timeout{10000}; // connect and read
    std::size_t max_concurrency = 4;
    std::string user_agent = "newsim/0.1";
    // Base for relative "file:" URLs (local fixtures).
    std::filesystem::path file_base = ".";
};

class FetchError : public Error {
public:
    enum class Kind { HttpStatus, Timeout, Connection, InvalidUrl, File };

    FetchError(std::string url, Kind kind, int status, const std::string& detail);

    const std::string& url() const noexcept { return url_; }
    Kind kind() const noexcept { return kind_; }
    int status() const noexcept { return status_; } // HTTP status, 0 if none

private:
    std::string url_;
    Kind kind_;
    int status_;
};

struct FetchOutcome {
    std::string url;
    std::optional<std::string> body;
    std::optional<FetchError> error;

    bool ok() const { return body.has_value(); }
};

// Downloads pages with per-host serialization and a minimum delay between
// requests to the same host. Accepts http://, https:// and file: URLs.
// Thread-safe.
class Fetcher {
public:
    explicit Fetcher(PolitenessConfig config = {});
    ~Fetcher();

    Fetcher(const Fetcher&) = delete;
    Fetcher& operator=(const Fetcher&) = delete;

    // Response body on 2xx. Throws FetchError after the retry budget is spent.
    std::string fetch(const std::string& url);

    // Fetches with at most max_concurrency requests in flight. Outcomes are in
    // the order of urls; failures do not abort the batch.
    std::vector<FetchOutcome> fetch_all(const std::vector<std::string>& urls);

    const PolitenessConfig& config() const noexcept { return config_; }

private:
    struct HostSlot;
    HostSlot& slot_for(const std::string& host);
    std::string fetch_http(const std::string& url);
    std::string fetch_file(const std::string& url) const;

    PolitenessConfig config_;
    std::mutex slots_mutex_;
    std::map<std::string, std::unique_ptr<HostSlot>> slots_;
};

} // namespace newsim::corpus
