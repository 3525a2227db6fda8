#include "newsim/pipeline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "newsim/errors.hpp"

namespace newsim::pipeline {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + key + "'");
}

fs::path resolve(const fs::path& base, const fs::path& p) {
    if (p.empty() || p.is_absolute()) return p;
    return (base / p).lexically_normal();
}

// "cache:<path>" and "gazetteer:<dir>" carry a path that is resolved too.
std::string resolve_spec(const fs::path& base, const std::string& spec, const std::string& prefix) {
    if (spec.rfind(prefix, 0) != 0) return spec;
    return prefix + resolve(base, spec.substr(prefix.size())).string();
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + where + key + "' is missing or has the wrong type");
    }
}

} // namespace

RunConfig parse_config(const std::string& json_text, const fs::path& base_dir, const ConfigOverrides& ov) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"pairs_csv", "store_dir", "output_dir", "provider", "stub", "max_tokens", "ner",
                    "remove_stopwords", "split", "train", "tolerances", "junk_markers", "fetch"},
                   "");

    RunConfig c;
    if (j.contains("pairs_csv")) c.pairs_csv = resolve(base_dir, get<std::string>(j, "pairs_csv", ""));
    if (j.contains("store_dir")) c.store_dir = resolve(base_dir, get<std::string>(j, "store_dir", ""));
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, get<std::string>(j, "output_dir", ""));
    if (j.contains("provider")) c.provider = get<std::string>(j, "provider", "");
    if (j.contains("stub")) {
        const auto& s = j["stub"];
        reject_unknown(s, {"dim", "seed"}, "stub.");
        if (s.contains("dim")) c.stub_dim = get<std::size_t>(s, "dim", "stub.");
        if (s.contains("seed")) c.stub_seed = get<std::uint64_t>(s, "seed", "stub.");
    }
    if (j.contains("max_tokens")) c.max_tokens = get<std::size_t>(j, "max_tokens", "");
    if (j.contains("ner")) c.ner = get<std::string>(j, "ner", "");
    if (j.contains("remove_stopwords")) c.remove_stopwords = get<bool>(j, "remove_stopwords", "");
    if (j.contains("split")) {
        const auto& s = j["split"];
        reject_unknown(s, {"ratio", "seed"}, "split.");
        if (s.contains("ratio")) c.split_ratio = get<double>(s, "ratio", "split.");
        if (s.contains("seed")) c.split_seed = get<std::uint64_t>(s, "seed", "split.");
    }
    if (j.contains("train")) {
        const auto& t = j["train"];
        reject_unknown(t, {"learning_rate", "momentum", "epochs", "seed", "shuffle", "hidden"}, "train.");
        if (t.contains("learning_rate")) c.train.learning_rate = get<double>(t, "learning_rate", "train.");
        if (t.contains("momentum")) c.train.momentum = get<double>(t, "momentum", "train.");
        if (t.contains("epochs")) c.train.epochs = get<std::size_t>(t, "epochs", "train.");
        if (t.contains("seed")) c.train_seed = get<std::uint64_t>(t, "seed", "train.");
        if (t.contains("shuffle")) c.train.shuffle = get<bool>(t, "shuffle", "train.");
        if (t.contains("hidden")) c.hidden = get<std::vector<std::size_t>>(t, "hidden", "train.");
    }
    if (j.contains("tolerances")) c.tolerances = get<std::vector<double>>(j, "tolerances", "");
    if (j.contains("junk_markers")) c.extract.junk_markers = get<std::vector<std::string>>(j, "junk_markers", "");
    if (j.contains("fetch")) {
        const auto& f = j["fetch"];
        reject_unknown(f, {"min_host_delay_ms", "max_retries", "timeout_ms", "max_concurrency", "user_agent"},
                       "fetch.");
        if (f.contains("min_host_delay_ms"))
            c.fetch.min_host_delay = std::chrono::milliseconds(get<std::int64_t>(f, "min_host_delay_ms", "fetch."));
        if (f.contains("max_retries")) c.fetch.max_retries = get<int>(f, "max_retries", "fetch.");
        if (f.contains("timeout_ms"))
            c.fetch.timeout = std::chrono::milliseconds(get<std::int64_t>(f, "timeout_ms", "fetch."));
        if (f.contains("max_concurrency")) c.fetch.max_concurrency = get<std::size_t>(f, "max_concurrency", "fetch.");
        if (f.contains("user_agent")) c.fetch.user_agent = get<std::string>(f, "user_agent", "fetch.");
    }

    if (ov.pairs_csv) c.pairs_csv = *ov.pairs_csv;
    if (ov.store_dir) c.store_dir = *ov.store_dir;
    if (ov.output_dir) c.output_dir = *ov.output_dir;
    if (ov.provider) c.provider = *ov.provider;
    if (ov.epochs) c.train.epochs = *ov.epochs;
    if (ov.split_seed) c.split_seed = *ov.split_seed;
    if (ov.train_seed) c.train_seed = *ov.train_seed;

    c.provider = resolve_spec(base_dir, c.provider, "cache:");
    c.ner = resolve_spec(base_dir, c.ner, "gazetteer:");
    if (c.train_seed) c.train.seed = *c.train_seed;
    if (!c.pairs_csv.empty()) c.fetch.file_base = c.pairs_csv.parent_path();

    if (!(c.split_ratio > 0.0 && c.split_ratio < 1.0)) throw ConfigError("split.ratio must be in (0, 1)");
    if (c.max_tokens == 0) throw ConfigError("max_tokens must be >= 1");
    if (c.stub_dim == 0) throw ConfigError("stub.dim must be >= 1");
    for (double tol : c.tolerances)
        if (!(tol > 0.0)) throw ConfigError("tolerances must be > 0");
    try {
        c.train.validate();
    } catch (const RangeError& e) {
        throw ConfigError(std::string("train: ") + e.what());
    }
    return c;
}

RunConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), fs::absolute(path).parent_path(), overrides);
}

void validate(const RunConfig& c, const std::vector<Requirement>& needs) {
    for (Requirement r : needs) {
        switch (r) {
        case Requirement::Corpus:
            if (c.pairs_csv.empty() || !fs::exists(c.pairs_csv))
                throw ConfigError("pairs_csv does not exist: '" + c.pairs_csv.string() + "'");
            if (c.store_dir.empty() || !fs::is_directory(c.store_dir))
                throw ConfigError("store_dir does not exist: '" + c.store_dir.string() + "'");
            if (c.output_dir.empty()) throw ConfigError("output_dir is not set");
            break;
        case Requirement::Seeds:
            if (!c.split_seed) throw ConfigError("split.seed is required");
            if (!c.train_seed) throw ConfigError("train.seed is required");
            break;
        case Requirement::Provider:
            if (c.provider == "stub") break;
            if (c.provider.rfind("cache:", 0) == 0) {
                if (!fs::exists(c.provider.substr(6)))
                    throw ConfigError("embedding cache does not exist: " + c.provider.substr(6));
                break;
            }
            throw ConfigError("provider must be 'stub' or 'cache:<path>', got '" + c.provider + "'");
        case Requirement::Ner:
            if (c.ner.rfind("gazetteer:", 0) != 0)
                throw ConfigError("ner must be 'gazetteer:<lexicon-dir>', got '" + c.ner + "'");
            if (!fs::is_directory(c.ner.substr(10)))
                throw ConfigError("gazetteer directory does not exist: " + c.ner.substr(10));
            break;
        }
    }
}

std::unique_ptr<embedding::EmbeddingProvider> make_provider(const RunConfig& c) {
    validate(c, {Requirement::Provider});
    if (c.provider == "stub") return std::make_unique<embedding::StubProvider>(c.stub_dim, c.stub_seed, c.max_tokens);
    return std::make_unique<embedding::CacheProvider>(c.provider.substr(6), c.max_tokens);
}

std::unique_ptr<features::NerProvider> make_ner(const RunConfig& c) {
    validate(c, {Requirement::Ner});
    return std::make_unique<features::GazetteerNer>(features::GazetteerNer::load_dir(c.ner.substr(10)));
}

} // namespace newsim::pipeline
