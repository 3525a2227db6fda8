#include "newsim/embedding/provider.hpp"

#include <algorithm>
#include <cmath>

#include "newsim/embedding/cache_file.hpp"
#include "newsim/errors.hpp"
#include "newsim/hashing.hpp"
#include "newsim/random.hpp"
#include "newsim/text.hpp"

namespace newsim::embedding {

std::string truncate_tokens(std::string_view input, std::size_t max_tokens) {
    if (max_tokens == 0) throw ArgumentError("max_tokens must be >= 1");
    auto tokens = text::split_whitespace(input);
    if (tokens.size() > max_tokens) tokens.resize(max_tokens);
    return text::join(tokens, " ");
}

EmbeddingMatrix embed_bundle(const features::FeatureBundle& bundle, const EmbeddingProvider& provider) {
    if (bundle.spans.empty()) throw ArgumentError("feature bundle has no spans");
    EmbeddingMatrix m;
    for (const auto& span : bundle.spans) {
        EmbeddingVector v = provider.embed(truncate_tokens(span, provider.max_tokens()));
        if (v.dim() != provider.dim())
            throw DimensionError("provider " + provider.name() + " returned dim " +
                                 std::to_string(v.dim()) + ", declared " + std::to_string(provider.dim()));
        m.add_row(std::move(v));
    }
    return m;
}

std::string cache_key(std::string_view text) { return sha256_hex(text); }

StubProvider::StubProvider(std::size_t dim, std::uint64_t seed, std::size_t max_tokens)
    : dim_(dim), seed_(seed), max_tokens_(max_tokens) {
    if (dim_ == 0) throw ArgumentError("stub provider dim must be >= 1");
    if (max_tokens_ == 0) throw ArgumentError("stub provider max_tokens must be >= 1");
}

std::string StubProvider::name() const {
    return "stub-d" + std::to_string(dim_) + "-s" + std::to_string(seed_);
}

std::vector<double> StubProvider::token_vector(std::string_view token) const {
    Rng rng(mix_seed(seed_, fnv1a64(token)));
    std::vector<double> v(dim_);
    double sq = 0.0;
    do {
        sq = 0.0;
        for (double& x : v) {
            x = rng.normal();
            sq += x * x;
        }
    } while (sq == 0.0);
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) x *= inv;
    return v;
}

EmbeddingVector StubProvider::embed(std::string_view input) const {
    std::vector<std::string> tokens;
    for (auto t : text::split_whitespace(input)) tokens.emplace_back(t);
    // Empty text embeds as one reserved token so the output stays unit norm.
    if (tokens.empty()) tokens.emplace_back("\x01<empty>");
    // Sorted accumulation makes the sum exactly independent of token order.
    std::sort(tokens.begin(), tokens.end());

    std::vector<double> sum(dim_, 0.0);
    for (const auto& t : tokens) {
        const auto v = token_vector(t);
        for (std::size_t i = 0; i < dim_; ++i) sum[i] += v[i];
    }
    double sq = 0.0;
    for (double x : sum) sq += x * x;
    if (sq == 0.0) return EmbeddingVector(token_vector("\x01<empty>"));
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : sum) x *= inv;
    return EmbeddingVector(std::move(sum));
}

CacheProvider::CacheProvider(const std::filesystem::path& path, std::size_t max_tokens)
    : max_tokens_(max_tokens) {
    EmbeddingCache cache = read_cache(path);
    name_ = "cache:" + cache.provider;
    dim_ = cache.dim;
    entries_ = std::move(cache.entries);
    if (max_tokens_ == 0) throw ArgumentError("cache provider max_tokens must be >= 1");
}

EmbeddingVector CacheProvider::embed(std::string_view text) const {
    const std::string key = cache_key(text);
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw MissingEmbeddingError(key);
    return it->second;
}

} // namespace newsim::embedding
