#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "newsim/embedding/vector.hpp"
#include "newsim/features/extract.hpp"

namespace newsim::embedding {

inline constexpr std::size_t kDefaultMaxTokens = 256;

// Static facts about a pretrained sentence-embedding model.
struct ProviderDescriptor {
    std::string_view name;
    std::size_t dim;
    std::size_t max_tokens;
};

// Models the exporter is expected to run. Every one truncates at 256 words.
inline constexpr std::array<ProviderDescriptor, 3> kKnownModels{{
    {"all-MiniLM-L6-v2", 384, 256},
    {"paraphrase-multilingual-MiniLM-L12-v2", 384, 256},
    {"bert-base-nli-mean-tokens", 768, 256},
}};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::string name() const = 0;
    virtual std::size_t dim() const = 0;
    virtual std::size_t max_tokens() const = 0;
    virtual std::set<std::string> supported_languages() const = 0;

    // Deterministic per instance; output dim is always dim(). Must be safe to
    // call concurrently.
    virtual EmbeddingVector embed(std::string_view text) const = 0;
};

// First max_tokens whitespace-delimited tokens joined by single spaces.
// Throws ArgumentError if max_tokens is 0.
std::string truncate_tokens(std::string_view text, std::size_t max_tokens);

// Row i embeds truncate_tokens(spans[i], provider.max_tokens()).
EmbeddingMatrix embed_bundle(const features::FeatureBundle& bundle, const EmbeddingProvider& provider);

// Key under which an embedding of post-truncation text is cached.
std::string cache_key(std::string_view text);

// Hermetic provider: each token maps to a seeded pseudorandom unit vector and
// a text embeds to the normalized sum over its tokens. Depends only on the
// token multiset and the seed.
class StubProvider final : public EmbeddingProvider {
public:
    explicit StubProvider(std::size_t dim = kDefaultDim, std::uint64_t seed = 0,
                          std::size_t max_tokens = kDefaultMaxTokens);

    std::string name() const override;
    std::size_t dim() const override { return dim_; }
    std::size_t max_tokens() const override { return max_tokens_; }
    std::set<std::string> supported_languages() const override { return {"*"}; }
    EmbeddingVector embed(std::string_view text) const override;

    std::uint64_t seed() const noexcept { return seed_; }

    // The unit vector assigned to one token.
    std::vector<double> token_vector(std::string_view token) const;

private:
    std::size_t dim_;
    std::uint64_t seed_;
    std::size_t max_tokens_;
};

// Serves vectors from an embedding-cache file keyed by cache_key(text).
// Lookups that miss throw MissingEmbeddingError.
class CacheProvider final : public EmbeddingProvider {
public:
    explicit CacheProvider(const std::filesystem::path& path,
                           std::size_t max_tokens = kDefaultMaxTokens);

    std::string name() const override { return name_; }
    std::size_t dim() const override { return dim_; }
    std::size_t max_tokens() const override { return max_tokens_; }
    std::set<std::string> supported_languages() const override { return {"*"}; }
    EmbeddingVector embed(std::string_view text) const override;

    std::size_t size() const noexcept { return entries_.size(); }
    bool contains(const std::string& key) const { return entries_.count(key) > 0; }

private:
    std::string name_;
    std::size_t dim_ = 0;
    std::size_t max_tokens_;
    std::map<std::string, EmbeddingVector> entries_;
};

} // namespace newsim::embedding
