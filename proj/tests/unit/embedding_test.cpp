#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "newsim/embedding/cache_file.hpp"
#include "newsim/embedding/provider.hpp"
#include "newsim/embedding/vector.hpp"
#include "newsim/errors.hpp"
#include "newsim/random.hpp"
#include "newsim/text.hpp"
#include "support.hpp"

using namespace newsim;
using namespace newsim::embedding;
using newsim::testing::TempDir;
using newsim::testing::write_file;

namespace {

EmbeddingVector vec(std::vector<double> v) { return EmbeddingVector(std::move(v)); }

std::string numbered_tokens(std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) s += ' ';
        s += "w" + std::to_string(i);
    }
    return s;
}

} // namespace

TEST_SUITE("embedding") {

// ---- vectors --------------------------------------------------------------

TEST_CASE("cosine similarity") {
    CHECK(cosine_similarity(vec({1, 0}), vec({1, 1})) == doctest::Approx(0.7071068).epsilon(1e-6));
    CHECK(cosine_similarity(vec({1, 2}), vec({1, 2})) == doctest::Approx(1.0));
    CHECK(cosine_similarity(vec({1, 0}), vec({-1, 0})) == -1.0);
    CHECK(baseline_score(vec({1, 0}), vec({-1, 0})) == 0.0);
    CHECK(baseline_score(vec({1, 0}), vec({1, 1})) == doctest::Approx(0.7071068).epsilon(1e-6));
    CHECK_THROWS_AS(cosine_similarity(vec({0, 0}), vec({1, 1})), ZeroVectorError);
    CHECK_THROWS_AS(cosine_similarity(vec({1}), vec({1, 1})), DimensionError);
}

TEST_CASE("cosine stays within [-1, 1] for random vectors") {
    Rng rng(9);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> a(16), b(16);
        for (auto& x : a) x = rng.normal();
        for (auto& x : b) x = t % 7 == 0 ? 0.0 : rng.normal();
        if (t % 7 == 0) b = a;
        const double c = cosine_similarity(vec(a), vec(b));
        CHECK(c <= 1.0);
        CHECK(c >= -1.0);
    }
}

TEST_CASE("mean pooling") {
    EmbeddingMatrix m;
    m.add_row(vec({1, 3}));
    m.add_row(vec({3, 5}));
    CHECK(mean_pool(m) == vec({2, 4}));
    CHECK_THROWS_AS(m.add_row(vec({1, 2, 3})), DimensionError);
    CHECK_THROWS_AS(mean_pool(EmbeddingMatrix{}), ArgumentError);
}

TEST_CASE("mean pooling is permutation invariant and bounded by the rows") {
    Rng rng(4);
    for (int t = 0; t < 50; ++t) {
        std::vector<EmbeddingVector> rows;
        const auto k = rng.index(9) + 1;
        for (std::uint64_t r = 0; r < k; ++r) {
            std::vector<double> v(8);
            for (auto& x : v) x = rng.uniform(-1e3, 1e3);
            rows.push_back(vec(v));
        }
        const auto pooled = mean_pool(EmbeddingMatrix(rows));
        auto shuffled = rows;
        rng.shuffle(shuffled);
        CHECK(mean_pool(EmbeddingMatrix(shuffled)) == pooled);
        for (std::size_t j = 0; j < 8; ++j) {
            double lo = rows[0][j], hi = rows[0][j];
            for (const auto& r : rows) {
                lo = std::min(lo, r[j]);
                hi = std::max(hi, r[j]);
            }
            CHECK(pooled[j] >= lo);
            CHECK(pooled[j] <= hi);
        }
    }
}

TEST_CASE("concat joins in order") {
    CHECK(concat(vec({1, 2}), vec({3, 4})) == vec({1, 2, 3, 4}));
    CHECK_THROWS_AS(concat(vec({1, 2}), vec({3})), DimensionError);
    CHECK(dot(vec({1, 2}), vec({3, 4})) == 11.0);
    CHECK(norm(vec({3, 4})) == 5.0);
}

TEST_CASE("vectors reject empty and non-finite data") {
    CHECK_THROWS_AS(vec({}), DimensionError);
    CHECK_THROWS_AS(vec({1.0, NAN}), RangeError);
    CHECK_THROWS_AS(vec({INFINITY}), RangeError);
}

// ---- truncation and stub provider -----------------------------------------

TEST_CASE("truncation keeps the first max_tokens tokens") {
    const auto t = truncate_tokens(numbered_tokens(300), 256);
    CHECK(text::split_whitespace(t).size() == 256);
    CHECK(t == numbered_tokens(256));
    CHECK(truncate_tokens("  a   b ", 10) == "a b");
    CHECK_THROWS_AS(truncate_tokens("a", 0), ArgumentError);
}

TEST_CASE("stub provider is deterministic, unit norm and order invariant") {
    const StubProvider stub(64, 3);
    CHECK(stub.name() == "stub-d64-s3");
    const auto a = stub.embed("floods hit paris");
    CHECK(a.dim() == 64);
    CHECK(a == stub.embed("floods hit paris"));
    CHECK(a == stub.embed("paris floods  hit"));
    CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a != StubProvider(64, 4).embed("floods hit paris"));
    CHECK(norm(stub.embed("")) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
}

TEST_CASE("shared tokens make stub embeddings closer") {
    const StubProvider stub(384, 0);
    const auto base = stub.embed("river flood rain city evacuation");
    const auto near = stub.embed("river flood rain city shelter");
    const auto far = stub.embed("tomato salad basil vinegar bread");
    CHECK(cosine_similarity(base, near) > cosine_similarity(base, far));
}

TEST_CASE("embed_bundle truncates each span and returns one row per span") {
    const StubProvider stub(16, 0, 4);
    const features::FeatureBundle b{MetricKind::Entities, {"a b c d e f", "x"}, false};
    const auto m = embed_bundle(b, stub);
    REQUIRE(m.rows() == 2);
    CHECK(m.row(0) == stub.embed("a b c d"));
    CHECK(m.row(1) == stub.embed("x"));
    CHECK_THROWS_AS(embed_bundle(features::FeatureBundle{}, stub), ArgumentError);
}

TEST_CASE("known model descriptors") {
    for (const auto& d : kKnownModels) {
        CHECK(d.max_tokens == 256);
        CHECK((d.dim == 384 || d.dim == 768));
    }
}

// ---- cache file -----------------------------------------------------------

TEST_CASE("cache file round-trips within float precision") {
    TempDir dir;
    const StubProvider stub(8, 1);
    EmbeddingCache cache{"all-MiniLM-L6-v2", 8, {}};
    for (const char* s : {"Paris", "Berlin", "two words"}) cache.entries[cache_key(s)] = stub.embed(s);
    write_cache(dir / "c.tsv", cache);

    const auto back = read_cache(dir / "c.tsv");
    CHECK(back.provider == "all-MiniLM-L6-v2");
    CHECK(back.dim == 8);
    REQUIRE(back.entries.size() == 3);
    for (const auto& [k, v] : cache.entries)
        for (std::size_t i = 0; i < 8; ++i) CHECK(back.entries.at(k)[i] == doctest::Approx(v[i]).epsilon(1e-8));

    const CacheProvider provider(dir / "c.tsv");
    CHECK(provider.name() == "cache:all-MiniLM-L6-v2");
    CHECK(provider.dim() == 8);
    CHECK(cosine_similarity(provider.embed("Paris"), stub.embed("Paris")) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cache provider reports the missing key") {
    TempDir dir;
    write_cache(dir / "c.tsv", {"m", 2, {{cache_key("a"), vec({1, 0})}}});
    const CacheProvider provider(dir / "c.tsv");
    try {
        provider.embed("b");
        FAIL("expected MissingEmbeddingError");
    } catch (const MissingEmbeddingError& e) {
        CHECK(e.key() == cache_key("b"));
    }
}

TEST_CASE("malformed cache files are rejected") {
    TempDir dir;
    write_file(dir / "header.tsv", "nonsense\n");
    CHECK_THROWS_AS(read_cache(dir / "header.tsv"), FormatError);
    write_file(dir / "short.tsv", "dim=3 provider=m\nk\t1 2\n");
    CHECK_THROWS_AS(read_cache(dir / "short.tsv"), FormatError);
    write_file(dir / "nan.tsv", "dim=2 provider=m\nk\t1 x\n");
    CHECK_THROWS_AS(read_cache(dir / "nan.tsv"), FormatError);
    CHECK_THROWS_AS(read_cache(dir / "absent.tsv"), NotFoundError);

    write_file(dir / "empty.tsv", "dim=4 provider=m\n");
    const auto empty = read_cache(dir / "empty.tsv");
    CHECK(empty.entries.empty());
    CHECK(empty.dim == 4);
}

TEST_CASE("export requests are deduplicated and sorted by key") {
    TempDir dir;
    std::vector<ExportRequest> reqs{{cache_key("b"), "b"}, {cache_key("a"), "a"}, {cache_key("b"), "b"}};
    write_export_requests(dir / "r.jsonl", reqs);
    const auto back = read_export_requests(dir / "r.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0].key < back[1].key);
    for (const auto& r : back) CHECK(r.key == cache_key(r.text));
}

}
