#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "newsim/hashing.hpp"
#include "newsim/log.hpp"
#include "newsim/metric.hpp"
#include "newsim/random.hpp"
#include "newsim/text.hpp"

using namespace newsim;

TEST_SUITE("common") {

TEST_CASE("sha256 matches published test vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fnv1a64 matches reference values") {
    static_assert(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("fold_case lowers ASCII and common European scripts without changing length") {
    const std::string in = "Paris \xC3\x84RGER \xCE\x91\xCE\x98\xCE\x97\xCE\x9D\xCE\x91 \xD0\x9C\xD0\x9E\xD0\xA1\xD0\x9A\xD0\x92\xD0\x90";
    const std::string out = text::fold_case(in);
    CHECK(out == "paris \xC3\xA4rger \xCE\xB1\xCE\xB8\xCE\xB7\xCE\xBD\xCE\xB1 \xD0\xBC\xD0\xBE\xD1\x81\xD0\xBA\xD0\xB2\xD0\xB0");
    CHECK(out.size() == in.size());
    CHECK(text::fold_case("\xE4\xB8\xAD") == "\xE4\xB8\xAD"); // no case
}

TEST_CASE("sanitize_utf8 replaces invalid bytes and keeps valid sequences") {
    CHECK(text::sanitize_utf8("ok \xC3\xA9") == "ok \xC3\xA9");
    CHECK(text::sanitize_utf8("a\xFF" "b") == "a\xEF\xBF\xBD" "b");
    CHECK(text::sanitize_utf8("\xC3") == "\xEF\xBF\xBD");
}

TEST_CASE("whitespace helpers") {
    const auto parts = text::split_whitespace("  one\ttwo\n three  ");
    REQUIRE(parts.size() == 3);
    CHECK(parts[0] == "one");
    CHECK(parts[2] == "three");
    CHECK(text::join(parts, "|") == "one|two|three");
    CHECK(text::trim("  x y \n") == "x y");
    CHECK(text::collapse_whitespace(" a \n\n b\tc ") == "a b c");
    CHECK(text::split_whitespace("   ").empty());
}

TEST_CASE("Rng is reproducible and mix_seed separates streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    Rng u(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        CHECK(u.index(7) < 7);
    }

    std::set<std::uint64_t> seeds;
    for (std::uint64_t salt = 0; salt < 64; ++salt) seeds.insert(mix_seed(7, salt));
    CHECK(seeds.size() == 64);
}

TEST_CASE("Rng shuffle is a seeded permutation") {
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    auto w = v;
    Rng(3).shuffle(v);
    Rng(3).shuffle(w);
    CHECK(v == w);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("metric names round-trip") {
    CHECK(kAllMetrics.size() == 7);
    for (MetricKind m : kAllMetrics) {
        const auto parsed = parse_metric(metric_name(m));
        REQUIRE(parsed);
        CHECK(*parsed == m);
    }
    CHECK(parse_metric("Geography") == MetricKind::Geography);
    CHECK_FALSE(parse_metric("weather"));
    CHECK(is_entity_metric(MetricKind::Time));
    CHECK_FALSE(is_entity_metric(MetricKind::Overall));
}

TEST_CASE("log sink can be replaced and restored") {
    std::vector<std::string> seen;
    auto previous = log::set_sink([&](std::string_view level, std::string_view msg) {
        seen.push_back(std::string(level) + ":" + std::string(msg));
    });
    log::warn("careful");
    log::info("fyi");
    log::set_sink(previous);
    REQUIRE(seen.size() == 2);
    CHECK(seen[0] == "warn:careful");
    CHECK(seen[1] == "info:fyi");
}

}
