#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "newsim/features/ner.hpp"

namespace newsim::features {

// Label of lexicon entries that mark organization suffixes ("Inc", "GmbH").
// One to four capitalized words followed by a suffix form an ORGANIZATION.
inline constexpr std::string_view kOrgSuffixLabel = "ORG_SUFFIX";

struct GazetteerEntry {
    std::string surface;
    std::string label;
};

// Reads "surface<TAB>LABEL" lines. Blank lines and lines starting with '#'
// are ignored; anything else without a tab is a FormatError.
std::vector<GazetteerEntry> read_gazetteer_file(const std::filesystem::path& path);

// Deterministic lexicon + pattern recognizer. Matching is case-insensitive,
// left to right, longest match first, non-overlapping, and only on word
// boundaries. Built-in patterns tag numeric dates, "<Month> <year>" style
// dates, bare years and clock times.
class GazetteerNer final : public NerProvider {
public:
    explicit GazetteerNer(std::vector<GazetteerEntry> entries, std::string name = "gazetteer-v1",
                          std::set<std::string> languages = {"en", "de", "es", "fr", "it"});

    // Loads every *.tsv file in dir (sorted by file name; later files win on
    // duplicate surfaces).
    static GazetteerNer load_dir(const std::filesystem::path& dir, std::string name = "gazetteer-v1");

    std::string name() const override { return name_; }
    std::set<std::string> supported_languages() const override { return languages_; }
    std::vector<Entity> recognize(std::string_view text, std::string_view language) const override;

    std::size_t size() const noexcept { return lexicon_.size(); }

private:
    struct Pattern {
        std::regex re;
        std::string label;
    };

    std::string name_;
    std::set<std::string> languages_;
    std::unordered_map<std::string, std::string> lexicon_; // folded surface -> label
    std::vector<std::size_t> lengths_;                     // distinct surface lengths, descending
    std::set<std::string> org_suffixes_;                   // folded
    std::vector<Pattern> patterns_;
};

} // namespace newsim::features
