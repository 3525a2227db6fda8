#include "newsim/features/gazetteer.hpp"

#include <algorithm>
#include <fstream>

#include "newsim/errors.hpp"
#include "newsim/text.hpp"

namespace newsim::features {
namespace {

bool word_start(std::string_view s, std::size_t i) {
    return i < s.size() && text::is_word_byte(s[i]) && (i == 0 || !text::is_word_byte(s[i - 1]));
}

// A match [i, i+len) must not split a word on either end.
bool boundary_after(std::string_view s, std::size_t end) {
    return end >= s.size() || !text::is_word_byte(s[end]) || !text::is_word_byte(s[end - 1]);
}

bool is_capitalized(std::string_view word) {
    if (word.empty()) return false;
    const auto c = static_cast<unsigned char>(word[0]);
    if (c >= 'A' && c <= 'Z') return true;
    // Non-ASCII initial: capitalized if folding changes it.
    return c >= 0x80 && text::fold_case(word.substr(0, 4)) != word.substr(0, 4);
}

std::size_t word_end(std::string_view s, std::size_t i) {
    while (i < s.size() && text::is_word_byte(s[i])) ++i;
    return i;
}

} // namespace

std::vector<GazetteerEntry> read_gazetteer_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read gazetteer " + path.string());
    std::vector<GazetteerEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string_view trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected surface<TAB>LABEL");
        GazetteerEntry e{std::string(text::trim(std::string_view(line).substr(0, tab))),
                         std::string(text::trim(std::string_view(line).substr(tab + 1)))};
        if (e.surface.empty() || e.label.empty())
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": empty surface or label");
        entries.push_back(std::move(e));
    }
    return entries;
}

GazetteerNer::GazetteerNer(std::vector<GazetteerEntry> entries, std::string name,
                           std::set<std::string> languages)
    : name_(std::move(name)), languages_(std::move(languages)) {
    std::set<std::size_t> lengths;
    for (auto& e : entries) {
        std::string folded = text::fold_case(text::collapse_whitespace(e.surface));
        if (folded.empty()) continue;
        if (e.label == kOrgSuffixLabel) {
            org_suffixes_.insert(std::move(folded));
            continue;
        }
        lengths.insert(folded.size());
        lexicon_[std::move(folded)] = e.label;
    }
    lengths_.assign(lengths.rbegin(), lengths.rend());

    const std::string months =
        "January|February|March|April|May|June|July|August|September|October|November|December|"
        "Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sept|Sep|Oct|Nov|Dec";
    const std::string ordinal = R"(\d{1,2}(?:st|nd|rd|th)?)";
    const std::string tail = R"((?![A-Za-z0-9_]))";
    patterns_.push_back({std::regex(R"(\b\d{4}-\d{2}-\d{2})" + tail), "DATE"});
    patterns_.push_back({std::regex(R"(\b\d{1,2}[./]\d{1,2}[./]\d{2,4})" + tail), "DATE"});
    patterns_.push_back({std::regex(R"(\b(?:)" + ordinal + R"(\s+)?(?:)" + months + R"()\.?(?:\s+)" +
                                    ordinal + R"()?(?:,?\s+\d{4})?)" + tail),
                         "DATE"});
    patterns_.push_back({std::regex(R"(\b(?:1[89]|20)\d{2})" + tail), "DATE"});
    patterns_.push_back(
        {std::regex(R"(\b\d{1,2}:\d{2}(?:\s?(?:[ap]\.m\.|[AaPp][Mm]))?)" + tail), "TIME"});
}

GazetteerNer GazetteerNer::load_dir(const std::filesystem::path& dir, std::string name) {
    if (!std::filesystem::is_directory(dir))
        throw NotFoundError("gazetteer directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<GazetteerEntry> entries;
    for (const auto& f : files) {
        auto part = read_gazetteer_file(f);
        entries.insert(entries.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }
    return GazetteerNer(std::move(entries), std::move(name));
}

std::vector<Entity> GazetteerNer::recognize(std::string_view source, std::string_view) const {
    std::vector<Entity> out;
    if (source.empty()) return out;
    const std::string folded = text::fold_case(source);
    const std::string_view fv(folded);

    // Longest pattern match per start offset.
    std::vector<std::size_t> pattern_end(source.size(), 0);
    std::vector<const std::string*> pattern_label(source.size(), nullptr);
    const std::string src(source);
    for (const auto& p : patterns_) {
        for (auto it = std::sregex_iterator(src.begin(), src.end(), p.re); it != std::sregex_iterator();
             ++it) {
            const auto start = static_cast<std::size_t>(it->position());
            const auto end = start + static_cast<std::size_t>(it->length());
            if (end > pattern_end[start]) {
                pattern_end[start] = end;
                pattern_label[start] = &p.label;
            }
        }
    }

    std::size_t i = 0;
    while (i < source.size()) {
        if (!word_start(source, i)) {
            ++i;
            continue;
        }
        std::size_t best_end = 0;
        const std::string* best_label = nullptr;
        static const std::string kOrganization = "ORGANIZATION";

        for (std::size_t len : lengths_) {
            if (i + len > fv.size() || !boundary_after(fv, i + len)) continue;
            const auto it = lexicon_.find(std::string(fv.substr(i, len)));
            if (it != lexicon_.end()) {
                best_end = i + len;
                best_label = &it->second;
                break;
            }
        }

        if (!org_suffixes_.empty()) {
            // Capitalized words separated by single spaces, then a suffix.
            std::size_t pos = i;
            for (int words = 0; words < 4 && pos < source.size(); ++words) {
                const std::size_t we = word_end(source, pos);
                if (!is_capitalized(source.substr(pos, we - pos))) break;
                if (we + 1 >= source.size() || source[we] != ' ') break;
                const std::size_t next = we + 1;
                const std::size_t ne = word_end(source, next);
                if (ne > next && org_suffixes_.count(std::string(fv.substr(next, ne - next)))) {
                    std::size_t end = ne;
                    if (end < source.size() && source[end] == '.') ++end;
                    if (end > best_end) {
                        best_end = end;
                        best_label = &kOrganization;
                    }
                }
                pos = next;
            }
        }

        if (pattern_end[i] > best_end) {
            best_end = pattern_end[i];
            best_label = pattern_label[i];
        }

        if (best_label) {
            out.push_back(Entity{std::string(source.substr(i, best_end - i)), *best_label, i, best_end});
            i = best_end;
        } else {
            i = word_end(source, i);
        }
    }
    return out;
}

} // namespace newsim::features
