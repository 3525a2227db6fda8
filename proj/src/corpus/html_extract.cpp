#include "newsim/corpus/html_extract.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <unordered_map>

#include "newsim/errors.hpp"
#include "newsim/text.hpp"

namespace newsim::corpus {
namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

void append_utf8(char32_t cp, std::string& out) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
    static const std::unordered_map<std::string_view, char32_t> table{
        {"amp", '&'},     {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
        {"apos", '\''},   {"nbsp", 0xA0},    {"copy", 0xA9},    {"reg", 0xAE},
        {"trade", 0x2122}, {"hellip", 0x2026}, {"mdash", 0x2014}, {"ndash", 0x2013},
        {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
        {"laquo", 0xAB},  {"raquo", 0xBB},   {"euro", 0x20AC},  {"pound", 0xA3},
        {"deg", 0xB0},    {"middot", 0xB7},  {"bull", 0x2022},  {"shy", 0xAD},
        {"auml", 0xE4},   {"ouml", 0xF6},    {"uuml", 0xFC},    {"Auml", 0xC4},
        {"Ouml", 0xD6},   {"Uuml", 0xDC},    {"szlig", 0xDF},   {"eacute", 0xE9},
        {"egrave", 0xE8}, {"aacute", 0xE1},  {"iacute", 0xED},  {"oacute", 0xF3},
        {"uacute", 0xFA}, {"ntilde", 0xF1},  {"ccedil", 0xE7},  {"Eacute", 0xC9},
    };
    return table;
}

struct Tag {
    std::string name; // lowercased
    bool closing = false;
    bool self_closing = false;
    std::string lang; // value of a lang attribute, if any
};

// Parses the tag starting at html[pos] == '<'. On success sets pos one past '>'.
std::optional<Tag> parse_tag(std::string_view html, std::size_t& pos) {
    std::size_t i = pos + 1;
    Tag tag;
    if (i < html.size() && html[i] == '/') {
        tag.closing = true;
        ++i;
    }
    const std::size_t name_start = i;
    while (i < html.size() && (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-'))
        ++i;
    if (i == name_start) return std::nullopt;
    tag.name = ascii_lower(html.substr(name_start, i - name_start));

    // Attributes: scan to the closing '>' honoring quoted values.
    while (i < html.size() && html[i] != '>') {
        if (text::is_space(html[i]) || html[i] == '/') {
            if (html[i] == '/') tag.self_closing = true;
            ++i;
            continue;
        }
        tag.self_closing = false;
        const std::size_t attr_start = i;
        while (i < html.size() && html[i] != '=' && html[i] != '>' && !text::is_space(html[i]) &&
               html[i] != '/')
            ++i;
        const std::string attr = ascii_lower(html.substr(attr_start, i - attr_start));
        std::string value;
        if (i < html.size() && html[i] == '=') {
            ++i;
            if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
                const char quote = html[i++];
                const std::size_t v = i;
                while (i < html.size() && html[i] != quote) ++i;
                value = std::string(html.substr(v, i - v));
                if (i < html.size()) ++i;
            } else {
                const std::size_t v = i;
                while (i < html.size() && html[i] != '>' && !text::is_space(html[i])) ++i;
                value = std::string(html.substr(v, i - v));
            }
        }
        if (attr == "lang") tag.lang = value;
    }
    if (i >= html.size()) return std::nullopt;
    pos = i + 1;
    return tag;
}

bool is_heading(const std::string& name) {
    return name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6';
}

// Block elements that terminate an open paragraph when they start.
bool closes_paragraph(const std::string& name) {
    static const std::vector<std::string> blocks{"p",  "div", "section", "article", "ul", "ol",
                                                 "li", "table", "blockquote", "h1", "h2", "h3",
                                                 "h4", "h5", "h6", "header", "main", "aside"};
    return std::find(blocks.begin(), blocks.end(), name) != blocks.end();
}

bool is_inline(const std::string& name) {
    static const std::vector<std::string> inline_tags{
        "a",    "abbr", "b",    "bdi",  "cite", "code", "em",   "font", "i",
        "mark", "q",    "s",    "small", "span", "strong", "sub", "sup", "time", "u"};
    return std::find(inline_tags.begin(), inline_tags.end(), name) != inline_tags.end();
}

} // namespace

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        const std::size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(s[i++]);
            continue;
        }
        const std::string_view ref = s.substr(i + 1, semi - i - 1);
        if (!ref.empty() && ref[0] == '#') {
            const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
            const std::string_view digits = ref.substr(hex ? 2 : 1);
            std::uint32_t cp = 0;
            const auto [ptr, ec] =
                std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
                append_utf8(cp, out);
                i = semi + 1;
                continue;
            }
        } else if (auto it = named_entities().find(ref); it != named_entities().end()) {
            append_utf8(it->second, out);
            i = semi + 1;
            continue;
        }
        out.push_back(s[i++]);
    }
    return out;
}

std::string strip_junk_suffix(std::string_view text, const std::vector<std::string>& markers) {
    std::size_t cut = text.size();
    for (const auto& marker : markers) {
        if (marker.empty()) continue;
        cut = std::min(cut, text.find(marker));
    }
    std::string_view kept = text.substr(0, cut);
    while (!kept.empty() && text::is_space(kept.back())) kept.remove_suffix(1);
    return std::string(kept);
}

ArticleRecord extract_article(std::string_view raw_html, const std::string& id,
                              const std::string& url, const ExtractOptions& options) {
    const std::string html = text::sanitize_utf8(raw_html);
    const std::string_view doc(html);

    std::vector<std::string> headings;
    std::vector<std::string> paragraphs;
    std::string first_h1;
    bool have_h1 = false;
    std::string title_element;
    std::string language;

    // Capture state: at most one open heading or paragraph at a time.
    enum class Capture { None, Heading, Paragraph, Title };
    Capture capture = Capture::None;
    std::string capture_tag;
    std::string buffer;
    int skip_depth = 0;
    std::vector<std::string> skip_stack;

    auto is_skipped = [&](const std::string& name) {
        return std::find(options.skipped_elements.begin(), options.skipped_elements.end(), name) !=
               options.skipped_elements.end();
    };

    auto finish = [&]() {
        std::string content = text::collapse_whitespace(decode_entities(buffer));
        if (capture == Capture::Heading && !content.empty()) {
            if (capture_tag == "h1" && !have_h1) {
                first_h1 = content;
                have_h1 = true;
            }
            headings.push_back(std::move(content));
        } else if (capture == Capture::Paragraph && !content.empty()) {
            paragraphs.push_back(std::move(content));
        } else if (capture == Capture::Title && title_element.empty()) {
            title_element = std::move(content);
        }
        capture = Capture::None;
        capture_tag.clear();
        buffer.clear();
    };

    std::size_t pos = 0;
    while (pos < doc.size()) {
        if (doc[pos] != '<') {
            const std::size_t next = doc.find('<', pos);
            const std::size_t end = next == std::string_view::npos ? doc.size() : next;
            if (skip_depth == 0 && capture != Capture::None) buffer.append(doc.substr(pos, end - pos));
            pos = end;
            continue;
        }
        if (doc.substr(pos, 4) == "<!--") {
            const std::size_t end = doc.find("-->", pos + 4);
            pos = end == std::string_view::npos ? doc.size() : end + 3;
            continue;
        }
        if (pos + 1 < doc.size() && (doc[pos + 1] == '!' || doc[pos + 1] == '?')) {
            const std::size_t end = doc.find('>', pos);
            pos = end == std::string_view::npos ? doc.size() : end + 1;
            continue;
        }
        std::size_t after = pos;
        auto tag = parse_tag(doc, after);
        if (!tag) {
            // A stray '<' is text.
            if (skip_depth == 0 && capture != Capture::None) buffer.push_back('<');
            ++pos;
            continue;
        }
        pos = after;

        if (tag->name == "html" && !tag->closing && !tag->lang.empty()) language = tag->lang;

        // Raw-text elements: their content is never markup.
        if (!tag->closing && !tag->self_closing && (tag->name == "script" || tag->name == "style")) {
            const std::string close = "</" + tag->name;
            std::size_t end = pos;
            while (true) {
                end = doc.find("</", end);
                if (end == std::string_view::npos) break;
                if (ascii_lower(doc.substr(end, close.size())) == close) break;
                end += 2;
            }
            if (end == std::string_view::npos) {
                pos = doc.size();
            } else {
                const std::size_t gt = doc.find('>', end);
                pos = gt == std::string_view::npos ? doc.size() : gt + 1;
            }
            continue;
        }

        if (is_skipped(tag->name)) {
            if (tag->self_closing) continue;
            if (!tag->closing) {
                ++skip_depth;
                skip_stack.push_back(tag->name);
            } else if (auto it = std::find(skip_stack.rbegin(), skip_stack.rend(), tag->name);
                       it != skip_stack.rend()) {
                skip_stack.erase(std::next(it).base(), skip_stack.end());
                skip_depth = static_cast<int>(skip_stack.size());
            }
            continue;
        }
        if (skip_depth > 0) continue;

        const std::string& name = tag->name;
        if (!tag->closing) {
            if (name == "br") {
                if (capture != Capture::None) buffer.push_back(' ');
                continue;
            }
            if (is_heading(name) || name == "p" || name == "title") {
                if (capture != Capture::None) finish();
                capture = is_heading(name) ? Capture::Heading
                          : name == "p"    ? Capture::Paragraph
                                           : Capture::Title;
                capture_tag = name;
                continue;
            }
            if (capture == Capture::Paragraph && closes_paragraph(name)) finish();
            else if (capture != Capture::None && !is_inline(name)) buffer.push_back(' ');
        } else {
            if (capture != Capture::None && name == capture_tag) finish();
            else if (capture == Capture::Paragraph && closes_paragraph(name)) finish();
            else if (capture != Capture::None && !is_inline(name)) buffer.push_back(' ');
        }
    }
    if (capture != Capture::None) finish();

    ArticleRecord record;
    record.id = id;
    record.url = url;
    record.language = ascii_lower(language.substr(0, language.find('-')));
    record.title = have_h1 ? first_h1 : title_element;
    record.headings = std::move(headings);
    record.body = strip_junk_suffix(text::join(paragraphs, "\n"), options.junk_markers);
    if (record.body.empty()) throw EmptyBodyError("no paragraph text in article " + id);
    return record;
}

} // namespace newsim::corpus
