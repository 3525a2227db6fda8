#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "newsim/corpus/article.hpp"

namespace newsim::corpus {

struct ExtractOptions {
    // Elements whose whole subtree is dropped.
    std::vector<std::string> skipped_elements{"script", "style", "nav", "footer", "noscript",
                                              "template"};
    // Body is cut at the first occurrence of any of these (case-sensitive).
    std::vector<std::string> junk_markers{"Related articles", "Related Articles",
                                          "RELATED ARTICLES", "Read more:",
                                          "Copyright \xC2\xA9",  "\xC2\xA9 Copyright",
                                          "All rights reserved."};
};

// Decodes named and numeric character references.
std::string decode_entities(std::string_view s);

// Truncates text at the earliest junk marker and trims trailing whitespace.
std::string strip_junk_suffix(std::string_view text, const std::vector<std::string>& markers);

// Parses article HTML into a record. title is the first <h1> (or <title> if the
// page has no h1), headings are every h1-h6 in document order, body is the
// paragraph text joined by '\n'. language comes from <html lang>, if present.
// Throws EmptyBodyError when no paragraph text survives.
ArticleRecord extract_article(std::string_view html, const std::string& id, const std::string& url,
                              const ExtractOptions& options = {});

} // namespace newsim::corpus
