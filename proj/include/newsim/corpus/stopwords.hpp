#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace newsim::corpus {

// Languages with a bundled stopword list, sorted.
std::vector<std::string> stopword_languages();

bool has_stopword_list(std::string_view language);

bool is_stopword(std::string_view token, std::string_view language);

// Drops whitespace-delimited tokens found in the language's list. Matching is
// case-folded and ignores leading/trailing ASCII punctuation; surviving tokens
// keep their casing and order and are joined by single spaces. Unknown
// languages return the text unchanged and log a warning.
std::string remove_stopwords(std::string_view text, std::string_view language);

} // namespace newsim::corpus
