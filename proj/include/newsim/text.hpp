#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace newsim::text {

// Replace invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

// Lowercase for matching. Only maps code points whose lowercase form has the
// same UTF-8 length, so byte offsets into the folded string equal offsets into
// the original.
std::string fold_case(std::string_view s);

std::vector<std::string_view> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string_view>& parts, std::string_view sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view trim(std::string_view s);

// Collapse every run of ASCII whitespace to one space and trim the ends.
std::string collapse_whitespace(std::string_view s);

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Letters, digits and any non-ASCII byte count as word characters.
inline bool is_word_byte(char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

} // namespace newsim::text
