#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers. Everything here is locale independent.
namespace sensekit::text {

// Offset of the first ill-formed byte sequence, or nullopt if the input is valid UTF-8.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

inline bool is_valid_utf8(std::string_view s) { return !find_invalid_utf8(s).has_value(); }

// Simple (per code point) default Unicode case folding. Input must be valid UTF-8.
std::string fold_case(std::string_view s);

std::size_t code_point_count(std::string_view s);

std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);

bool is_whitespace(char32_t c);
bool is_punctuation(char32_t c);
bool is_alnum(char32_t c);
bool is_digit(char32_t c);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace sensekit::text
