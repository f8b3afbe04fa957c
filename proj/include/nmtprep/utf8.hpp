#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nmtprep::utf8 {

/// Decodes one UTF-8 string into Unicode scalar values. Rejects overlong
/// forms, surrogates and values above U+10FFFF. `base_offset` is added to
/// the byte offset reported by DecodeError, so callers decoding a stream
/// line by line can report positions relative to the stream start.
std::u32string decode(std::string_view text, std::size_t base_offset = 0);

/// Throws DecodeError if `text` is not valid UTF-8.
void validate(std::string_view text, std::size_t base_offset = 0);

void append(std::string& out, char32_t scalar);
std::string encode(char32_t scalar);
std::string encode(std::u32string_view scalars);

/// Splits a valid UTF-8 string into one string per scalar value.
std::vector<std::string> split_scalars(std::string_view text);

/// Number of scalar values in valid UTF-8 text.
std::size_t length(std::string_view text);

}  // namespace nmtprep::utf8
