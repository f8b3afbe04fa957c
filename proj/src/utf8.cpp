#include "nmtprep/utf8.hpp"

#include "nmtprep/error.hpp"

namespace nmtprep::utf8 {

namespace {

// Returns the sequence length and writes the scalar, or throws.
std::size_t decode_one(std::string_view text, std::size_t pos, std::size_t base, char32_t& out) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) {
    out = lead;
    return 1;
  }
  std::size_t len = 0;
  char32_t min = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    out = lead & 0x1F;
    min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    out = lead & 0x0F;
    min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    out = lead & 0x07;
    min = 0x10000;
  } else {
    throw DecodeError(base + pos, "unexpected lead byte");
  }
  if (pos + len > text.size()) throw DecodeError(base + pos, "truncated sequence");
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) throw DecodeError(base + pos, "bad continuation byte");
    out = (out << 6) | (c & 0x3F);
  }
  if (out < min) throw DecodeError(base + pos, "overlong encoding");
  if (out > 0x10FFFF) throw DecodeError(base + pos, "code point above U+10FFFF");
  if (out >= 0xD800 && out <= 0xDFFF) throw DecodeError(base + pos, "surrogate code point");
  return len;
}

}  // namespace

std::u32string decode(std::string_view text, std::size_t base_offset) {
  std::u32string out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    char32_t c;
    pos += decode_one(text, pos, base_offset, c);
    out.push_back(c);
  }
  return out;
}

void validate(std::string_view text, std::size_t base_offset) {
  for (std::size_t pos = 0; pos < text.size();) {
    if (static_cast<unsigned char>(text[pos]) < 0x80) {
      ++pos;
      continue;
    }
    char32_t c;
    pos += decode_one(text, pos, base_offset, c);
  }
}

void append(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string encode(char32_t scalar) {
  std::string out;
  append(out, scalar);
  return out;
}

std::string encode(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) append(out, c);
  return out;
}

std::vector<std::string> split_scalars(std::string_view text) {
  std::vector<std::string> out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    char32_t c;
    const std::size_t len = decode_one(text, pos, 0, c);
    out.emplace_back(text.substr(pos, len));
    pos += len;
  }
  return out;
}

std::size_t length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace nmtprep::utf8
