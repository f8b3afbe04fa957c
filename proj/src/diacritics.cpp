#include "nmtprep/diacritics.hpp"

#include <unordered_map>

#include "nmtprep/utf8.hpp"

namespace nmtprep::diacritics {

namespace {

constexpr char32_t kBreve = 0x0306;
constexpr char32_t kCircumflex = 0x0302;
constexpr char32_t kCommaBelow = 0x0326;
constexpr char32_t kCedilla = 0x0327;

const std::unordered_map<char32_t, char32_t>& lookup() {
  static const std::unordered_map<char32_t, char32_t> m(romanian_map().begin(), romanian_map().end());
  return m;
}

// Base letter + combining mark pairs that compose to a mapped letter.
bool composes(char32_t base, char32_t mark) {
  switch (mark) {
    case kBreve:
      return base == U'a' || base == U'A';
    case kCircumflex:
      return base == U'a' || base == U'A' || base == U'i' || base == U'I';
    case kCommaBelow:
    case kCedilla:
      return base == U's' || base == U'S' || base == U't' || base == U'T';
    default:
      return false;
  }
}

}  // namespace

const std::vector<std::pair<char32_t, char32_t>>& romanian_map() {
  static const std::vector<std::pair<char32_t, char32_t>> m = {
      {U'ă', U'a'}, {U'Ă', U'A'}, {U'â', U'a'}, {U'Â', U'A'}, {U'î', U'i'}, {U'Î', U'I'},
      {U'ș', U's'}, {U'Ș', U'S'}, {U'ț', U't'}, {U'Ț', U'T'},  // comma below
      {U'ş', U's'}, {U'Ş', U'S'}, {U'ţ', U't'}, {U'Ţ', U'T'},  // cedilla
  };
  return m;
}

std::string strip_diacritics(std::string_view line) {
  const auto& m = lookup();
  const auto scalars = utf8::decode(line);
  std::string out;
  out.reserve(line.size());
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    char32_t c = scalars[i];
    if (auto it = m.find(c); it != m.end()) c = it->second;
    utf8::append(out, c);
    // Marks that would compose with the emitted base letter are absorbed, so
    // the output never contains a composable pair and stripping is idempotent.
    while (i + 1 < scalars.size() && composes(c, scalars[i + 1])) ++i;
  }
  return out;
}

}  // namespace nmtprep::diacritics
