#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nmtprep::diacritics {

/// Romanian diacritic -> base letter pairs: ă â î ș ț, the cedilla forms
/// ş ţ, and their capitals.
const std::vector<std::pair<char32_t, char32_t>>& romanian_map();

/// Replaces every Romanian diacritic letter by its base letter. A base
/// letter followed by the combining breve, circumflex, comma below or
/// cedilla that spells one of the mapped letters is treated as that letter,
/// so decomposed input normalizes the same as precomposed input. All other
/// scalars are copied unchanged.
std::string strip_diacritics(std::string_view line);

}  // namespace nmtprep::diacritics
