#pragma once

// ISO 9 (System A) transliteration and cross-alphabet BPE tables.

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nmtprep/bpe.hpp"

namespace nmtprep::translit {

/// Bijective Cyrillic <-> Latin scalar map. Scalars outside the table pass
/// through unchanged in both directions.
class TranslitTable {
 public:
  /// The built-in ISO 9:1995 System A table (one scalar per letter, upper
  /// and lower case). The same table ships as data/iso9.tsv.
  static const TranslitTable& iso9();

  /// Reads `<cyrillic>\t<latin>` lines. Blank lines and lines starting
  /// with '#' are skipped. Throws InputError if the map is not bijective or
  /// an entry is not exactly one scalar on each side.
  static TranslitTable read(std::istream& in);
  static TranslitTable load(const std::string& path);

  explicit TranslitTable(std::vector<std::pair<char32_t, char32_t>> pairs);

  std::string to_latin(std::string_view text) const;
  std::string to_cyrillic(std::string_view text) const;
  char32_t to_latin(char32_t c) const;
  char32_t to_cyrillic(char32_t c) const;

  const std::vector<std::pair<char32_t, char32_t>>& pairs() const noexcept { return pairs_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<char32_t, char32_t>> pairs_;
  std::unordered_map<char32_t, char32_t> forward_;
  std::unordered_map<char32_t, char32_t> backward_;
};

std::string to_latin(std::string_view text);
std::string to_cyrillic(std::string_view text);

/// A Latin merge table and its rule-for-rule Cyrillic image.
struct BiScriptMergeTable {
  bpe::MergeTable latin;
  bpe::MergeTable cyrillic;
};

/// Cyrillic image of a Latin table: every rule's symbols mapped scalar-wise
/// through to_cyrillic, ranks unchanged.
bpe::MergeTable cyrillic_image(const bpe::MergeTable& latin, const TranslitTable& table = TranslitTable::iso9());

/// Learns joint BPE on English plus latinized Russian and maps the result
/// back into Cyrillic.
BiScriptMergeTable learn_biscript_bpe(std::istream& english, std::istream& russian, std::size_t num_merges,
                                      bpe::LearnOptions options = {},
                                      const TranslitTable& table = TranslitTable::iso9());

/// Segmenter for Russian text: both rule lists interleaved by rank, the
/// Latin rule first within a rank, so each rule fires only where its
/// script's symbols occur.
bpe::Segmenter russian_segmenter(const BiScriptMergeTable& tables);

std::string segment_russian(const BiScriptMergeTable& tables, std::string_view line);

/// Writes `<basename>.lat` and `<basename>.cyr`.
void save_biscript(const std::string& basename, const BiScriptMergeTable& tables);
BiScriptMergeTable load_biscript(const std::string& basename);

}  // namespace nmtprep::translit
