#pragma once

// Deterministic synthetic corpora for tests.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nmtprep/rng.hpp"

namespace fixtures {

inline const std::vector<std::vector<std::string>>& syllables() {
  static const std::vector<std::vector<std::string>> s = {
      // English
      {"the", "in", "for", "ter", "na", "tion", "al", "con", "pro", "er", "ing", "ly", "ex", "ment", "re", "st", "ow",
       "es", "ble", "ous"},
      // German
      {"ge", "sch", "ä", "ung", "ei", "ch", "ver", "ü", "ß", "ke", "ber", "lich", "ö", "zu", "an", "ten", "heit", "ie"},
      // Romanian
      {"ș", "ă", "ț", "î", "â", "ul", "ea", "ri", "lor", "ce", "ni", "te", "mân", "ști", "ță", "ar", "pe", "ra"},
      // Czech
      {"ř", "č", "ž", "ě", "ní", "ý", "pro", "st", "ov", "ka", "ch", "ou", "ně", "ví", "ná", "do", "le", "mí"},
      // Russian
      {"ст", "ов", "ни", "ра", "ко", "ть", "пр", "ие", "ся", "ло", "ен", "ва", "жд", "ый", "ще", "чи", "ю", "эт"},
  };
  return s;
}

inline std::string make_word(nmtprep::Rng& rng, std::size_t lang) {
  const auto& inv = syllables()[lang];
  const std::size_t n = 1 + rng.below(4);
  std::string w;
  for (std::size_t i = 0; i < n; ++i) w += inv[rng.below(inv.size())];
  return w;
}

/// Distinct word types spread over the five languages.
inline std::vector<std::string> lexicon(std::size_t types, std::uint64_t seed) {
  nmtprep::Rng rng(seed);
  std::set<std::string> seen;
  std::vector<std::string> out;
  std::size_t attempts = 0;
  while (out.size() < types && attempts < types * 50) {
    ++attempts;
    auto w = make_word(rng, rng.below(syllables().size()));
    if (rng.below(10) == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

/// Lines of whitespace-separated words drawn from a Zipf-like distribution
/// over `lex`, with occasional punctuation, digits and repeated spaces.
inline std::vector<std::string> corpus(const std::vector<std::string>& lex, std::size_t lines, std::uint64_t seed,
                                       bool noisy = true) {
  nmtprep::Rng rng(seed);
  static const std::vector<std::string> extras = {",", ".", "?", "2016", "89,500", "—", "«", "»", "(", ")", "😀", "漢字"};
  std::vector<std::string> out;
  out.reserve(lines);
  for (std::size_t i = 0; i < lines; ++i) {
    const std::size_t n = rng.below(25);
    std::string line;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) line += (noisy && rng.below(40) == 0) ? (rng.below(2) ? "  " : "\t") : " ";
      if (noisy && rng.below(15) == 0) {
        line += extras[rng.below(extras.size())];
      } else {
        // Zipf-ish: square of a uniform index skews towards the head.
        const double u = rng.unit();
        line += lex[static_cast<std::size_t>(u * u * static_cast<double>(lex.size()))];
      }
    }
    if (noisy && rng.below(50) == 0) line = " " + line + " ";
    out.push_back(std::move(line));
  }
  return out;
}

/// Every lexicon word at least twice (so every pair it contains can be
/// merged), packed into lines of 15 tokens.
inline std::vector<std::string> dense_corpus(const std::vector<std::string>& lex, std::uint64_t seed) {
  nmtprep::Rng rng(seed);
  std::vector<std::string> tokens;
  for (const auto& w : lex) {
    const std::size_t copies = 2 + rng.below(3);
    for (std::size_t k = 0; k < copies; ++k) tokens.push_back(w);
  }
  for (std::size_t i = tokens.size(); i > 1; --i) std::swap(tokens[i - 1], tokens[rng.below(i)]);
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < tokens.size(); i += 15) {
    std::string line;
    for (std::size_t k = i; k < std::min(tokens.size(), i + 15); ++k) {
      if (k > i) line += ' ';
      line += tokens[k];
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

/// Random small vocabulary over a tiny alphabet so pairs repeat often.
inline std::map<std::string, std::uint64_t> small_vocab(nmtprep::Rng& rng, std::size_t max_words = 50,
                                                        std::size_t max_chars = 12) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", "d", "é", "ж"};
  std::map<std::string, std::uint64_t> vocab;
  const std::size_t words = 1 + rng.below(max_words);
  while (vocab.size() < words) {
    const std::size_t len = 1 + rng.below(max_chars);
    std::string w;
    for (std::size_t i = 0; i < len; ++i) w += alphabet[rng.below(alphabet.size())];
    vocab[w] = 1 + rng.below(20);
  }
  return vocab;
}

inline std::vector<std::string> cyrillic_corpus(std::size_t lines, std::uint64_t seed) {
  static const std::vector<std::string> letters = {
      "а", "б", "в", "г", "д", "е", "ё", "ж", "з", "и", "й", "к", "л", "м", "н", "о", "п", "р", "с", "т", "у", "ф",
      "х", "ц", "ч", "ш", "щ", "ъ", "ы", "ь", "э", "ю", "я", "А", "Б", "В", "Г", "Д", "Е", "Ё", "Ж", "З", "И", "Й",
      "К", "Л", "М", "Н", "О", "П", "Р", "С", "Т", "У", "Ф", "Х", "Ц", "Ч", "Ш", "Щ", "Ъ", "Ы", "Ь", "Э", "Ю", "Я"};
  static const std::vector<std::string> punct = {",", ".", "!", "?", "«", "»", "—", "2016", "5"};
  nmtprep::Rng rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines; ++i) {
    const std::size_t words = rng.below(20);
    std::string line;
    for (std::size_t k = 0; k < words; ++k) {
      if (k) line += ' ';
      if (rng.below(12) == 0) {
        line += punct[rng.below(punct.size())];
        continue;
      }
      const std::size_t len = 1 + rng.below(10);
      for (std::size_t c = 0; c < len; ++c) line += letters[rng.below(letters.size())];
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace fixtures
