#include "nmtprep/translit.hpp"

#include <fstream>
#include <sstream>

#include "nmtprep/error.hpp"
#include "nmtprep/utf8.hpp"

namespace nmtprep::translit {

namespace {

// ISO 9:1995, System A. Letters whose System A form needs a combining mark
// (Ј, Љ, Њ, Џ, Ґ, Ѳ) are left out so that every entry maps one scalar to
// one scalar. The hard and soft signs have no case in ISO 9; the uppercase
// forms get the modifier letters U+02EE and U+02CA to keep the map
// invertible.
const std::vector<std::pair<char32_t, char32_t>> kIso9 = {
    {U'А', U'A'}, {U'а', U'a'}, {U'Б', U'B'}, {U'б', U'b'}, {U'В', U'V'}, {U'в', U'v'},
    {U'Г', U'G'}, {U'г', U'g'}, {U'Д', U'D'}, {U'д', U'd'}, {U'Е', U'E'}, {U'е', U'e'},
    {U'Ё', U'Ë'}, {U'ё', U'ë'}, {U'Ж', U'Ž'}, {U'ж', U'ž'}, {U'З', U'Z'}, {U'з', U'z'},
    {U'И', U'I'}, {U'и', U'i'}, {U'Й', U'J'}, {U'й', U'j'}, {U'К', U'K'}, {U'к', U'k'},
    {U'Л', U'L'}, {U'л', U'l'}, {U'М', U'M'}, {U'м', U'm'}, {U'Н', U'N'}, {U'н', U'n'},
    {U'О', U'O'}, {U'о', U'o'}, {U'П', U'P'}, {U'п', U'p'}, {U'Р', U'R'}, {U'р', U'r'},
    {U'С', U'S'}, {U'с', U's'}, {U'Т', U'T'}, {U'т', U't'}, {U'У', U'U'}, {U'у', U'u'},
    {U'Ф', U'F'}, {U'ф', U'f'}, {U'Х', U'H'}, {U'х', U'h'}, {U'Ц', U'C'}, {U'ц', U'c'},
    {U'Ч', U'Č'}, {U'ч', U'č'}, {U'Ш', U'Š'}, {U'ш', U'š'}, {U'Щ', U'Ŝ'}, {U'щ', U'ŝ'},
    {U'Ъ', U'ˮ'}, {U'ъ', U'ʺ'}, {U'Ы', U'Y'}, {U'ы', U'y'},
    {U'Ь', U'ˊ'}, {U'ь', U'ʹ'}, {U'Э', U'È'}, {U'э', U'è'},
    {U'Ю', U'Û'}, {U'ю', U'û'}, {U'Я', U'Â'}, {U'я', U'â'},
    // Ukrainian, Belarusian, Macedonian and historical letters.
    {U'Ѓ', U'Ǵ'}, {U'ѓ', U'ǵ'}, {U'Є', U'Ê'}, {U'є', U'ê'}, {U'Ѕ', U'Ẑ'}, {U'ѕ', U'ẑ'},
    {U'І', U'Ì'}, {U'і', U'ì'}, {U'Ї', U'Ï'}, {U'ї', U'ï'}, {U'Ќ', U'Ḱ'}, {U'ќ', U'ḱ'},
    {U'Ў', U'Ŭ'}, {U'ў', U'ŭ'}, {U'Ѣ', U'Ě'}, {U'ѣ', U'ě'}, {U'Ѫ', U'Ǎ'}, {U'ѫ', U'ǎ'},
    {U'Ѵ', U'Ỳ'}, {U'ѵ', U'ỳ'},
};

std::string map_text(std::string_view text, const std::unordered_map<char32_t, char32_t>& m) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : utf8::decode(text)) {
    auto it = m.find(c);
    utf8::append(out, it == m.end() ? c : it->second);
  }
  return out;
}

bpe::Symbol map_symbol(const bpe::Symbol& s, const TranslitTable& table) {
  return bpe::Symbol{table.to_cyrillic(s.text), s.eow};
}

}  // namespace

TranslitTable::TranslitTable(std::vector<std::pair<char32_t, char32_t>> pairs) : pairs_(std::move(pairs)) {
  for (const auto& [cyr, lat] : pairs_) {
    if (!forward_.emplace(cyr, lat).second) {
      throw InputError("transliteration table: duplicate source " + utf8::encode(cyr));
    }
    if (!backward_.emplace(lat, cyr).second) {
      throw InputError("transliteration table: Latin target " + utf8::encode(lat) + " is used twice");
    }
  }
  for (const auto& [cyr, lat] : pairs_) {
    if (backward_.contains(cyr) || forward_.contains(lat)) {
      throw InputError("transliteration table: " + utf8::encode(cyr) + " appears on both sides");
    }
  }
}

const TranslitTable& TranslitTable::iso9() {
  static const TranslitTable table(kIso9);
  return table;
}

TranslitTable TranslitTable::read(std::istream& in) {
  std::vector<std::pair<char32_t, char32_t>> pairs;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("transliteration table line " + std::to_string(line_no) + ": expected '<cyrillic>\\t<latin>'");
    }
    const auto cyr = utf8::decode(std::string_view(line).substr(0, tab));
    const auto lat = utf8::decode(std::string_view(line).substr(tab + 1));
    if (cyr.size() != 1 || lat.size() != 1) {
      throw InputError("transliteration table line " + std::to_string(line_no) +
                       ": each side must be exactly one character");
    }
    pairs.emplace_back(cyr[0], lat[0]);
  }
  return TranslitTable(std::move(pairs));
}

TranslitTable TranslitTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open transliteration table '" + path + "'");
  return read(in);
}

void TranslitTable::write(std::ostream& out) const {
  for (const auto& [cyr, lat] : pairs_) out << utf8::encode(cyr) << '\t' << utf8::encode(lat) << '\n';
}

std::string TranslitTable::to_latin(std::string_view text) const { return map_text(text, forward_); }
std::string TranslitTable::to_cyrillic(std::string_view text) const { return map_text(text, backward_); }

char32_t TranslitTable::to_latin(char32_t c) const {
  auto it = forward_.find(c);
  return it == forward_.end() ? c : it->second;
}

char32_t TranslitTable::to_cyrillic(char32_t c) const {
  auto it = backward_.find(c);
  return it == backward_.end() ? c : it->second;
}

std::string to_latin(std::string_view text) { return TranslitTable::iso9().to_latin(text); }
std::string to_cyrillic(std::string_view text) { return TranslitTable::iso9().to_cyrillic(text); }

bpe::MergeTable cyrillic_image(const bpe::MergeTable& latin, const TranslitTable& table) {
  bpe::MergeTable out;
  out.source_note = "cyrillic image of: " + latin.source_note;
  out.rules.reserve(latin.size());
  for (const auto& rule : latin.rules) {
    out.rules.push_back(bpe::MergeRule{map_symbol(rule.left, table), map_symbol(rule.right, table), rule.rank});
  }
  return out;
}

BiScriptMergeTable learn_biscript_bpe(std::istream& english, std::istream& russian, std::size_t num_merges,
                                      bpe::LearnOptions options, const TranslitTable& table) {
  // Transliteration is scalar-wise and leaves whitespace alone, so
  // latinizing the word types is the same as latinizing the text. Cyrillic
  // on the English side is latinized too; otherwise a rule and its image
  // could both be learned and the Cyrillic table would repeat a pair.
  bpe::VocabCounts vocab;
  for (const auto& [word, n] : bpe::build_vocab(english)) vocab[table.to_latin(word)] += n;
  for (const auto& [word, n] : bpe::build_vocab(russian)) vocab[table.to_latin(word)] += n;

  BiScriptMergeTable out;
  out.latin = bpe::learn_bpe(vocab, num_merges, options);
  out.cyrillic = cyrillic_image(out.latin, table);
  return out;
}

bpe::Segmenter russian_segmenter(const BiScriptMergeTable& tables) {
  if (tables.latin.size() != tables.cyrillic.size()) {
    throw InputError("bi-script tables differ in size: " + std::to_string(tables.latin.size()) + " vs " +
                     std::to_string(tables.cyrillic.size()));
  }
  std::vector<std::pair<bpe::Symbol, bpe::Symbol>> ordered;
  ordered.reserve(2 * tables.latin.size());
  for (std::size_t i = 0; i < tables.latin.size(); ++i) {
    const auto& lat = tables.latin.rules[i];
    const auto& cyr = tables.cyrillic.rules[i];
    ordered.emplace_back(lat.left, lat.right);
    ordered.emplace_back(cyr.left, cyr.right);
  }
  return bpe::Segmenter(ordered);
}

std::string segment_russian(const BiScriptMergeTable& tables, std::string_view line) {
  return russian_segmenter(tables).segment_line(line);
}

void save_biscript(const std::string& basename, const BiScriptMergeTable& tables) {
  bpe::save_merge_table(basename + ".lat", tables.latin);
  bpe::save_merge_table(basename + ".cyr", tables.cyrillic);
}

BiScriptMergeTable load_biscript(const std::string& basename) {
  return BiScriptMergeTable{bpe::load_merge_table(basename + ".lat"), bpe::load_merge_table(basename + ".cyr")};
}

}  // namespace nmtprep::translit
