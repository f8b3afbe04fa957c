#include "nmtprep/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "nmtprep/error.hpp"
#include "nmtprep/parallel.hpp"
#include "nmtprep/text.hpp"
#include "nmtprep/utf8.hpp"

namespace nmtprep::bpe {

std::string Symbol::render() const {
  if (!eow) return text;
  std::string out = text;
  out += kEowLiteral;
  return out;
}

std::strong_ordering compare_symbols(const Symbol& a, const Symbol& b) {
  if (auto c = a.render() <=> b.render(); c != 0) return c;
  return a.eow <=> b.eow;
}

bool SymbolPairLess::operator()(const std::pair<Symbol, Symbol>& a,
                                const std::pair<Symbol, Symbol>& b) const {
  if (auto c = compare_symbols(a.first, b.first); c != 0) return c < 0;
  return compare_symbols(a.second, b.second) < 0;
}

Symbol merge_symbols(const Symbol& left, const Symbol& right) {
  return Symbol{left.text + right.text, right.eow};
}

WordSpelling spell(std::string_view word) {
  WordSpelling out;
  for (auto& ch : utf8::split_scalars(word)) out.push_back(Symbol{std::move(ch), false});
  out.push_back(Symbol::end_of_word());
  return out;
}

MergeTable MergeTable::truncated(std::size_t k) const {
  MergeTable out;
  out.source_note = source_note;
  const std::size_t n = std::min(k, rules.size());
  out.rules.assign(rules.begin(), rules.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

bool same_rules(const MergeTable& a, const MergeTable& b) { return a.rules == b.rules; }

// ---------------------------------------------------------------------------
// Vocabulary

VocabCounts build_vocab(std::istream& corpus) {
  VocabCounts vocab;
  std::size_t offset = 0;
  for (std::string line; std::getline(corpus, line);) {
    utf8::validate(line, offset);
    for (auto token : split_whitespace(line)) {
      auto it = vocab.find(token);
      if (it == vocab.end()) {
        vocab.emplace(std::string(token), 1);
      } else {
        ++it->second;
      }
    }
    offset += line.size() + 1;
  }
  return vocab;
}

VocabCounts build_vocab_from_string(std::string_view corpus) {
  std::istringstream in{std::string(corpus)};
  return build_vocab(in);
}

void add_counts(VocabCounts& into, const VocabCounts& other) {
  for (const auto& [word, n] : other) into[word] += n;
}

// ---------------------------------------------------------------------------
// Learning

namespace {

using SymbolId = std::uint32_t;

constexpr std::uint64_t pack(SymbolId l, SymbolId r) {
  return (static_cast<std::uint64_t>(l) << 32) | r;
}
constexpr SymbolId left_of(std::uint64_t key) { return static_cast<SymbolId>(key >> 32); }
constexpr SymbolId right_of(std::uint64_t key) { return static_cast<SymbolId>(key & 0xFFFFFFFFu); }

std::string intern_key(const Symbol& s) {
  std::string key(1, s.eow ? '1' : '0');
  key += s.text;
  return key;
}

}  // namespace

struct Learner::Impl {
  struct Entry {
    std::uint64_t count;
    SymbolId left;
    SymbolId right;
  };

  struct EntryOrder {
    const Impl* self;
    // Highest count first, then the tie-break order on (left, right).
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.count != b.count) return a.count > b.count;
      if (a.left != b.left) {
        if (auto c = self->compare(a.left, b.left); c != 0) return c < 0;
      }
      if (a.right != b.right) return self->compare(a.right, b.right) < 0;
      return false;
    }
  };

  LearnOptions options;
  std::vector<Symbol> symbols;
  std::vector<std::string> renders;
  std::unordered_map<std::string, SymbolId> ids;

  std::vector<std::vector<SymbolId>> words;
  std::vector<std::uint64_t> freqs;

  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::unordered_map<std::uint64_t, std::unordered_set<std::uint32_t>> where;
  std::set<Entry, EntryOrder> ranking{EntryOrder{this}};
  std::size_t merges = 0;

  std::strong_ordering compare(SymbolId a, SymbolId b) const {
    if (auto c = renders[a] <=> renders[b]; c != 0) return c;
    return symbols[a].eow <=> symbols[b].eow;
  }

  SymbolId intern(const Symbol& s) {
    auto key = intern_key(s);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    const auto id = static_cast<SymbolId>(symbols.size());
    symbols.push_back(s);
    renders.push_back(s.render());
    ids.emplace(std::move(key), id);
    return id;
  }

  void set_count(std::uint64_t key, std::uint64_t old_count, std::uint64_t new_count) {
    if (old_count > 0) ranking.erase(Entry{old_count, left_of(key), right_of(key)});
    if (new_count > 0) {
      ranking.insert(Entry{new_count, left_of(key), right_of(key)});
      counts[key] = new_count;
    } else {
      counts.erase(key);
      where.erase(key);
    }
  }

  void init(const VocabCounts& vocab) {
    words.reserve(vocab.size());
    freqs.reserve(vocab.size());
    for (const auto& [word, n] : vocab) {
      std::vector<SymbolId> seq;
      for (const auto& s : spell(word)) seq.push_back(intern(s));
      words.push_back(std::move(seq));
      freqs.push_back(n);
    }

    const std::size_t threads = std::max<std::size_t>(1, options.threads);
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> partial(threads);
    const std::size_t chunk = (words.size() + threads - 1) / threads;
    parallel_for_slices(threads, threads, [&](std::size_t tb, std::size_t te) {
      for (std::size_t t = tb; t < te; ++t) {
        const std::size_t begin = std::min(words.size(), t * chunk);
        const std::size_t end = std::min(words.size(), begin + chunk);
        for (std::size_t w = begin; w < end; ++w) {
          const auto& seq = words[w];
          for (std::size_t i = 0; i + 1 < seq.size(); ++i) partial[t][pack(seq[i], seq[i + 1])] += freqs[w];
        }
      }
    });
    for (auto& p : partial) {
      for (const auto& [key, n] : p) counts[key] += n;
    }
    for (std::uint32_t w = 0; w < words.size(); ++w) {
      const auto& seq = words[w];
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) where[pack(seq[i], seq[i + 1])].insert(w);
    }
    for (const auto& [key, n] : counts) ranking.insert(Entry{n, left_of(key), right_of(key)});
  }

  std::optional<MergeRule> step() {
    if (ranking.empty()) return std::nullopt;
    const Entry best = *ranking.begin();
    if (best.count < options.min_frequency) return std::nullopt;

    const SymbolId l = best.left;
    const SymbolId r = best.right;
    const SymbolId merged = intern(merge_symbols(symbols[l], symbols[r]));
    MergeRule rule{symbols[l], symbols[r], merges};

    std::vector<std::uint32_t> affected(where[pack(l, r)].begin(), where[pack(l, r)].end());
    std::unordered_map<std::uint64_t, std::int64_t> delta;

    for (const std::uint32_t w : affected) {
      auto& seq = words[w];
      const auto f = static_cast<std::int64_t>(freqs[w]);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const auto key = pack(seq[i], seq[i + 1]);
        delta[key] -= f;
        if (auto it = where.find(key); it != where.end()) it->second.erase(w);
      }
      std::vector<SymbolId> next;
      next.reserve(seq.size());
      for (std::size_t i = 0; i < seq.size();) {
        if (i + 1 < seq.size() && seq[i] == l && seq[i + 1] == r) {
          next.push_back(merged);
          i += 2;
        } else {
          next.push_back(seq[i]);
          ++i;
        }
      }
      seq = std::move(next);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const auto key = pack(seq[i], seq[i + 1]);
        delta[key] += f;
        where[key].insert(w);
      }
    }

    for (const auto& [key, d] : delta) {
      if (d == 0) continue;
      auto it = counts.find(key);
      const std::uint64_t old_count = it == counts.end() ? 0 : it->second;
      const auto new_count = static_cast<std::uint64_t>(static_cast<std::int64_t>(old_count) + d);
      set_count(key, old_count, new_count);
    }
    ++merges;
    return rule;
  }
};

Learner::Learner(const VocabCounts& vocab, LearnOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  impl_->init(vocab);
}

Learner::~Learner() = default;
Learner::Learner(Learner&&) noexcept = default;
Learner& Learner::operator=(Learner&&) noexcept = default;

std::optional<MergeRule> Learner::step() { return impl_->step(); }

std::size_t Learner::merges_done() const noexcept { return impl_->merges; }

PairCounts Learner::pair_counts() const {
  PairCounts out;
  for (const auto& [key, n] : impl_->counts) {
    out.emplace(std::pair{impl_->symbols[left_of(key)], impl_->symbols[right_of(key)]}, n);
  }
  return out;
}

std::vector<std::pair<WordSpelling, std::uint64_t>> Learner::segmented_vocab() const {
  std::vector<std::pair<WordSpelling, std::uint64_t>> out;
  out.reserve(impl_->words.size());
  for (std::size_t w = 0; w < impl_->words.size(); ++w) {
    WordSpelling spelling;
    for (auto id : impl_->words[w]) spelling.push_back(impl_->symbols[id]);
    out.emplace_back(std::move(spelling), impl_->freqs[w]);
  }
  return out;
}

MergeTable learn_bpe(const VocabCounts& vocab, std::size_t num_merges, LearnOptions options) {
  if (vocab.empty()) throw InputError("learn_bpe: empty vocabulary");
  if (num_merges == 0) throw InputError("learn_bpe: number of merges must be positive");
  Learner learner(vocab, options);
  MergeTable table;
  table.rules.reserve(std::min<std::size_t>(num_merges, 1 << 20));
  while (table.rules.size() < num_merges) {
    auto rule = learner.step();
    if (!rule) break;
    table.rules.push_back(std::move(*rule));
  }
  table.source_note = "words=" + std::to_string(vocab.size()) + " requested=" +
                      std::to_string(num_merges) + " learned=" + std::to_string(table.size());
  return table;
}

MergeTable learn_joint_bpe(std::istream& source, std::istream& target, std::size_t num_merges,
                           LearnOptions options) {
  auto vocab = build_vocab(source);
  add_counts(vocab, build_vocab(target));
  return learn_bpe(vocab, num_merges, options);
}

// ---------------------------------------------------------------------------
// Application

namespace {

std::string pair_key(const Symbol& l, const Symbol& r) {
  std::string key;
  key.reserve(l.text.size() + r.text.size() + 12);
  key += std::to_string(l.text.size());
  key += l.eow ? '+' : '-';
  key += l.text;
  key += r.eow ? '+' : '-';
  key += r.text;
  return key;
}

}  // namespace

Segmenter::Segmenter(const MergeTable& table) {
  order_.reserve(table.size());
  for (const auto& rule : table.rules) add(rule.left, rule.right);
}

Segmenter::Segmenter(const std::vector<std::pair<Symbol, Symbol>>& ordered_rules) {
  order_.reserve(ordered_rules.size());
  for (const auto& [l, r] : ordered_rules) add(l, r);
}

void Segmenter::add(const Symbol& left, const Symbol& right) {
  order_.try_emplace(pair_key(left, right), order_.size());
}

std::optional<std::size_t> Segmenter::position(const Symbol& left, const Symbol& right) const {
  auto it = order_.find(pair_key(left, right));
  if (it == order_.end()) return std::nullopt;
  return it->second;
}

std::vector<Symbol> Segmenter::apply(std::string_view word) const {
  std::vector<Symbol> syms = spell(word);
  std::size_t next_rule = 0;
  for (;;) {
    std::optional<std::size_t> best;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      auto pos = position(syms[i], syms[i + 1]);
      if (pos && *pos >= next_rule && (!best || *pos < *best)) {
        best = pos;
        at = i;
      }
    }
    if (!best) break;
    const Symbol left = syms[at];
    const Symbol right = syms[at + 1];
    std::vector<Symbol> merged;
    merged.reserve(syms.size());
    for (std::size_t i = 0; i < syms.size();) {
      if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
        merged.push_back(merge_symbols(syms[i], syms[i + 1]));
        i += 2;
      } else {
        merged.push_back(std::move(syms[i]));
        ++i;
      }
    }
    syms = std::move(merged);
    next_rule = *best + 1;
  }
  return syms;
}

std::string Segmenter::segment_line(std::string_view line) const {
  std::string out;
  out.reserve(line.size() + line.size() / 2);
  std::size_t i = 0;
  while (i < line.size()) {
    const std::size_t ws = i;
    while (i < line.size() && is_space(line[i])) ++i;
    out.append(line.substr(ws, i - ws));
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out += render_segments(apply(line.substr(start, i - start)));
  }
  return out;
}

std::vector<Symbol> apply_bpe(const MergeTable& table, std::string_view word) {
  return Segmenter(table).apply(word);
}

std::string segment_line(const MergeTable& table, std::string_view line) {
  return Segmenter(table).segment_line(line);
}

std::string render_segments(const std::vector<Symbol>& segments) {
  std::vector<std::string_view> pieces;
  pieces.reserve(segments.size());
  for (const auto& s : segments) {
    if (!s.text.empty()) pieces.push_back(s.text);
  }
  std::string out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    out += pieces[i];
    if (i + 1 < pieces.size()) {
      out += kContinuation;
      out += ' ';
    }
  }
  return out;
}

DesegmentResult desegment_line(std::string_view segmented) {
  DesegmentResult result;
  result.text.reserve(segmented.size());
  std::size_t i = 0;
  while (i < segmented.size()) {
    if (segmented.compare(i, 3, "@@ ") == 0) {
      i += 3;
    } else {
      result.text.push_back(segmented[i]);
      ++i;
    }
  }
  if (segmented.ends_with(kContinuation) && result.text.ends_with(kContinuation)) {
    result.text.resize(result.text.size() - kContinuation.size());
    result.dangling_marker = true;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Files

namespace {

constexpr std::string_view kHeaderPrefix = "#bpe-merges v1 count=";

Symbol parse_symbol(std::string_view field) {
  if (field.ends_with(kEowLiteral)) {
    return Symbol{std::string(field.substr(0, field.size() - kEowLiteral.size())), true};
  }
  return Symbol{std::string(field), false};
}

}  // namespace

void write_merge_table(std::ostream& out, const MergeTable& table) {
  out << kHeaderPrefix << table.size() << '\n';
  for (const auto& rule : table.rules) out << rule.left.render() << ' ' << rule.right.render() << '\n';
}

MergeTable read_merge_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with(kHeaderPrefix)) {
    throw InputError("merge table: missing '#bpe-merges v1 count=<N>' header");
  }
  std::size_t declared = 0;
  try {
    std::size_t used = 0;
    const auto count_text = line.substr(kHeaderPrefix.size());
    declared = std::stoull(count_text, &used);
    if (used != count_text.size()) throw std::invalid_argument("trailing text");
  } catch (const std::logic_error&) {
    throw InputError("merge table: bad count in header '" + line + "'");
  }

  MergeTable table;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      throw InputError("merge table line " + std::to_string(line_no) + ": expected '<left> <right>'");
    }
    utf8::validate(line);
    Symbol left = parse_symbol(std::string_view(line).substr(0, space));
    Symbol right = parse_symbol(std::string_view(line).substr(space + 1));
    if (left.eow) {
      throw InputError("merge table line " + std::to_string(line_no) +
                       ": end-of-word symbol cannot be a left operand");
    }
    if (!seen.insert(pair_key(left, right)).second) {
      throw InputError("merge table line " + std::to_string(line_no) + ": duplicate rule '" + line + "'");
    }
    table.rules.push_back(MergeRule{std::move(left), std::move(right), table.rules.size()});
  }
  if (table.size() != declared) {
    throw InputError("merge table: header declares " + std::to_string(declared) + " rules but file has " +
                     std::to_string(table.size()));
  }
  return table;
}

void save_merge_table(const std::string& path, const MergeTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write merge table '" + path + "'");
  write_merge_table(out, table);
  if (!out) throw InputError("error writing merge table '" + path + "'");
}

MergeTable load_merge_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open merge table '" + path + "'");
  auto table = read_merge_table(in);
  table.source_note = path;
  return table;
}

}  // namespace nmtprep::bpe
