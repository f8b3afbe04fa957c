#pragma once

// Byte-pair encoding: learning merge tables from word counts and applying
// them to segment text into subword units.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nmtprep::bpe {

/// Serialized form of the end-of-word marker in merge-table files.
inline constexpr std::string_view kEowLiteral = "</w>";
/// Suffix carried by every non-final subword in segmented text.
inline constexpr std::string_view kContinuation = "@@";

/// A BPE symbol: UTF-8 text plus the end-of-word flag. The bare end-of-word
/// symbol has empty text; after a merge absorbs it, the flag travels with the
/// merged text. A symbol with text "</w>" and no flag is therefore distinct
/// from the marker even though both render the same.
struct Symbol {
  std::string text;
  bool eow = false;

  static Symbol end_of_word() { return Symbol{"", true}; }
  bool is_bare_eow() const noexcept { return eow && text.empty(); }
  /// Text with `</w>` appended when the end-of-word flag is set.
  std::string render() const;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// Learning tie-break order: by rendered text (UTF-8 byte order is code
/// point order), then by flag.
std::strong_ordering compare_symbols(const Symbol& a, const Symbol& b);

/// Concatenation of two adjacent symbols. The result inherits the right
/// symbol's end-of-word flag.
Symbol merge_symbols(const Symbol& left, const Symbol& right);

/// Character spelling of a word followed by the bare end-of-word symbol.
using WordSpelling = std::vector<Symbol>;
WordSpelling spell(std::string_view word);

/// Word -> frequency. Ordered so that vocabulary dumps are reproducible.
using VocabCounts = std::map<std::string, std::uint64_t, std::less<>>;

struct MergeRule {
  Symbol left;
  Symbol right;
  std::size_t rank = 0;

  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

struct MergeTable {
  std::vector<MergeRule> rules;
  std::string source_note;

  std::size_t size() const noexcept { return rules.size(); }
  bool empty() const noexcept { return rules.empty(); }
  /// The first `k` rules (all of them if k >= size()).
  MergeTable truncated(std::size_t k) const;
};

/// Compares rule lists only; the provenance note is ignored.
bool same_rules(const MergeTable& a, const MergeTable& b);

// ---------------------------------------------------------------------------
// Vocabulary

/// Counts whitespace-delimited tokens of a UTF-8 stream, one sentence per
/// line. Throws DecodeError with the stream byte offset on invalid input.
VocabCounts build_vocab(std::istream& corpus);
VocabCounts build_vocab_from_string(std::string_view corpus);

/// Adds the counts of `other` into `into`.
void add_counts(VocabCounts& into, const VocabCounts& other);

// ---------------------------------------------------------------------------
// Learning

struct LearnOptions {
  /// Learning stops once the most frequent pair occurs fewer times.
  std::uint64_t min_frequency = 2;
  /// Workers used for the initial pair count. Results do not depend on it.
  std::size_t threads = 1;
};

struct SymbolPairLess {
  bool operator()(const std::pair<Symbol, Symbol>& a, const std::pair<Symbol, Symbol>& b) const;
};

/// Adjacent-pair frequencies keyed by symbol pair.
using PairCounts = std::map<std::pair<Symbol, Symbol>, std::uint64_t, SymbolPairLess>;

/// Incremental learner. Holds the segmented vocabulary, pair counts and the
/// pair -> words index, and updates them locally after every merge instead of
/// recounting. Exposed so tests can compare its state against a recount.
class Learner {
 public:
  explicit Learner(const VocabCounts& vocab, LearnOptions options = {});
  ~Learner();
  Learner(Learner&&) noexcept;
  Learner& operator=(Learner&&) noexcept;

  /// Finds the most frequent pair (ties: smallest by compare_symbols on left,
  /// then right), merges all its occurrences and returns the rule. Returns
  /// nullopt when no pair reaches the minimum frequency.
  std::optional<MergeRule> step();

  std::size_t merges_done() const noexcept;

  /// Current pair counts (zero counts omitted).
  PairCounts pair_counts() const;
  /// Current segmentation of every vocabulary word with its frequency.
  std::vector<std::pair<WordSpelling, std::uint64_t>> segmented_vocab() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Learns up to `num_merges` rules. Throws InputError on an empty vocabulary
/// or num_merges == 0.
MergeTable learn_bpe(const VocabCounts& vocab, std::size_t num_merges, LearnOptions options = {});

/// Learns one table from the word counts of both sides summed.
MergeTable learn_joint_bpe(std::istream& source, std::istream& target, std::size_t num_merges,
                           LearnOptions options = {});

// ---------------------------------------------------------------------------
// Application

/// Applies an ordered rule list. Rules are considered once each, in order;
/// a considered rule merges every adjacent occurrence in the word left to
/// right without overlap. Rules are skipped cheaply when their pair is
/// absent, so application costs O(L^2) lookups per word regardless of the
/// table size.
class Segmenter {
 public:
  explicit Segmenter(const MergeTable& table);
  /// Rules in application order; duplicates keep their first position.
  explicit Segmenter(const std::vector<std::pair<Symbol, Symbol>>& ordered_rules);

  std::vector<Symbol> apply(std::string_view word) const;
  /// Segments one line. Whitespace between tokens is copied verbatim and
  /// non-final subwords carry the continuation marker.
  std::string segment_line(std::string_view line) const;

  std::size_t size() const noexcept { return order_.size(); }

 private:
  void add(const Symbol& left, const Symbol& right);
  std::optional<std::size_t> position(const Symbol& left, const Symbol& right) const;

  std::unordered_map<std::string, std::size_t> order_;
};

std::vector<Symbol> apply_bpe(const MergeTable& table, std::string_view word);
std::string segment_line(const MergeTable& table, std::string_view line);

/// Renders one word's segments: non-final subwords get "@@", the bare
/// end-of-word symbol is never printed.
std::string render_segments(const std::vector<Symbol>& segments);

struct DesegmentResult {
  std::string text;
  /// The line ended in a continuation marker, which was stripped.
  bool dangling_marker = false;
};

/// Joins subwords: every "@@ " is removed and a trailing "@@" is stripped.
DesegmentResult desegment_line(std::string_view segmented);

// ---------------------------------------------------------------------------
// Merge-table files
//
//   #bpe-merges v1 count=<N>
//   <left> <right>            (one per rule, rank = line order)
//
// The end-of-word flag is written as "</w>" appended to the symbol text.

void write_merge_table(std::ostream& out, const MergeTable& table);
MergeTable read_merge_table(std::istream& in);
void save_merge_table(const std::string& path, const MergeTable& table);
MergeTable load_merge_table(const std::string& path);

}  // namespace nmtprep::bpe
