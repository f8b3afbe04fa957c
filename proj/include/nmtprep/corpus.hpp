#pragma once

// Training-corpus construction: sampling, mixing with copy counts, length
// filtering, shuffling and data statistics.
//
// Corpora are handled as aligned rows: row i holds line i of every side
// (one side for monolingual data, two for parallel data). Rows come either
// from one file per side or from a single tab-separated stream.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nmtprep::corpus {

using Row = std::vector<std::string>;

class RowSource {
 public:
  /// One file per side. Throws InputError if a file cannot be opened.
  static RowSource open(const std::vector<std::filesystem::path>& paths);
  /// Borrowed streams, one per side.
  static RowSource streams(std::vector<std::istream*> sides);
  /// One stream; each line is split on tabs into the sides of one row.
  static RowSource tsv(std::istream& in);

  /// Next aligned row, or nullopt at the end. Throws InputError when the
  /// sides have different line counts.
  std::optional<Row> next();
  std::size_t rows_read() const noexcept { return rows_; }

 private:
  std::vector<std::unique_ptr<std::ifstream>> owned_;
  std::vector<std::istream*> sides_;
  bool tsv_ = false;
  std::size_t rows_ = 0;
};

class RowSink {
 public:
  static RowSink create(const std::vector<std::filesystem::path>& paths);
  static RowSink streams(std::vector<std::ostream*> sides);
  /// Writes each row as one tab-joined line.
  static RowSink tsv(std::ostream& out);

  void write(const Row& row);
  std::size_t rows_written() const noexcept { return rows_; }
  void flush();

 private:
  std::vector<std::unique_ptr<std::ofstream>> owned_;
  std::vector<std::ostream*> sides_;
  bool tsv_ = false;
  std::size_t rows_ = 0;
};

/// Aligned source/target files.
struct ParallelCorpus {
  std::filesystem::path source_path;
  std::filesystem::path target_path;
  std::size_t line_count = 0;

  /// Counts lines of both files; throws InputError if they differ.
  static ParallelCorpus open(const std::filesystem::path& source, const std::filesystem::path& target);
};

std::size_t count_lines(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

/// Uniform sample of `n` rows without replacement in one pass (reservoir
/// sampling, Rng v1). Output keeps the input order. Throws InputError naming
/// both numbers when the input has fewer than `n` rows.
std::size_t sample_lines(RowSource& in, std::size_t n, std::uint64_t seed, RowSink& out);
std::vector<Row> sample_rows(RowSource& in, std::size_t n, std::uint64_t seed);

/// Keeps a row iff every side has at most `max_len` whitespace tokens.
/// Returns the number of rows kept.
std::size_t length_filter(RowSource& in, std::size_t max_len, RowSink& out);
bool within_length(const Row& row, std::size_t max_len);

/// Seeded Fisher-Yates permutation of all rows (Rng v1).
std::size_t shuffle_corpus(RowSource& in, std::uint64_t seed, RowSink& out);
void shuffle_rows(std::vector<Row>& rows, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Mixing

struct MixComponent {
  std::filesystem::path source_path;
  std::filesystem::path target_path;
  std::size_t copies = 1;
  std::optional<std::size_t> sample;
};

struct MixRecipe {
  std::vector<MixComponent> components;
  std::uint64_t seed = 0;
  std::size_t max_len = 50;

  /// Number of pairs mix_corpora will write.
  std::size_t expected_pairs() const;
};

/// Recipe file:
///   seed=<int>
///   max_len=<int>
///   <src path>\t<tgt path>\tcopies=<k>[\tsample=<n>]
/// Blank lines and '#' comments are ignored. Relative paths are resolved
/// against `base_dir`.
MixRecipe parse_recipe(std::istream& in, const std::filesystem::path& base_dir = {});
MixRecipe load_recipe(const std::filesystem::path& path);
void write_recipe(std::ostream& out, const MixRecipe& recipe);

/// Concatenates the components in recipe order, each repeated `copies`
/// times; a sampled component is sampled once (seed derived from the recipe
/// seed and the component index) and the same sample is repeated. Filtering
/// and shuffling are separate steps. Returns the number of pairs written.
std::size_t mix_corpora(const MixRecipe& recipe, RowSink& out);

// ---------------------------------------------------------------------------
// Statistics

enum class DataLabel { Parallel, SyntheticToEnglish, SyntheticFromEnglish };

std::string_view label_name(DataLabel label);
/// Accepts "parallel", "synthetic-to-en" and "synthetic-from-en".
DataLabel parse_label(std::string_view text);

struct LabeledCount {
  std::string language_pair;
  DataLabel label = DataLabel::Parallel;
  std::uint64_t pairs = 0;
};

struct CorpusStats {
  std::vector<std::string> language_pairs;
  std::map<std::pair<std::string, DataLabel>, std::uint64_t> counts;

  std::uint64_t count(const std::string& pair, DataLabel label) const;
  std::uint64_t total(const std::string& pair) const;
  std::uint64_t total() const;
  /// Table with one row per data type and one column per language pair, in
  /// millions of sentence pairs.
  std::string render() const;
};

/// Sums counts per (language pair, label); language pairs keep first-seen
/// order.
CorpusStats corpus_stats(const std::vector<LabeledCount>& components);

}  // namespace nmtprep::corpus
