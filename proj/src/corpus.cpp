#include "nmtprep/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "nmtprep/error.hpp"
#include "nmtprep/rng.hpp"
#include "nmtprep/text.hpp"

namespace nmtprep::corpus {

namespace fs = std::filesystem;

RowSource RowSource::open(const std::vector<fs::path>& paths) {
  RowSource src;
  for (const auto& p : paths) {
    auto in = std::make_unique<std::ifstream>(p, std::ios::binary);
    if (!*in) throw InputError("cannot open '" + p.string() + "'");
    src.sides_.push_back(in.get());
    src.owned_.push_back(std::move(in));
  }
  return src;
}

RowSource RowSource::streams(std::vector<std::istream*> sides) {
  RowSource src;
  src.sides_ = std::move(sides);
  return src;
}

RowSource RowSource::tsv(std::istream& in) {
  RowSource src;
  src.sides_ = {&in};
  src.tsv_ = true;
  return src;
}

std::optional<Row> RowSource::next() {
  if (sides_.empty()) return std::nullopt;
  Row row;
  if (tsv_) {
    std::string line;
    if (!std::getline(*sides_[0], line)) return std::nullopt;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      row.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    ++rows_;
    return row;
  }
  std::size_t ended = 0;
  row.resize(sides_.size());
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    if (!std::getline(*sides_[i], row[i])) ++ended;
  }
  if (ended == sides_.size()) return std::nullopt;
  if (ended != 0) {
    throw InputError("aligned inputs have different line counts (mismatch after line " + std::to_string(rows_) +
                     ")");
  }
  ++rows_;
  return row;
}

RowSink RowSink::create(const std::vector<fs::path>& paths) {
  RowSink sink;
  for (const auto& p : paths) {
    auto out = std::make_unique<std::ofstream>(p, std::ios::binary);
    if (!*out) throw InputError("cannot write '" + p.string() + "'");
    sink.sides_.push_back(out.get());
    sink.owned_.push_back(std::move(out));
  }
  return sink;
}

RowSink RowSink::streams(std::vector<std::ostream*> sides) {
  RowSink sink;
  sink.sides_ = std::move(sides);
  return sink;
}

RowSink RowSink::tsv(std::ostream& out) {
  RowSink sink;
  sink.sides_ = {&out};
  sink.tsv_ = true;
  return sink;
}

void RowSink::write(const Row& row) {
  if (tsv_) {
    *sides_[0] << join(row, "\t") << '\n';
  } else {
    if (row.size() != sides_.size()) {
      throw InputError("row has " + std::to_string(row.size()) + " sides but output has " +
                       std::to_string(sides_.size()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) *sides_[i] << row[i] << '\n';
  }
  ++rows_;
}

void RowSink::flush() {
  for (auto* s : sides_) {
    s->flush();
    if (!*s) throw InputError("write error");
  }
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

ParallelCorpus ParallelCorpus::open(const fs::path& source, const fs::path& target) {
  const auto ns = count_lines(source);
  const auto nt = count_lines(target);
  if (ns != nt) {
    throw InputError("'" + source.string() + "' has " + std::to_string(ns) + " lines but '" + target.string() +
                     "' has " + std::to_string(nt));
  }
  return ParallelCorpus{source, target, ns};
}

// ---------------------------------------------------------------------------

std::vector<Row> sample_rows(RowSource& in, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<std::size_t, Row>> reservoir;
  reservoir.reserve(std::min<std::size_t>(n, 1 << 20));
  std::size_t seen = 0;
  while (auto row = in.next()) {
    if (reservoir.size() < n) {
      reservoir.emplace_back(seen, std::move(*row));
    } else if (n > 0) {
      const auto j = rng.below(seen + 1);
      if (j < n) reservoir[j] = {seen, std::move(*row)};
    }
    ++seen;
  }
  if (seen < n) {
    throw InputError("sample: requested " + std::to_string(n) + " lines but the corpus has only " +
                     std::to_string(seen));
  }
  std::sort(reservoir.begin(), reservoir.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Row> out;
  out.reserve(reservoir.size());
  for (auto& [idx, row] : reservoir) out.push_back(std::move(row));
  return out;
}

std::size_t sample_lines(RowSource& in, std::size_t n, std::uint64_t seed, RowSink& out) {
  const auto rows = sample_rows(in, n, seed);
  for (const auto& r : rows) out.write(r);
  return rows.size();
}

bool within_length(const Row& row, std::size_t max_len) {
  return std::all_of(row.begin(), row.end(), [&](const std::string& side) { return count_tokens(side) <= max_len; });
}

std::size_t length_filter(RowSource& in, std::size_t max_len, RowSink& out) {
  std::size_t kept = 0;
  while (auto row = in.next()) {
    if (within_length(*row, max_len)) {
      out.write(*row);
      ++kept;
    }
  }
  return kept;
}

void shuffle_rows(std::vector<Row>& rows, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = rows.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(rows[i - 1], rows[j]);
  }
}

std::size_t shuffle_corpus(RowSource& in, std::uint64_t seed, RowSink& out) {
  std::vector<Row> rows;
  while (auto row = in.next()) rows.push_back(std::move(*row));
  shuffle_rows(rows, seed);
  for (const auto& r : rows) out.write(r);
  return rows.size();
}

// ---------------------------------------------------------------------------
// Mixing

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw InputError("recipe: bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::size_t MixRecipe::expected_pairs() const {
  std::size_t total = 0;
  for (const auto& c : components) {
    if (c.sample) {
      total += c.copies * *c.sample;
    } else {
      total += c.copies * count_lines(c.source_path);
    }
  }
  return total;
}

MixRecipe parse_recipe(std::istream& in, const fs::path& base_dir) {
  MixRecipe recipe;
  std::size_t line_no = 0;
  auto resolve = [&](std::string_view p) {
    fs::path path{std::string(p)};
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "recipe line " + std::to_string(line_no) + ": ";
    if (line.starts_with("seed=")) {
      recipe.seed = parse_uint(std::string_view(line).substr(5), "seed");
      continue;
    }
    if (line.starts_with("max_len=")) {
      recipe.max_len = parse_uint(std::string_view(line).substr(8), "max_len");
      if (recipe.max_len == 0) throw InputError(where + "max_len must be positive");
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() < 3 || fields.size() > 4) {
      throw InputError(where + "expected '<src>\\t<tgt>\\tcopies=<k>[\\tsample=<n>]'");
    }
    MixComponent c;
    c.source_path = resolve(fields[0]);
    c.target_path = resolve(fields[1]);
    if (!fields[2].starts_with("copies=")) throw InputError(where + "third field must be copies=<k>");
    c.copies = parse_uint(fields[2].substr(7), "copies");
    if (c.copies == 0) throw InputError(where + "copies must be positive");
    if (fields.size() == 4) {
      if (!fields[3].starts_with("sample=")) throw InputError(where + "fourth field must be sample=<n>");
      c.sample = parse_uint(fields[3].substr(7), "sample");
      if (*c.sample == 0) throw InputError(where + "sample must be positive");
    }
    recipe.components.push_back(std::move(c));
  }
  if (recipe.components.empty()) throw InputError("recipe has no components");
  return recipe;
}

MixRecipe load_recipe(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open recipe '" + path.string() + "'");
  return parse_recipe(in, path.parent_path());
}

void write_recipe(std::ostream& out, const MixRecipe& recipe) {
  out << "seed=" << recipe.seed << '\n' << "max_len=" << recipe.max_len << '\n';
  for (const auto& c : recipe.components) {
    out << c.source_path.string() << '\t' << c.target_path.string() << "\tcopies=" << c.copies;
    if (c.sample) out << "\tsample=" << *c.sample;
    out << '\n';
  }
}

std::size_t mix_corpora(const MixRecipe& recipe, RowSink& out) {
  if (recipe.components.empty()) throw InputError("recipe has no components");
  for (const auto& c : recipe.components) {
    for (const auto& p : {c.source_path, c.target_path}) {
      if (!fs::exists(p)) throw InputError("mix: missing file '" + p.string() + "'");
    }
  }
  std::size_t written = 0;
  for (std::size_t i = 0; i < recipe.components.size(); ++i) {
    const auto& c = recipe.components[i];
    if (c.sample) {
      auto src = RowSource::open({c.source_path, c.target_path});
      const auto rows = sample_rows(src, *c.sample, derive_seed(recipe.seed, i));
      for (std::size_t k = 0; k < c.copies; ++k) {
        for (const auto& r : rows) out.write(r);
        written += rows.size();
      }
    } else {
      for (std::size_t k = 0; k < c.copies; ++k) {
        auto src = RowSource::open({c.source_path, c.target_path});
        while (auto row = src.next()) {
          out.write(*row);
          ++written;
        }
      }
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// Statistics

std::string_view label_name(DataLabel label) {
  switch (label) {
    case DataLabel::Parallel:
      return "parallel";
    case DataLabel::SyntheticToEnglish:
      return "synthetic (*→EN)";
    case DataLabel::SyntheticFromEnglish:
      return "synthetic (EN→*)";
  }
  return "?";
}

DataLabel parse_label(std::string_view text) {
  if (text == "parallel") return DataLabel::Parallel;
  if (text == "synthetic-to-en") return DataLabel::SyntheticToEnglish;
  if (text == "synthetic-from-en") return DataLabel::SyntheticFromEnglish;
  throw InputError("unknown data label '" + std::string(text) +
                   "' (expected parallel, synthetic-to-en or synthetic-from-en)");
}

std::uint64_t CorpusStats::count(const std::string& pair, DataLabel label) const {
  auto it = counts.find({pair, label});
  return it == counts.end() ? 0 : it->second;
}

std::uint64_t CorpusStats::total(const std::string& pair) const {
  return count(pair, DataLabel::Parallel) + count(pair, DataLabel::SyntheticToEnglish) +
         count(pair, DataLabel::SyntheticFromEnglish);
}

std::uint64_t CorpusStats::total() const {
  std::uint64_t t = 0;
  for (const auto& [key, n] : counts) t += n;
  return t;
}

namespace {

std::string millions(std::uint64_t n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llu.%06llu", static_cast<unsigned long long>(n / 1000000),
                static_cast<unsigned long long>(n % 1000000));
  return buf;
}

// Display width in scalars, not bytes ("→" is one column).
std::size_t columns(std::string_view s) {
  std::size_t cols = 0;
  for (unsigned char c : s) cols += (c & 0xC0) != 0x80;
  return cols;
}

std::string pad(std::string_view s, std::size_t width, bool right) {
  const std::size_t cols = columns(s);
  const std::string fill(width > cols ? width - cols : 0, ' ');
  return right ? fill + std::string(s) : std::string(s) + fill;
}

}  // namespace

std::string CorpusStats::render() const {
  constexpr std::size_t kLabelWidth = 18;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> labels = {"type"};
  const DataLabel order[] = {DataLabel::Parallel, DataLabel::SyntheticToEnglish, DataLabel::SyntheticFromEnglish};
  for (auto l : order) labels.emplace_back(label_name(l));
  labels.emplace_back("total");

  std::vector<std::size_t> widths;
  for (const auto& pair : language_pairs) {
    std::vector<std::string> col = {pair};
    for (auto l : order) col.push_back(millions(count(pair, l)));
    col.push_back(millions(total(pair)));
    std::size_t w = 0;
    for (const auto& c : col) w = std::max(w, columns(c));
    widths.push_back(w);
    cells.push_back(std::move(col));
  }

  std::ostringstream out;
  for (std::size_t row = 0; row < labels.size(); ++row) {
    std::string line = pad(labels[row], kLabelWidth, false);
    for (std::size_t c = 0; c < cells.size(); ++c) line += "  " + pad(cells[c][row], widths[c], true);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

CorpusStats corpus_stats(const std::vector<LabeledCount>& components) {
  CorpusStats stats;
  for (const auto& c : components) {
    if (std::find(stats.language_pairs.begin(), stats.language_pairs.end(), c.language_pair) ==
        stats.language_pairs.end()) {
      stats.language_pairs.push_back(c.language_pair);
    }
    stats.counts[{c.language_pair, c.label}] += c.pairs;
  }
  return stats;
}

}  // namespace nmtprep::corpus
