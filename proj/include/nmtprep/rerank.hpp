#pragma once

// N-best rescoring with right-to-left models, checkpoint ensembling and
// checkpoint/early-stopping bookkeeping.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmtprep/corpus.hpp"

namespace nmtprep::rerank {

struct Hypothesis {
  std::size_t sentence_id = 0;
  std::vector<std::string> tokens;
  /// Named sentence-level log-probabilities, in column order.
  std::vector<std::pair<std::string, double>> scores;
  std::optional<double> combined;

  std::optional<double> score(std::string_view name) const;
};

struct NBestList {
  std::vector<Hypothesis> hypotheses;
  /// Declared maximum entries per sentence.
  std::size_t size = 50;

  /// [begin, end) index ranges of consecutive hypotheses sharing a sentence
  /// id, in file order.
  std::vector<std::pair<std::size_t, std::size_t>> groups() const;
};

/// Parses `<sid> ||| <tokens> ||| <name>=<score> ... ||| <combined-or-blank>`.
/// Throws InputError on malformed lines, non-contiguous sentence ids, or
/// groups larger than `declared_size`.
NBestList read_nbest(std::istream& in, std::size_t declared_size = 50);
void write_nbest(std::ostream& out, const NBestList& nbest);
std::string format_hypothesis(const Hypothesis& h);

/// Shortest decimal text that reads back to the same double.
std::string format_score(double value);
double parse_score(std::string_view text);

/// Reverses the token order of a whitespace-tokenized line.
std::string reverse_tokens(std::string_view line);

/// Reverses the last side of every row (the target for parallel data).
std::size_t reverse_target(corpus::RowSource& in, corpus::RowSink& out);

NBestList reverse_hypotheses(NBestList nbest);

/// Adds one named score to every hypothesis, order-aligned. Throws
/// InputError on a length mismatch or a name already present.
NBestList attach_scores(NBestList nbest, const std::string& score_name, const std::vector<double>& scores);

/// Reads one real per line.
std::vector<double> read_score_column(std::istream& in);

struct CombineOptions {
  /// Per-name weights; empty means uniform.
  std::vector<double> weights;
  /// Divide each score by the hypothesis length (tokens, minimum 1) first.
  bool normalize_length = false;
};

struct Selection {
  std::size_t sentence_id = 0;
  /// Index into NBestList::hypotheses.
  std::size_t index = 0;
  /// Position within the sentence's group (0 = decoder's first choice).
  std::size_t rank = 0;
  double combined = 0.0;
};

/// Weighted mean of the named scores for every hypothesis, written into
/// Hypothesis::combined. Throws InputError on missing scores or a bad
/// weight count.
NBestList combine_scores(NBestList nbest, const std::vector<std::string>& score_names,
                         const CombineOptions& options = {});

/// combine_scores, then the per-sentence argmax; equal scores keep the
/// lower original rank.
std::vector<Selection> combine_and_select(const NBestList& nbest, const std::vector<std::string>& score_names,
                                          const CombineOptions& options = {});

/// Element-wise mean of K equally long columns (K >= 1).
std::vector<double> ensemble_scores(const std::vector<std::vector<double>>& columns);

// ---------------------------------------------------------------------------
// Checkpoints and early stopping

struct CheckpointEvent {
  std::uint64_t minibatch = 0;
  std::string checkpoint_id;
  std::optional<double> validation_score;
};

struct CheckpointLog {
  std::vector<CheckpointEvent> events;
};

/// `<minibatch>\t<checkpoint_id>[\t<bleu>]` per line; minibatch indices must
/// be strictly increasing.
CheckpointLog read_checkpoint_log(std::istream& in);

/// The last min(k, len) checkpoint ids in save order.
std::vector<std::string> select_checkpoints(const CheckpointLog& log, std::size_t k = 4);

struct EarlyStopDecision {
  bool stop = false;
  /// Earliest index of the best score; nullopt for an empty history.
  std::optional<std::size_t> best_index;
};

/// Stops once the best score is at least `patience` validations old.
EarlyStopDecision early_stop(const std::vector<double>& history, std::size_t patience = 10);

}  // namespace nmtprep::rerank
