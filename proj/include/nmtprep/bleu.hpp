#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nmtprep::bleu {

struct BleuOptions {
  int max_n = 4;
  /// Add one to matches and totals of every order n >= 2.
  bool smooth = false;
};

struct BleuReport {
  double score = 0.0;
  /// Clipped precision per order; 1 for an order with no hypothesis n-grams.
  std::vector<double> precisions;
  double brevity_penalty = 1.0;
  std::uint64_t hyp_len = 0;
  std::uint64_t ref_len = 0;
  /// Clipped matches and hypothesis n-gram totals per order.
  std::vector<std::uint64_t> matches;
  std::vector<std::uint64_t> totals;

  /// `BLEU = 34.20 (BP=1.000, p1..p4=0.700/0.450/0.300/0.200, hyp_len=.., ref_len=..)`
  std::string render() const;
};

/// Corpus BLEU over whitespace-tokenized lines. `references[r][i]` is the
/// r-th reference for hypothesis i; clipping uses the maximum count over
/// references and the effective reference length is the closest reference
/// length (shorter on ties). Throws InputError on an empty corpus or a line
/// count mismatch.
BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::vector<std::string>>& references, const BleuOptions& options = {});

BleuReport corpus_bleu(const std::vector<std::string>& hypotheses, const std::vector<std::string>& reference,
                       const BleuOptions& options = {});

}  // namespace nmtprep::bleu
