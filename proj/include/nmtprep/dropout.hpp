#pragma once

// Pervasive-dropout mask plans. A plan fixes one keep-mask per layer, reused
// at every time step, and one keep decision per token position on each side
// (word dropout on token level: repeated words are dropped independently).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nmtprep::dropout {

struct DropoutConfig {
  double p_word = 0.1;
  double p_layer = 0.2;
  std::vector<std::size_t> layer_sizes;
  std::uint64_t seed = 0;
  /// Recorded in the plan header for consumers that rescale kept units by
  /// 1 / (1 - p). Masks themselves are always plain 0/1.
  bool scaled = false;

  /// Throws InputError unless both probabilities are in [0, 1] and every
  /// layer size is positive.
  void validate() const;
};

using Bits = std::vector<std::uint8_t>;

struct MaskPlan {
  std::uint64_t seed = 0;
  double p_word = 0.0;
  double p_layer = 0.0;
  bool scaled = false;
  /// One keep-mask per layer; its length is the layer size.
  std::vector<Bits> layers;
  Bits word_source;
  Bits word_target;

  friend bool operator==(const MaskPlan&, const MaskPlan&) = default;
};

/// Draws, in order, every layer mask and then the source and target word
/// decisions from Rng(cfg.seed). Each bit is kept independently with
/// probability 1 - p.
MaskPlan make_mask_plan(const DropoutConfig& cfg, std::size_t src_len, std::size_t tgt_len);

/// Plan file:
///   #maskplan v1 seed=<s> p_word=<p> p_layer=<p> scaled=<0|1>
///   L<i> <bits>
///   WSRC <bits>
///   WTGT <bits>
std::string render_plan(const MaskPlan& plan);
MaskPlan parse_plan(std::istream& in);

}  // namespace nmtprep::dropout
