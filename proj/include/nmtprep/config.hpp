#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace nmtprep {

inline constexpr const char* kToolkitVersion = NMTPREP_VERSION;

/// Per-language-pair pipeline settings. Defaults are the WMT16 system
/// values; the network and decoder settings are recorded for reference and
/// are not consumed by this toolkit.
struct PipelineConfig {
  std::string pair;

  std::size_t merges = 89500;
  std::size_t max_len = 50;
  std::size_t nbest_size = 50;
  std::size_t ensemble_k = 4;
  std::size_t patience = 10;
  std::uint64_t seed = 1;

  std::uint64_t validate_every = 10000;
  std::uint64_t save_every = 30000;

  // Recorded only.
  std::size_t beam_size = 12;
  std::size_t minibatch_size = 80;
  std::size_t embedding_size = 500;
  std::size_t hidden_size = 1024;
  double clip_norm = 1.0;

  bool joint_bpe = true;
  bool translit_bpe = false;
  bool r2l_rerank = false;
  /// none | source | target
  std::string strip_diacritics = "none";
  bool dropout = false;
  double p_word = 0.1;
  double p_layer = 0.2;

  /// Applies `key=value` lines; '#' starts a comment. Throws InputError on
  /// unknown keys or malformed values.
  static PipelineConfig parse(std::istream& in);
  static PipelineConfig load(const std::string& path);
  void write(std::ostream& out) const;
};

}  // namespace nmtprep
