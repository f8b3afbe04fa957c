#include "nmtprep/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

#include "nmtprep/error.hpp"
#include "nmtprep/rerank.hpp"

namespace nmtprep {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
void parse_uint(const std::string& v, T& out) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) throw InputError("expected an integer, got '" + v + "'");
  out = static_cast<T>(x);
}

void parse_bool(const std::string& v, bool& out) {
  if (v == "1" || v == "true" || v == "yes") {
    out = true;
  } else if (v == "0" || v == "false" || v == "no") {
    out = false;
  } else {
    throw InputError("expected a boolean, got '" + v + "'");
  }
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"pair", [](PipelineConfig& c, const std::string& v) { c.pair = v; }},
      {"merges", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.merges); }},
      {"max_len", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.max_len); }},
      {"nbest_size", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.nbest_size); }},
      {"ensemble_k", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.ensemble_k); }},
      {"patience", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.patience); }},
      {"seed", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.seed); }},
      {"validate_every", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.validate_every); }},
      {"save_every", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.save_every); }},
      {"beam_size", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.beam_size); }},
      {"minibatch_size", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.minibatch_size); }},
      {"embedding_size", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.embedding_size); }},
      {"hidden_size", [](PipelineConfig& c, const std::string& v) { parse_uint(v, c.hidden_size); }},
      {"clip_norm", [](PipelineConfig& c, const std::string& v) { c.clip_norm = rerank::parse_score(v); }},
      {"joint_bpe", [](PipelineConfig& c, const std::string& v) { parse_bool(v, c.joint_bpe); }},
      {"translit_bpe", [](PipelineConfig& c, const std::string& v) { parse_bool(v, c.translit_bpe); }},
      {"r2l_rerank", [](PipelineConfig& c, const std::string& v) { parse_bool(v, c.r2l_rerank); }},
      {"strip_diacritics",
       [](PipelineConfig& c, const std::string& v) {
         if (v != "none" && v != "source" && v != "target") {
           throw InputError("strip_diacritics must be none, source or target");
         }
         c.strip_diacritics = v;
       }},
      {"dropout", [](PipelineConfig& c, const std::string& v) { parse_bool(v, c.dropout); }},
      {"p_word", [](PipelineConfig& c, const std::string& v) { c.p_word = rerank::parse_score(v); }},
      {"p_layer", [](PipelineConfig& c, const std::string& v) { c.p_layer = rerank::parse_score(v); }},
  };
  return m;
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::istream& in) {
  PipelineConfig cfg;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const InputError& e) {
      throw InputError("config line " + std::to_string(line_no) + " (" + key + "): " + e.what());
    }
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse(in);
}

void PipelineConfig::write(std::ostream& out) const {
  out << "pair=" << pair << '\n'
      << "merges=" << merges << '\n'
      << "max_len=" << max_len << '\n'
      << "nbest_size=" << nbest_size << '\n'
      << "ensemble_k=" << ensemble_k << '\n'
      << "patience=" << patience << '\n'
      << "seed=" << seed << '\n'
      << "validate_every=" << validate_every << '\n'
      << "save_every=" << save_every << '\n'
      << "beam_size=" << beam_size << '\n'
      << "minibatch_size=" << minibatch_size << '\n'
      << "embedding_size=" << embedding_size << '\n'
      << "hidden_size=" << hidden_size << '\n'
      << "clip_norm=" << rerank::format_score(clip_norm) << '\n'
      << "joint_bpe=" << joint_bpe << '\n'
      << "translit_bpe=" << translit_bpe << '\n'
      << "r2l_rerank=" << r2l_rerank << '\n'
      << "strip_diacritics=" << strip_diacritics << '\n'
      << "dropout=" << dropout << '\n'
      << "p_word=" << rerank::format_score(p_word) << '\n'
      << "p_layer=" << rerank::format_score(p_layer) << '\n';
}

}  // namespace nmtprep
