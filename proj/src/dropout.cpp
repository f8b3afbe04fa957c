#include "nmtprep/dropout.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "nmtprep/error.hpp"
#include "nmtprep/rerank.hpp"
#include "nmtprep/rng.hpp"

namespace nmtprep::dropout {

namespace {

Bits draw(Rng& rng, std::size_t n, double p_drop) {
  Bits bits(n);
  for (auto& b : bits) b = rng.bernoulli(p_drop) ? 0 : 1;
  return bits;
}

std::string render_bits(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Bits parse_bits(std::string_view text, const std::string& where) {
  Bits bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw InputError(where + "mask bits must be 0 or 1");
    bits.push_back(c == '1');
  }
  return bits;
}

}  // namespace

void DropoutConfig::validate() const {
  for (double p : {p_word, p_layer}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError("dropout probability " + rerank::format_score(p) + " is outside [0, 1]");
    }
  }
  for (auto n : layer_sizes) {
    if (n == 0) throw InputError("layer sizes must be positive");
  }
}

MaskPlan make_mask_plan(const DropoutConfig& cfg, std::size_t src_len, std::size_t tgt_len) {
  cfg.validate();
  Rng rng(cfg.seed);
  MaskPlan plan;
  plan.seed = cfg.seed;
  plan.p_word = cfg.p_word;
  plan.p_layer = cfg.p_layer;
  plan.scaled = cfg.scaled;
  plan.layers.reserve(cfg.layer_sizes.size());
  for (auto n : cfg.layer_sizes) plan.layers.push_back(draw(rng, n, cfg.p_layer));
  plan.word_source = draw(rng, src_len, cfg.p_word);
  plan.word_target = draw(rng, tgt_len, cfg.p_word);
  return plan;
}

std::string render_plan(const MaskPlan& plan) {
  std::ostringstream out;
  out << "#maskplan v1 seed=" << plan.seed << " p_word=" << rerank::format_score(plan.p_word)
      << " p_layer=" << rerank::format_score(plan.p_layer) << " scaled=" << (plan.scaled ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < plan.layers.size(); ++i) out << 'L' << i << ' ' << render_bits(plan.layers[i]) << '\n';
  out << "WSRC " << render_bits(plan.word_source) << '\n';
  out << "WTGT " << render_bits(plan.word_target) << '\n';
  return out.str();
}

MaskPlan parse_plan(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#maskplan v1 ")) throw InputError("mask plan: missing header");
  MaskPlan plan;
  std::istringstream header(line.substr(13));
  bool have[4] = {false, false, false, false};
  for (std::string item; header >> item;) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("mask plan: bad header field '" + item + "'");
    const auto key = item.substr(0, eq);
    const auto value = std::string_view(item).substr(eq + 1);
    try {
      if (key == "seed") {
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), plan.seed);
        if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
          throw InputError("mask plan: bad value in '" + item + "'");
        }
        have[0] = true;
      } else if (key == "p_word") {
        plan.p_word = rerank::parse_score(value);
        have[1] = true;
      } else if (key == "p_layer") {
        plan.p_layer = rerank::parse_score(value);
        have[2] = true;
      } else if (key == "scaled") {
        if (value != "0" && value != "1") throw InputError("mask plan: scaled must be 0 or 1");
        plan.scaled = value == "1";
        have[3] = true;
      } else {
        throw InputError("mask plan: unknown header field '" + key + "'");
      }
    } catch (const InputError&) {
      throw InputError("mask plan: bad value in '" + item + "'");
    }
  }
  for (bool h : have) {
    if (!h) throw InputError("mask plan: header needs seed, p_word, p_layer and scaled");
  }

  bool src = false;
  bool tgt = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "mask plan line " + std::to_string(line_no) + ": ";
    const auto space = line.find(' ');
    const auto tag = line.substr(0, space);
    const auto bits = space == std::string::npos ? std::string_view{} : std::string_view(line).substr(space + 1);
    if (tag == "WSRC" && !src && !tgt) {
      plan.word_source = parse_bits(bits, where);
      src = true;
    } else if (tag == "WTGT" && src && !tgt) {
      plan.word_target = parse_bits(bits, where);
      tgt = true;
    } else if (tag == "L" + std::to_string(plan.layers.size()) && !src) {
      plan.layers.push_back(parse_bits(bits, where));
    } else {
      throw InputError(where + "unexpected record '" + tag + "'");
    }
  }
  if (!tgt) throw InputError("mask plan: missing WSRC/WTGT records");
  return plan;
}

}  // namespace nmtprep::dropout
