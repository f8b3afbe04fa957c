#include "nmtprep/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "nmtprep/error.hpp"
#include "nmtprep/text.hpp"

namespace nmtprep::bleu {

namespace {

using Tokens = std::vector<std::string_view>;
using NgramCounts = std::map<std::vector<std::string_view>, std::uint64_t>;

NgramCounts count_ngrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++counts[std::vector<std::string_view>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(i + len))];
  }
  return counts;
}

}  // namespace

BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                       const std::vector<std::vector<std::string>>& references, const BleuOptions& options) {
  if (options.max_n < 1) throw InputError("bleu: max_n must be at least 1");
  if (references.empty()) throw InputError("bleu: no reference given");
  if (hypotheses.empty()) throw InputError("bleu: empty corpus");
  for (const auto& ref : references) {
    if (ref.size() != hypotheses.size()) {
      throw InputError("bleu: " + std::to_string(hypotheses.size()) + " hypotheses but " +
                       std::to_string(ref.size()) + " reference lines");
    }
  }

  const auto max_n = static_cast<std::size_t>(options.max_n);
  BleuReport report;
  report.matches.assign(max_n, 0);
  report.totals.assign(max_n, 0);

  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const Tokens hyp = split_whitespace(hypotheses[i]);
    std::vector<Tokens> refs;
    refs.reserve(references.size());
    for (const auto& r : references) refs.push_back(split_whitespace(r[i]));

    report.hyp_len += hyp.size();
    std::size_t closest = refs.front().size();
    for (const auto& r : refs) {
      const auto d = [&](std::size_t len) { return len > hyp.size() ? len - hyp.size() : hyp.size() - len; };
      if (d(r.size()) < d(closest) || (d(r.size()) == d(closest) && r.size() < closest)) closest = r.size();
    }
    report.ref_len += closest;

    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto hyp_counts = count_ngrams(hyp, static_cast<int>(n));
      NgramCounts max_ref;
      for (const auto& r : refs) {
        for (const auto& [gram, c] : count_ngrams(r, static_cast<int>(n))) {
          auto& m = max_ref[gram];
          m = std::max(m, c);
        }
      }
      for (const auto& [gram, c] : hyp_counts) {
        report.totals[n - 1] += c;
        auto it = max_ref.find(gram);
        if (it != max_ref.end()) report.matches[n - 1] += std::min(c, it->second);
      }
    }
  }

  report.precisions.assign(max_n, 0.0);
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < max_n; ++n) {
    double m = static_cast<double>(report.matches[n]);
    double t = static_cast<double>(report.totals[n]);
    if (options.smooth && n > 0) {
      m += 1.0;
      t += 1.0;
    }
    // An order with no hypothesis n-grams at all (every line shorter than
    // n) has nothing to get wrong.
    report.precisions[n] = t > 0 ? m / t : 1.0;
    if (report.precisions[n] <= 0.0) {
      zero = true;
    } else {
      log_sum += std::log(report.precisions[n]);
    }
  }

  if (report.hyp_len == 0) {
    report.brevity_penalty = 0.0;
  } else if (report.hyp_len < report.ref_len) {
    report.brevity_penalty =
        std::exp(1.0 - static_cast<double>(report.ref_len) / static_cast<double>(report.hyp_len));
  } else {
    report.brevity_penalty = 1.0;
  }

  report.score = zero ? 0.0 : report.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  // exp(log p) can drift by an ulp; a perfect corpus is exactly 1.
  if (!zero && report.brevity_penalty == 1.0 &&
      std::all_of(report.matches.begin(), report.matches.end(),
                  [&, n = std::size_t{0}](std::uint64_t m) mutable { return m == report.totals[n++]; })) {
    report.score = 1.0;
  }
  return report;
}

BleuReport corpus_bleu(const std::vector<std::string>& hypotheses, const std::vector<std::string>& reference,
                       const BleuOptions& options) {
  return corpus_bleu(hypotheses, std::vector<std::vector<std::string>>{reference}, options);
}

std::string BleuReport::render() const {
  char buf[64];
  std::string out;
  std::snprintf(buf, sizeof buf, "BLEU = %.2f (BP=%.3f, p1..p%zu=", score * 100.0, brevity_penalty,
                precisions.size());
  out += buf;
  for (std::size_t n = 0; n < precisions.size(); ++n) {
    std::snprintf(buf, sizeof buf, n ? "/%.3f" : "%.3f", precisions[n]);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, ", hyp_len=%llu, ref_len=%llu)", static_cast<unsigned long long>(hyp_len),
                static_cast<unsigned long long>(ref_len));
  out += buf;
  return out;
}

}  // namespace nmtprep::bleu
