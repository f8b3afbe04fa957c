#include "nmtprep/rerank.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "nmtprep/error.hpp"
#include "nmtprep/text.hpp"

namespace nmtprep::rerank {

namespace {

constexpr std::string_view kSep = " ||| ";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(kSep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + kSep.size();
  }
  // A blank last field may have lost its trailing space.
  if (fields.size() == 3 && fields.back().ends_with(" |||")) {
    auto& last = fields.back();
    last = last.substr(0, last.size() - 4);
    fields.emplace_back();
  } else if (fields.size() == 3 && fields.back() == "|||") {
    fields.back() = {};
    fields.emplace_back();
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<double> Hypothesis::score(std::string_view name) const {
  for (const auto& [n, v] : scores) {
    if (n == name) return v;
  }
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> NBestList::groups() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < hypotheses.size();) {
    std::size_t j = i + 1;
    while (j < hypotheses.size() && hypotheses[j].sentence_id == hypotheses[i].sentence_id) ++j;
    out.emplace_back(i, j);
    i = j;
  }
  return out;
}

std::string format_score(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_score: conversion failed");
  return std::string(buf, ptr);
}

double parse_score(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("bad score value '" + std::string(text) + "'");
  }
  return v;
}

NBestList read_nbest(std::istream& in, std::size_t declared_size) {
  NBestList nbest;
  nbest.size = declared_size;
  std::unordered_set<std::size_t> finished;
  std::size_t line_no = 0;
  std::size_t group_size = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string where = "n-best line " + std::to_string(line_no) + ": ";
    const auto fields = split_fields(line);
    if (fields.size() != 4) throw InputError(where + "expected 4 fields separated by ' ||| '");

    Hypothesis h;
    const auto sid_text = trim(fields[0]);
    auto [ptr, ec] = std::from_chars(sid_text.data(), sid_text.data() + sid_text.size(), h.sentence_id);
    if (sid_text.empty() || ec != std::errc{} || ptr != sid_text.data() + sid_text.size()) {
      throw InputError(where + "bad sentence id '" + std::string(fields[0]) + "'");
    }
    for (auto tok : split_whitespace(fields[1])) h.tokens.emplace_back(tok);
    for (auto item : split_whitespace(fields[2])) {
      const auto eq = item.rfind('=');
      if (eq == std::string_view::npos || eq == 0) throw InputError(where + "bad score '" + std::string(item) + "'");
      std::string name(item.substr(0, eq));
      if (h.score(name)) throw InputError(where + "duplicate score name '" + name + "'");
      h.scores.emplace_back(std::move(name), parse_score(item.substr(eq + 1)));
    }
    if (!trim(fields[3]).empty()) h.combined = parse_score(fields[3]);

    if (!nbest.hypotheses.empty() && nbest.hypotheses.back().sentence_id == h.sentence_id) {
      ++group_size;
    } else {
      if (!nbest.hypotheses.empty()) finished.insert(nbest.hypotheses.back().sentence_id);
      if (finished.contains(h.sentence_id)) {
        throw InputError(where + "sentence " + std::to_string(h.sentence_id) + " is not contiguous");
      }
      group_size = 1;
    }
    if (group_size > declared_size) {
      throw InputError(where + "sentence " + std::to_string(h.sentence_id) + " has more than " +
                       std::to_string(declared_size) + " hypotheses");
    }
    nbest.hypotheses.push_back(std::move(h));
  }
  return nbest;
}

std::string format_hypothesis(const Hypothesis& h) {
  std::string out = std::to_string(h.sentence_id);
  out += kSep;
  out += join(h.tokens, " ");
  out += kSep;
  for (std::size_t i = 0; i < h.scores.size(); ++i) {
    if (i) out += ' ';
    out += h.scores[i].first;
    out += '=';
    out += format_score(h.scores[i].second);
  }
  out += kSep;
  if (h.combined) out += format_score(*h.combined);
  return out;
}

void write_nbest(std::ostream& out, const NBestList& nbest) {
  for (const auto& h : nbest.hypotheses) out << format_hypothesis(h) << '\n';
}

std::string reverse_tokens(std::string_view line) {
  auto tokens = split_whitespace(line);
  std::string out;
  out.reserve(line.size());
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (!out.empty()) out += ' ';
    out += *it;
  }
  return out;
}

std::size_t reverse_target(corpus::RowSource& in, corpus::RowSink& out) {
  std::size_t n = 0;
  while (auto row = in.next()) {
    row->back() = reverse_tokens(row->back());
    out.write(*row);
    ++n;
  }
  return n;
}

NBestList reverse_hypotheses(NBestList nbest) {
  for (auto& h : nbest.hypotheses) std::reverse(h.tokens.begin(), h.tokens.end());
  return nbest;
}

NBestList attach_scores(NBestList nbest, const std::string& score_name, const std::vector<double>& scores) {
  if (scores.size() != nbest.hypotheses.size()) {
    throw InputError("attach_scores: " + std::to_string(scores.size()) + " scores for " +
                     std::to_string(nbest.hypotheses.size()) + " hypotheses");
  }
  if (score_name.empty() || score_name.find_first_of(" \t=") != std::string::npos) {
    throw InputError("attach_scores: invalid score name '" + score_name + "'");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    auto& h = nbest.hypotheses[i];
    if (h.score(score_name)) throw InputError("attach_scores: score '" + score_name + "' already present");
    h.scores.emplace_back(score_name, scores[i]);
  }
  return nbest;
}

std::vector<double> read_score_column(std::istream& in) {
  std::vector<double> out;
  for (std::string line; std::getline(in, line);) out.push_back(parse_score(line));
  return out;
}

NBestList combine_scores(NBestList nbest, const std::vector<std::string>& score_names,
                         const CombineOptions& options) {
  if (score_names.empty()) throw InputError("combine: no score names given");
  std::vector<double> weights = options.weights;
  if (weights.empty()) weights.assign(score_names.size(), 1.0);
  if (weights.size() != score_names.size()) {
    throw InputError("combine: " + std::to_string(weights.size()) + " weights for " +
                     std::to_string(score_names.size()) + " scores");
  }
  double weight_sum = 0.0;
  for (double w : weights) weight_sum += w;
  if (weight_sum == 0.0) throw InputError("combine: weights sum to zero");

  for (auto& h : nbest.hypotheses) {
    const double length = static_cast<double>(std::max<std::size_t>(1, h.tokens.size()));
    double total = 0.0;
    for (std::size_t k = 0; k < score_names.size(); ++k) {
      auto s = h.score(score_names[k]);
      if (!s) {
        throw InputError("combine: sentence " + std::to_string(h.sentence_id) + " lacks score '" +
                         score_names[k] + "'");
      }
      total += weights[k] * (options.normalize_length ? *s / length : *s);
    }
    h.combined = total / weight_sum;
  }
  return nbest;
}

std::vector<Selection> combine_and_select(const NBestList& nbest, const std::vector<std::string>& score_names,
                                          const CombineOptions& options) {
  const auto combined = combine_scores(nbest, score_names, options);
  std::vector<Selection> out;
  for (const auto& [begin, end] : combined.groups()) {
    Selection best{combined.hypotheses[begin].sentence_id, begin, 0, *combined.hypotheses[begin].combined};
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double c = *combined.hypotheses[i].combined;
      if (c > best.combined) best = Selection{best.sentence_id, i, i - begin, c};
    }
    out.push_back(best);
  }
  return out;
}

std::vector<double> ensemble_scores(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) throw InputError("ensemble: at least one score column is required");
  const std::size_t n = columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != n) {
      throw InputError("ensemble: ragged columns (" + std::to_string(c.size()) + " vs " + std::to_string(n) +
                       " entries)");
    }
  }
  if (columns.size() == 1) return columns.front();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& c : columns) sum += c[i];
    out[i] = sum / static_cast<double>(columns.size());
  }
  return out;
}

// ---------------------------------------------------------------------------

CheckpointLog read_checkpoint_log(std::istream& in) {
  CheckpointLog log;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "checkpoint log line " + std::to_string(line_no) + ": ";
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(std::string_view(line).substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw InputError(where + "expected '<minibatch>\\t<checkpoint_id>[\\t<bleu>]'");
    }
    CheckpointEvent ev;
    auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), ev.minibatch);
    if (fields[0].empty() || ec != std::errc{} || ptr != fields[0].data() + fields[0].size()) {
      throw InputError(where + "bad minibatch index '" + std::string(fields[0]) + "'");
    }
    if (!log.events.empty() && ev.minibatch <= log.events.back().minibatch) {
      throw InputError(where + "minibatch indices must be strictly increasing");
    }
    ev.checkpoint_id = std::string(fields[1]);
    if (fields.size() == 3 && !trim(fields[2]).empty()) ev.validation_score = parse_score(fields[2]);
    log.events.push_back(std::move(ev));
  }
  return log;
}

std::vector<std::string> select_checkpoints(const CheckpointLog& log, std::size_t k) {
  const std::size_t n = std::min(k, log.events.size());
  std::vector<std::string> out;
  for (std::size_t i = log.events.size() - n; i < log.events.size(); ++i) out.push_back(log.events[i].checkpoint_id);
  return out;
}

EarlyStopDecision early_stop(const std::vector<double>& history, std::size_t patience) {
  EarlyStopDecision d;
  if (history.empty()) return d;
  std::size_t best = 0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i] > history[best]) best = i;
  }
  d.best_index = best;
  d.stop = history.size() - 1 - best >= patience;
  return d;
}

}  // namespace nmtprep::rerank
