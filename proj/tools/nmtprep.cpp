// nmtprep: command line front end for the preprocessing toolkit.
//
// Filters read standard input and write standard output when no paths are
// given. Aligned corpora travel as tab-separated rows on the standard
// streams, or as one file per side with repeated -i/-o options.
//
// Exit status: 0 success, 1 input or usage error, 2 internal error.

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nmtprep/bleu.hpp"
#include "nmtprep/bpe.hpp"
#include "nmtprep/config.hpp"
#include "nmtprep/corpus.hpp"
#include "nmtprep/diacritics.hpp"
#include "nmtprep/dropout.hpp"
#include "nmtprep/error.hpp"
#include "nmtprep/parallel.hpp"
#include "nmtprep/rerank.hpp"
#include "nmtprep/rng.hpp"
#include "nmtprep/text.hpp"
#include "nmtprep/translit.hpp"

namespace {

using namespace nmtprep;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Streams

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw InputError("cannot open '" + path + "'");
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw InputError("cannot write '" + path + "'");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }
  void close() {
    get().flush();
    if (!get()) throw InputError("write error");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// Rows from per-side files, or tab-separated rows on stdin.
struct RowInput {
  std::optional<corpus::RowSource> source;

  explicit RowInput(const std::vector<std::string>& paths) {
    if (paths.empty()) {
      source = corpus::RowSource::tsv(std::cin);
    } else {
      std::vector<fs::path> p(paths.begin(), paths.end());
      source = corpus::RowSource::open(p);
    }
  }
};

struct RowOutput {
  std::optional<corpus::RowSink> sink;

  explicit RowOutput(const std::vector<std::string>& paths) {
    if (paths.empty()) {
      sink = corpus::RowSink::tsv(std::cout);
    } else {
      std::vector<fs::path> p(paths.begin(), paths.end());
      sink = corpus::RowSink::create(p);
    }
  }
};

// Line-by-line transform with ordered multi-threaded batches.
template <class Fn>
void filter_lines(const std::string& in_path, const std::string& out_path, std::size_t threads, Fn&& fn) {
  Input in(in_path);
  Output out(out_path);
  transform_lines(in.get(), out.get(), threads, fn);
  out.close();
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(rerank::parse_score(item));
    } catch (const InputError&) {
      throw InputError("bad " + what + " '" + text + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Globals {
  std::size_t threads = 1;
  std::string config_path;
  PipelineConfig config;
};

template <class T>
T pick(const std::optional<T>& flag, const T& configured) {
  return flag ? *flag : configured;
}

void add_bpe_commands(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("learn-bpe", "Learn a BPE merge table from a text corpus");
    struct Opts {
      std::vector<std::string> inputs;
      std::string output;
      std::optional<std::size_t> merges;
      std::uint64_t min_frequency = 2;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-i,--input", o->inputs, "Corpus files (default: stdin); counts are summed");
    cmd->add_option("-o,--output", o->output, "Merge table file (default: stdout)");
    cmd->add_option("--merges", o->merges, "Number of merge operations (default 89500)");
    cmd->add_option("--min-frequency", o->min_frequency, "Stop when the best pair is rarer than this")
        ->capture_default_str();
    cmd->callback([o, &g] {
      bpe::VocabCounts vocab;
      if (o->inputs.empty()) {
        vocab = bpe::build_vocab(std::cin);
      } else {
        for (const auto& p : o->inputs) {
          Input in(p);
          bpe::add_counts(vocab, bpe::build_vocab(in.get()));
        }
      }
      bpe::LearnOptions opts;
      opts.min_frequency = o->min_frequency;
      opts.threads = g.threads;
      const auto table = bpe::learn_bpe(vocab, pick(o->merges, g.config.merges), opts);
      Output out(o->output);
      bpe::write_merge_table(out.get(), table);
      out.close();
    });
  }
  {
    auto* cmd = app.add_subcommand("learn-joint-bpe", "Learn one BPE table on source and target text together");
    struct Opts {
      std::string source, target, output;
      std::optional<std::size_t> merges;
      std::uint64_t min_frequency = 2;
      bool translit = false;
      std::string table;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--source", o->source, "Source-side corpus")->required();
    cmd->add_option("--target", o->target, "Target-side corpus")->required();
    cmd->add_option("-o,--output", o->output,
                    "Merge table file (default: stdout); with --translit, the basename of <out>.lat and <out>.cyr");
    cmd->add_option("--merges", o->merges, "Number of merge operations (default 89500)");
    cmd->add_option("--min-frequency", o->min_frequency, "Stop when the best pair is rarer than this")
        ->capture_default_str();
    cmd->add_flag("--translit", o->translit, "Target is Russian: learn on its ISO-9 latinization");
    cmd->add_option("--table", o->table, "Transliteration table file (default: built-in ISO 9)");
    cmd->callback([o, &g] {
      bpe::LearnOptions opts;
      opts.min_frequency = o->min_frequency;
      opts.threads = g.threads;
      const std::size_t merges = pick(o->merges, g.config.merges);
      Input src(o->source), tgt(o->target);
      if (o->translit || g.config.translit_bpe) {
        if (o->output.empty() || o->output == "-") throw InputError("learn-joint-bpe --translit needs -o <basename>");
        const auto table = o->table.empty() ? translit::TranslitTable::iso9() : translit::TranslitTable::load(o->table);
        const auto tables = translit::learn_biscript_bpe(src.get(), tgt.get(), merges, opts, table);
        translit::save_biscript(o->output, tables);
        return;
      }
      const auto table = bpe::learn_joint_bpe(src.get(), tgt.get(), merges, opts);
      Output out(o->output);
      bpe::write_merge_table(out.get(), table);
      out.close();
    });
  }
  {
    auto* cmd = app.add_subcommand("apply-bpe", "Segment text with a merge table");
    struct Opts {
      std::string codes, input, output;
      std::optional<std::size_t> merges;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-c,--codes", o->codes, "Merge table file")->required();
    cmd->add_option("-i,--input", o->input, "Input text (default: stdin)");
    cmd->add_option("-o,--output", o->output, "Output text (default: stdout)");
    cmd->add_option("--merges", o->merges, "Use only the first N rules");
    cmd->callback([o, &g] {
      auto table = bpe::load_merge_table(o->codes);
      if (o->merges) table = table.truncated(*o->merges);
      const bpe::Segmenter seg(table);
      filter_lines(o->input, o->output, g.threads, [&](const std::string& line) { return seg.segment_line(line); });
    });
  }
  {
    auto* cmd = app.add_subcommand("desegment", "Undo BPE segmentation (remove '@@ ')");
    struct Opts {
      std::string input, output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-i,--input", o->input, "Input text (default: stdin)");
    cmd->add_option("-o,--output", o->output, "Output text (default: stdout)");
    cmd->callback([o, &g] {
      std::atomic<std::size_t> dangling{0};
      filter_lines(o->input, o->output, g.threads, [&](const std::string& line) {
        auto r = bpe::desegment_line(line);
        if (r.dangling_marker) ++dangling;
        return std::move(r.text);
      });
      if (dangling) std::cerr << "nmtprep: warning: stripped " << dangling << " dangling '@@' marker(s)\n";
    });
  }
}

void add_script_commands(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("translit", "ISO 9 transliteration between Cyrillic and Latin");
    struct Opts {
      std::string to = "latin", table, input, output;
      bool print_table = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--to", o->to, "Target script")->check(CLI::IsMember({"latin", "cyrillic"}))->capture_default_str();
    cmd->add_option("--table", o->table, "Transliteration table file (default: built-in ISO 9)");
    cmd->add_flag("--print-table", o->print_table, "Write the table as TSV and exit");
    cmd->add_option("-i,--input", o->input, "Input text (default: stdin)");
    cmd->add_option("-o,--output", o->output, "Output text (default: stdout)");
    cmd->callback([o, &g] {
      const auto table = o->table.empty() ? translit::TranslitTable::iso9() : translit::TranslitTable::load(o->table);
      if (o->print_table) {
        Output out(o->output);
        table.write(out.get());
        out.close();
        return;
      }
      const bool latin = o->to == "latin";
      filter_lines(o->input, o->output, g.threads, [&](const std::string& line) {
        return latin ? table.to_latin(line) : table.to_cyrillic(line);
      });
    });
  }
  {
    auto* cmd = app.add_subcommand("segment-ru", "Segment Russian text with a transliterated BPE table pair");
    struct Opts {
      std::string codes, input, output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-c,--codes", o->codes, "Basename of <codes>.lat and <codes>.cyr")->required();
    cmd->add_option("-i,--input", o->input, "Input text (default: stdin)");
    cmd->add_option("-o,--output", o->output, "Output text (default: stdout)");
    cmd->callback([o, &g] {
      const auto seg = translit::russian_segmenter(translit::load_biscript(o->codes));
      filter_lines(o->input, o->output, g.threads, [&](const std::string& line) { return seg.segment_line(line); });
    });
  }
  {
    auto* cmd = app.add_subcommand("strip-diacritics", "Replace Romanian diacritics by base letters");
    struct Opts {
      std::string input, output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-i,--input", o->input, "Input text (default: stdin)");
    cmd->add_option("-o,--output", o->output, "Output text (default: stdout)");
    cmd->callback([o, &g] {
      filter_lines(o->input, o->output, g.threads,
                   [](const std::string& line) { return diacritics::strip_diacritics(line); });
    });
  }
}

void add_corpus_commands(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("sample", "Uniform sample of N lines or aligned pairs");
    struct Opts {
      std::vector<std::string> inputs, outputs;
      std::size_t n = 0;
      std::optional<std::uint64_t> seed;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-n,--lines", o->n, "Sample size")->required();
    cmd->add_option("--seed", o->seed, "Random seed (default 1)");
    cmd->add_option("-i,--input", o->inputs, "One file per side (default: TSV rows on stdin)");
    cmd->add_option("-o,--output", o->outputs, "One file per side (default: TSV rows on stdout)");
    cmd->callback([o, &g] {
      RowInput in(o->inputs);
      RowOutput out(o->outputs);
      corpus::sample_lines(*in.source, o->n, pick(o->seed, g.config.seed), *out.sink);
      out.sink->flush();
    });
  }
  {
    auto* cmd = app.add_subcommand("mix", "Concatenate corpora with copy counts from a recipe");
    struct Opts {
      std::string recipe;
      std::vector<std::string> outputs;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-r,--recipe", o->recipe, "Recipe file")->required();
    cmd->add_option("-o,--output", o->outputs, "Source and target files (default: TSV rows on stdout)");
    cmd->callback([o] {
      const auto recipe = corpus::load_recipe(o->recipe);
      RowOutput out(o->outputs);
      const auto n = corpus::mix_corpora(recipe, *out.sink);
      out.sink->flush();
      std::cerr << "nmtprep: mixed " << n << " pairs\n";
    });
  }
  {
    auto* cmd = app.add_subcommand("filter-len", "Drop rows with a side longer than the maximum length");
    struct Opts {
      std::vector<std::string> inputs, outputs;
      std::optional<std::size_t> max_len;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--max-len", o->max_len, "Maximum tokens per side, inclusive (default 50)");
    cmd->add_option("-i,--input", o->inputs, "One file per side (default: TSV rows on stdin)");
    cmd->add_option("-o,--output", o->outputs, "One file per side (default: TSV rows on stdout)");
    cmd->callback([o, &g] {
      const auto max_len = pick(o->max_len, g.config.max_len);
      if (max_len == 0) throw InputError("--max-len must be positive");
      RowInput in(o->inputs);
      RowOutput out(o->outputs);
      corpus::length_filter(*in.source, max_len, *out.sink);
      out.sink->flush();
    });
  }
  {
    auto* cmd = app.add_subcommand("shuffle", "Seeded permutation of lines or aligned pairs");
    struct Opts {
      std::vector<std::string> inputs, outputs;
      std::optional<std::uint64_t> seed;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--seed", o->seed, "Random seed (default 1)");
    cmd->add_option("-i,--input", o->inputs, "One file per side (default: TSV rows on stdin)");
    cmd->add_option("-o,--output", o->outputs, "One file per side (default: TSV rows on stdout)");
    cmd->callback([o, &g] {
      RowInput in(o->inputs);
      RowOutput out(o->outputs);
      corpus::shuffle_corpus(*in.source, pick(o->seed, g.config.seed), *out.sink);
      out.sink->flush();
    });
  }
  {
    auto* cmd = app.add_subcommand("stats", "Training data table per language pair and data type");
    struct Opts {
      std::vector<std::string> specs;
      std::string output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("specs", o->specs,
                    "PAIR:LABEL=FILE entries; LABEL is parallel, synthetic-to-en or synthetic-from-en");
    cmd->add_option("-o,--output", o->output, "Report file (default: stdout)");
    cmd->callback([o] {
      std::vector<corpus::LabeledCount> parts;
      for (const auto& spec : o->specs) {
        const auto colon = spec.find(':');
        const auto eq = spec.find('=', colon == std::string::npos ? 0 : colon);
        if (colon == std::string::npos || eq == std::string::npos || colon == 0) {
          throw InputError("bad stats entry '" + spec + "' (expected PAIR:LABEL=FILE)");
        }
        parts.push_back({spec.substr(0, colon), corpus::parse_label(spec.substr(colon + 1, eq - colon - 1)),
                         corpus::count_lines(spec.substr(eq + 1))});
      }
      Output out(o->output);
      out.get() << corpus::corpus_stats(parts).render();
      out.close();
    });
  }
}

void add_rerank_commands(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("reverse-target", "Reverse target-side token order (or n-best hypotheses)");
    struct Opts {
      std::vector<std::string> inputs, outputs;
      bool nbest = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_flag("--nbest", o->nbest, "Input is an n-best list");
    cmd->add_option("-i,--input", o->inputs, "One file per side (default: TSV rows on stdin)");
    cmd->add_option("-o,--output", o->outputs, "One file per side (default: TSV rows on stdout)");
    cmd->callback([o, &g] {
      if (o->nbest) {
        if (o->inputs.size() > 1 || o->outputs.size() > 1) throw InputError("--nbest takes one input and one output");
        Input in(o->inputs.empty() ? "" : o->inputs[0]);
        Output out(o->outputs.empty() ? "" : o->outputs[0]);
        rerank::write_nbest(out.get(), rerank::reverse_hypotheses(rerank::read_nbest(in.get(), g.config.nbest_size)));
        out.close();
        return;
      }
      RowInput in(o->inputs);
      RowOutput out(o->outputs);
      rerank::reverse_target(*in.source, *out.sink);
      out.sink->flush();
    });
  }
  {
    auto* cmd = app.add_subcommand("rerank", "Combine n-best scores and select the best hypothesis per sentence");
    struct Opts {
      std::string nbest, output, use, weights;
      std::vector<std::string> scores;
      std::optional<std::size_t> nbest_size;
      bool normalize = false;
      bool annotate = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--nbest", o->nbest, "N-best file (default: stdin)");
    cmd->add_option("--score", o->scores, "Attach a score column: NAME=FILE (one value per hypothesis)");
    cmd->add_option("--use", o->use, "Comma-separated score names to combine (default: all)");
    cmd->add_option("--weights", o->weights, "Comma-separated weights (default: uniform)");
    cmd->add_option("--nbest-size", o->nbest_size, "Maximum hypotheses per sentence (default 50)");
    cmd->add_flag("--normalize-length", o->normalize, "Divide each score by the hypothesis length");
    cmd->add_flag("--annotate", o->annotate, "Write the full n-best list with combined scores");
    cmd->add_option("-o,--output", o->output, "Output (default: stdout)");
    cmd->callback([o, &g] {
      Input in(o->nbest);
      auto nbest = rerank::read_nbest(in.get(), pick(o->nbest_size, g.config.nbest_size));
      for (const auto& spec : o->scores) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("bad --score '" + spec + "' (expected NAME=FILE)");
        Input col(spec.substr(eq + 1));
        nbest = rerank::attach_scores(std::move(nbest), spec.substr(0, eq), rerank::read_score_column(col.get()));
      }
      std::vector<std::string> names = split_names(o->use);
      if (names.empty() && !nbest.hypotheses.empty()) {
        for (const auto& [name, v] : nbest.hypotheses.front().scores) names.push_back(name);
      }
      rerank::CombineOptions opts;
      if (!o->weights.empty()) opts.weights = parse_list(o->weights, "--weights");
      opts.normalize_length = o->normalize;
      Output out(o->output);
      if (nbest.hypotheses.empty()) {
        out.close();
        return;
      }
      if (o->annotate) {
        rerank::write_nbest(out.get(), rerank::combine_scores(nbest, names, opts));
      } else {
        for (const auto& s : rerank::combine_and_select(nbest, names, opts)) {
          out.get() << join(nbest.hypotheses[s.index].tokens, " ") << '\n';
        }
      }
      out.close();
    });
  }
  {
    auto* cmd = app.add_subcommand("ensemble-scores", "Element-wise mean of K score columns");
    struct Opts {
      std::vector<std::string> columns;
      std::string output;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("columns", o->columns, "Score column files")->required();
    cmd->add_option("-o,--output", o->output, "Output column (default: stdout)");
    cmd->callback([o] {
      std::vector<std::vector<double>> cols;
      for (const auto& p : o->columns) {
        Input in(p);
        cols.push_back(rerank::read_score_column(in.get()));
      }
      Output out(o->output);
      for (double v : rerank::ensemble_scores(cols)) out.get() << rerank::format_score(v) << '\n';
      out.close();
    });
  }
  {
    auto* cmd = app.add_subcommand("select-checkpoints", "Ids of the last K saved checkpoints");
    struct Opts {
      std::string log, output;
      std::optional<std::size_t> k;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--log", o->log, "Checkpoint log (default: stdin)");
    cmd->add_option("-k", o->k, "Number of checkpoints (default 4)");
    cmd->add_option("-o,--output", o->output, "Output (default: stdout)");
    cmd->callback([o, &g] {
      Input in(o->log);
      const auto log = rerank::read_checkpoint_log(in.get());
      if (log.events.empty()) throw InputError("checkpoint log is empty");
      const auto k = pick(o->k, g.config.ensemble_k);
      if (k == 0) throw InputError("-k must be positive");
      Output out(o->output);
      for (const auto& id : rerank::select_checkpoints(log, k)) out.get() << id << '\n';
      out.close();
    });
  }
  {
    auto* cmd = app.add_subcommand("early-stop", "Early-stopping decision from a validation history");
    struct Opts {
      std::string input, log;
      std::optional<std::size_t> patience;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-i,--input", o->input, "One validation score per line (default: stdin)");
    cmd->add_option("--log", o->log, "Checkpoint log with scores instead of a score column");
    cmd->add_option("--patience", o->patience, "Validations without improvement before stopping (default 10)");
    cmd->callback([o, &g] {
      std::vector<double> history;
      if (!o->log.empty()) {
        Input in(o->log);
        for (const auto& ev : rerank::read_checkpoint_log(in.get()).events) {
          if (!ev.validation_score) throw InputError("checkpoint '" + ev.checkpoint_id + "' has no validation score");
          history.push_back(*ev.validation_score);
        }
      } else {
        Input in(o->input);
        history = rerank::read_score_column(in.get());
      }
      const auto patience = pick(o->patience, g.config.patience);
      if (patience == 0) throw InputError("--patience must be positive");
      const auto d = rerank::early_stop(history, patience);
      std::cout << "stop=" << (d.stop ? "yes" : "no");
      if (d.best_index) {
        std::cout << " best_index=" << *d.best_index << " best_score=" << rerank::format_score(history[*d.best_index]);
      }
      std::cout << '\n';
    });
  }
}

void add_eval_commands(CLI::App& app, Globals& g) {
  {
    auto* cmd = app.add_subcommand("bleu", "Corpus BLEU of a hypothesis file against references");
    struct Opts {
      std::string input;
      std::vector<std::string> refs;
      int max_n = 4;
      bool smooth = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("-i,--input", o->input, "Hypotheses (default: stdin)");
    cmd->add_option("-r,--ref", o->refs, "Reference file; repeat for multiple references")->required();
    cmd->add_option("--max-n", o->max_n, "Maximum n-gram order")->capture_default_str();
    cmd->add_flag("--smooth", o->smooth, "Add-one smoothing for orders 2 and up");
    cmd->callback([o] {
      Input in(o->input);
      const auto hyps = read_lines(in.get());
      std::vector<std::vector<std::string>> refs;
      for (const auto& p : o->refs) {
        Input r(p);
        refs.push_back(read_lines(r.get()));
      }
      bleu::BleuOptions opts;
      opts.max_n = o->max_n;
      opts.smooth = o->smooth;
      std::cout << bleu::corpus_bleu(hyps, refs, opts).render() << '\n';
    });
  }
  {
    auto* cmd = app.add_subcommand("mask-plan", "Dropout mask plans for one sentence pair or a whole corpus");
    struct Opts {
      std::optional<std::size_t> src_len, tgt_len;
      std::vector<std::string> inputs;
      std::string output, layers = "500,1024";
      std::optional<double> p_word, p_layer;
      std::optional<std::uint64_t> seed;
      bool scaled = false;
      bool corpus = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--src-len", o->src_len, "Source length in tokens");
    cmd->add_option("--tgt-len", o->tgt_len, "Target length in tokens");
    cmd->add_flag("--corpus", o->corpus, "One plan per sentence pair of the input corpus");
    cmd->add_option("-i,--input", o->inputs, "With --corpus: source and target files (default: TSV rows on stdin)");
    cmd->add_option("--layers", o->layers, "Comma-separated layer sizes")->capture_default_str();
    cmd->add_option("--p-word", o->p_word, "Word dropout probability (default 0.1)");
    cmd->add_option("--p-layer", o->p_layer, "Layer dropout probability (default 0.2)");
    cmd->add_option("--seed", o->seed, "Random seed (default 1)");
    cmd->add_flag("--scaled", o->scaled, "Mark the plan for inverted-dropout rescaling");
    cmd->add_option("-o,--output", o->output, "Plan file (default: stdout)");
    cmd->callback([o, &g] {
      dropout::DropoutConfig cfg;
      cfg.p_word = pick(o->p_word, g.config.p_word);
      cfg.p_layer = pick(o->p_layer, g.config.p_layer);
      cfg.seed = pick(o->seed, g.config.seed);
      cfg.scaled = o->scaled;
      for (double v : parse_list(o->layers, "--layers")) {
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) throw InputError("bad --layers '" + o->layers + "'");
        cfg.layer_sizes.push_back(static_cast<std::size_t>(v));
      }
      cfg.validate();
      Output out(o->output);
      if (!o->corpus) {
        if (!o->src_len || !o->tgt_len) throw InputError("mask-plan needs --src-len and --tgt-len, or --corpus");
        out.get() << dropout::render_plan(dropout::make_mask_plan(cfg, *o->src_len, *o->tgt_len));
        out.close();
        return;
      }
      RowInput in(o->inputs);
      std::vector<std::pair<std::size_t, std::size_t>> lengths;
      while (auto row = in.source->next()) {
        if (row->size() != 2) throw InputError("mask-plan --corpus needs two sides per row");
        lengths.emplace_back(count_tokens((*row)[0]), count_tokens((*row)[1]));
      }
      // Pair i uses its own derived seed, so plans do not depend on threads.
      std::vector<std::string> plans(lengths.size());
      parallel_for_slices(lengths.size(), g.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          auto c = cfg;
          c.seed = derive_seed(cfg.seed, i);
          plans[i] = dropout::render_plan(dropout::make_mask_plan(c, lengths[i].first, lengths[i].second));
        }
      });
      for (const auto& p : plans) out.get() << p;
      out.close();
    });
  }
}

std::string version_text() {
  return std::string("nmtprep ") + kToolkitVersion +
         "\nformats: bpe-merges v1, maskplan v1, rng v" + std::to_string(Rng::kVersion) + ", nbest ' ||| ' 4-field";
}

int run(int argc, char** argv) {
  CLI::App app{"Preprocessing toolkit for neural machine translation", "nmtprep"};
  Globals g;
  app.set_version_flag("--version", version_text());
  app.add_option("--threads", g.threads, "Worker threads; outputs do not depend on it")->capture_default_str();
  app.add_option("--config", g.config_path, "Pipeline config file supplying defaults");
  app.require_subcommand(1);
  app.fallthrough();

  add_bpe_commands(app, g);
  add_script_commands(app, g);
  add_corpus_commands(app, g);
  add_rerank_commands(app, g);
  add_eval_commands(app, g);

  // Config defaults must be in place before subcommand callbacks run.
  app.parse_complete_callback([&] {
    if (g.threads == 0) throw CLI::ValidationError("--threads", "must be positive");
    if (!g.config_path.empty()) g.config = PipelineConfig::load(g.config_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0 && app.get_subcommands().empty()) std::cerr << app.help() << '\n';
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  try {
    return run(argc, argv);
  } catch (const nmtprep::InputError& e) {
    std::cerr << "nmtprep: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "nmtprep: internal error: " << e.what() << '\n';
    return 2;
  }
}
