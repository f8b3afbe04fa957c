#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nmtprep/bleu.hpp"
#include "nmtprep/bpe.hpp"
#include "nmtprep/diacritics.hpp"
#include "nmtprep/dropout.hpp"
#include "nmtprep/error.hpp"
#include "nmtprep/rerank.hpp"
#include "nmtprep/translit.hpp"

namespace py = pybind11;
using namespace nmtprep;

PYBIND11_MODULE(_core, m) {
  m.doc() = "BPE segmentation, transliteration and corpus tools for NMT preprocessing";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<bpe::MergeTable>(m, "MergeTable")
      .def("__len__", &bpe::MergeTable::size)
      .def("truncated", &bpe::MergeTable::truncated, py::arg("k"))
      .def("rules", [](const bpe::MergeTable& t) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& r : t.rules) out.emplace_back(r.left.render(), r.right.render());
        return out;
      })
      .def("dumps", [](const bpe::MergeTable& t) {
        std::ostringstream out;
        bpe::write_merge_table(out, t);
        return out.str();
      })
      .def_static("loads", [](const std::string& text) {
        std::istringstream in(text);
        return bpe::read_merge_table(in);
      });

  m.def(
      "learn_bpe",
      [](const std::string& text, std::size_t merges, std::uint64_t min_frequency, std::size_t threads) {
        return bpe::learn_bpe(bpe::build_vocab_from_string(text), merges, {min_frequency, threads});
      },
      py::arg("text"), py::arg("merges"), py::arg("min_frequency") = 2, py::arg("threads") = 1);
  m.def("segment_line", py::overload_cast<const bpe::MergeTable&, std::string_view>(&bpe::segment_line),
        py::arg("table"), py::arg("line"));
  m.def(
      "desegment_line", [](std::string_view line) { return bpe::desegment_line(line).text; }, py::arg("line"));

  m.def(
      "to_latin", [](std::string_view s) { return translit::to_latin(s); }, py::arg("text"));
  m.def(
      "to_cyrillic", [](std::string_view s) { return translit::to_cyrillic(s); }, py::arg("text"));
  m.def("strip_diacritics", &diacritics::strip_diacritics, py::arg("line"));

  m.def(
      "corpus_bleu",
      [](const std::vector<std::string>& hyps, const std::vector<std::string>& refs, int max_n, bool smooth) {
        return bleu::corpus_bleu(hyps, refs, {max_n, smooth}).score;
      },
      py::arg("hypotheses"), py::arg("references"), py::arg("max_n") = 4, py::arg("smooth") = false);

  m.def(
      "rerank",
      [](const std::string& nbest, const std::vector<std::string>& names) {
        std::istringstream in(nbest);
        std::vector<std::size_t> out;
        for (const auto& s : rerank::combine_and_select(rerank::read_nbest(in), names)) out.push_back(s.rank);
        return out;
      },
      py::arg("nbest"), py::arg("score_names"));
  m.def("ensemble_scores", &rerank::ensemble_scores, py::arg("columns"));

  m.def(
      "mask_plan",
      [](std::size_t src_len, std::size_t tgt_len, std::vector<std::size_t> layers, double p_word, double p_layer,
         std::uint64_t seed) {
        dropout::DropoutConfig cfg;
        cfg.p_word = p_word;
        cfg.p_layer = p_layer;
        cfg.layer_sizes = std::move(layers);
        cfg.seed = seed;
        cfg.validate();
        return dropout::render_plan(dropout::make_mask_plan(cfg, src_len, tgt_len));
      },
      py::arg("src_len"), py::arg("tgt_len"), py::arg("layers") = std::vector<std::size_t>{500, 1024},
      py::arg("p_word") = 0.1, py::arg("p_layer") = 0.2, py::arg("seed") = 1);
}
