#include <gtest/gtest.h>

#include <sstream>

#include "nmtprep/bpe.hpp"
#include "nmtprep/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nmtprep;
using namespace nmtprep::bpe;

namespace {

Symbol sym(const std::string& text, bool eow = false) { return Symbol{text, eow}; }

VocabCounts to_vocab(const std::map<std::string, std::uint64_t>& m) { return VocabCounts(m.begin(), m.end()); }

std::vector<oracle::Rule> as_oracle(const MergeTable& t) {
  std::vector<oracle::Rule> out;
  for (const auto& r : t.rules) out.push_back({{r.left.text, r.left.eow}, {r.right.text, r.right.eow}});
  return out;
}

std::vector<std::string> texts(const std::vector<Symbol>& syms) {
  std::vector<std::string> out;
  for (const auto& s : syms) out.push_back(s.render());
  return out;
}

const VocabCounts kToyVocab = {{"low", 5}, {"lower", 2}, {"newest", 6}, {"widest", 3}};

}  // namespace

TEST(BuildVocab, CountsTokens) {
  auto v = build_vocab_from_string("low low\nnewest");
  EXPECT_EQ(v, (VocabCounts{{"low", 2}, {"newest", 1}}));
}

TEST(BuildVocab, EmptyStream) { EXPECT_TRUE(build_vocab_from_string("").empty()); }

TEST(BuildVocab, MatchesIndependentTally) {
  const auto lex = fixtures::lexicon(40, 7);
  const auto lines = fixtures::corpus(lex, 10, 11);
  std::string text;
  std::uint64_t tokens = 0;
  for (const auto& l : lines) text += l + "\n";
  const auto expected = oracle::tally_tokens(text);
  for (const auto& [w, n] : expected) tokens += n;

  const auto v = build_vocab_from_string(text);
  EXPECT_EQ(v, to_vocab(expected));
  std::uint64_t total = 0;
  for (const auto& [w, n] : v) total += n;
  EXPECT_EQ(total, tokens);
}

TEST(BuildVocab, InvalidUtf8ReportsOffset) {
  const std::string text = "ok line\nab\xff";
  try {
    build_vocab_from_string(text);
    FAIL() << "expected DecodeError";
  } catch (const DecodeError& e) {
    EXPECT_EQ(e.offset(), 10u);
  }
}

TEST(LearnBpe, ToyExample) {
  const auto table = learn_bpe(kToyVocab, 5);
  ASSERT_EQ(table.size(), 5u);
  const std::vector<std::pair<Symbol, Symbol>> expected = {
      {sym("e"), sym("s")}, {sym("es"), sym("t")}, {sym("est"), Symbol::end_of_word()},
      {sym("l"), sym("o")}, {sym("lo"), sym("w")}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(table.rules[i].left, expected[i].first) << i;
    EXPECT_EQ(table.rules[i].right, expected[i].second) << i;
    EXPECT_EQ(table.rules[i].rank, i);
  }
  // Same answer from the recount oracle.
  EXPECT_EQ(as_oracle(table), oracle::learn({kToyVocab.begin(), kToyVocab.end()}, 5));
}

TEST(LearnBpe, SingletonPairNeverMerged) {
  const auto table = learn_bpe(VocabCounts{{"a", 1}}, 10);
  EXPECT_TRUE(table.empty());
}

TEST(LearnBpe, Errors) {
  EXPECT_THROW(learn_bpe(VocabCounts{}, 5), InputError);
  EXPECT_THROW(learn_bpe(kToyVocab, 0), InputError);
}

TEST(LearnBpe, StopsWhenPairsRunOut) {
  const auto table = learn_bpe(VocabCounts{{"ab", 3}}, 100);
  // a+b, then ab+</w>.
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table.rules[1].left, sym("ab"));
  EXPECT_TRUE(table.rules[1].right.is_bare_eow());
}

TEST(LearnBpe, NonOverlappingMergeWithinWord) {
  // "aaa": after (a,a) the word is [aa, a, </w>].
  Learner learner(VocabCounts{{"aaa", 4}});
  auto rule = learner.step();
  ASSERT_TRUE(rule);
  EXPECT_EQ(rule->left, sym("a"));
  EXPECT_EQ(rule->right, sym("a"));
  const auto seg = learner.segmented_vocab();
  ASSERT_EQ(seg.size(), 1u);
  EXPECT_EQ(texts(seg[0].first), (std::vector<std::string>{"aa", "a", "</w>"}));
}

TEST(LearnBpe, TieBreakIsLexicographic) {
  // Every pair occurs twice; the smallest left symbol decides.
  const auto table = learn_bpe(VocabCounts{{"ba", 2}, {"dc", 2}}, 1);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table.rules[0].left, sym("a"));
  EXPECT_TRUE(table.rules[0].right.is_bare_eow());
}

TEST(LearnBpe, IncrementalCountsMatchRecount) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto raw = fixtures::small_vocab(rng, 30, 10);
    Learner learner(to_vocab(raw));
    std::vector<std::pair<oracle::Word, std::uint64_t>> mirror;
    for (int round = 0; round < 60; ++round) {
      mirror.clear();
      for (const auto& [spelling, f] : learner.segmented_vocab()) {
        oracle::Word w;
        for (const auto& s : spelling) w.emplace_back(s.text, s.eow);
        mirror.emplace_back(std::move(w), f);
      }
      const auto expected = oracle::recount(mirror);
      const auto actual = learner.pair_counts();
      ASSERT_EQ(actual.size(), expected.size()) << "trial " << trial << " round " << round;
      for (const auto& [pair, n] : actual) {
        auto it = expected.find({{pair.first.text, pair.first.eow}, {pair.second.text, pair.second.eow}});
        ASSERT_NE(it, expected.end());
        ASSERT_EQ(it->second, n);
      }
      if (!learner.step()) break;
    }
  }
}

TEST(LearnBpe, Deterministic) {
  const auto lex = fixtures::lexicon(300, 3);
  const auto lines = fixtures::corpus(lex, 400, 5);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  const auto vocab = build_vocab_from_string(text);
  const auto a = learn_bpe(vocab, 300);
  const auto b = learn_bpe(vocab, 300);
  const auto c = learn_bpe(vocab, 300, LearnOptions{2, 4});
  EXPECT_TRUE(same_rules(a, b));
  EXPECT_TRUE(same_rules(a, c));
}

TEST(LearnBpe, ScalingCountsPreservesTable) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto vocab = to_vocab(fixtures::small_vocab(rng));
    VocabCounts scaled;
    for (const auto& [w, n] : vocab) scaled[w] = n * 7;
    // min_frequency 1 on both: scaling must not change the argmax sequence.
    EXPECT_TRUE(same_rules(learn_bpe(vocab, 40, {1, 1}), learn_bpe(scaled, 40, {1, 1})));
  }
}

TEST(LearnBpe, PrefixProperty) {
  const auto lex = fixtures::lexicon(500, 8);
  const auto lines = fixtures::corpus(lex, 600, 9, false);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  const auto vocab = build_vocab_from_string(text);
  const auto small = learn_bpe(vocab, 50);
  const auto large = learn_bpe(vocab, 200);
  EXPECT_TRUE(same_rules(small, large.truncated(50)));
  for (const auto& w : lex) {
    EXPECT_LE(apply_bpe(large, w).size(), apply_bpe(small, w).size()) << w;
  }
}

TEST(JointBpe, DuplicatedSideEqualsScaledVocab) {
  std::istringstream src("ab"), tgt("ab");
  const auto joint = learn_joint_bpe(src, tgt, 10);
  EXPECT_TRUE(same_rules(joint, learn_bpe(VocabCounts{{"ab", 2}}, 10)));
}

TEST(JointBpe, DisjointAlphabetsPartitionRules) {
  std::istringstream src("abab abab cab\ncab"), tgt("жыж жыж быж\nбыж");
  const auto joint = learn_joint_bpe(src, tgt, 20);
  const std::map<std::string, std::uint64_t> vocab = {{"abab", 2}, {"cab", 2}, {"жыж", 2}, {"быж", 2}};
  EXPECT_EQ(as_oracle(joint), oracle::learn(vocab, 20));
  ASSERT_FALSE(joint.empty());
  for (const auto& r : joint.rules) {
    const auto joined = r.left.text + r.right.text;
    const bool latin = joined.find_first_of("abc") != std::string::npos;
    const bool cyrillic = joined.find("\xd0") != std::string::npos || joined.find("\xd1") != std::string::npos;
    EXPECT_FALSE(latin && cyrillic) << r.left.render() << " " << r.right.render();
  }
}

TEST(JointBpe, EqualsLearningOnConcatenation) {
  const auto lex = fixtures::lexicon(400, 21);
  const auto en = fixtures::corpus(lex, 1000, 22);
  const auto de = fixtures::corpus(lex, 1000, 23);
  std::string en_text, de_text;
  for (const auto& l : en) en_text += l + "\n";
  for (const auto& l : de) de_text += l + "\n";
  std::istringstream src(en_text), tgt(de_text);
  const auto joint = learn_joint_bpe(src, tgt, 500);
  EXPECT_TRUE(same_rules(joint, learn_bpe(build_vocab_from_string(en_text + de_text), 500)));
}

TEST(ApplyBpe, ToyWord) {
  const auto table = learn_bpe(kToyVocab, 5);
  EXPECT_EQ(texts(apply_bpe(table, "lowest")), (std::vector<std::string>{"low", "est</w>"}));
}

TEST(ApplyBpe, EmptyTableGivesCharacters) {
  EXPECT_EQ(texts(apply_bpe(MergeTable{}, "cat")), (std::vector<std::string>{"c", "a", "t", "</w>"}));
  EXPECT_EQ(segment_line(MergeTable{}, "cat"), "c@@ a@@ t");
}

TEST(ApplyBpe, UnseenCharacterSurvives) {
  const auto table = learn_bpe(kToyVocab, 5);
  const auto segs = texts(apply_bpe(table, "loŵest"));
  EXPECT_EQ(segs, (std::vector<std::string>{"lo", "ŵ", "est</w>"}));
}

TEST(ApplyBpe, MatchesLiteralRankOrderOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto vocab = fixtures::small_vocab(rng);
    const auto table = learn_bpe(to_vocab(vocab), 60);
    const auto rules = as_oracle(table);
    for (const auto& [w, n] : fixtures::small_vocab(rng)) {
      oracle::Word expected = oracle::apply(rules, w);
      std::vector<std::string> want;
      for (const auto& s : expected) want.push_back(oracle::render(s));
      EXPECT_EQ(texts(apply_bpe(table, w)), want) << w;
    }
  }
}

TEST(ApplyBpe, RuleIsConsideredOnlyOnce) {
  // (ab,c) only appears after the later rule (a,b) fired, so it must not fire.
  MergeTable t;
  t.rules = {{sym("ab"), sym("c"), 0}, {sym("a"), sym("b"), 1}};
  EXPECT_EQ(texts(apply_bpe(t, "abc")), (std::vector<std::string>{"ab", "c", "</w>"}));
}

TEST(SegmentLine, ToyLine) {
  const auto table = learn_bpe(kToyVocab, 5);
  EXPECT_EQ(segment_line(table, "lowest lowest"), "low@@ est low@@ est");
  EXPECT_EQ(segment_line(table, ""), "");
}

TEST(SegmentLine, PreservesWhitespace) {
  const auto table = learn_bpe(kToyVocab, 5);
  const std::string line = "  lowest\tnewer  ";
  const auto seg = segment_line(table, line);
  EXPECT_EQ(seg, "  low@@ est\tn@@ e@@ w@@ e@@ r  ");
  EXPECT_EQ(desegment_line(seg).text, line);
}

TEST(Desegment, Basics) {
  EXPECT_EQ(desegment_line("low@@ est").text, "lowest");
  EXPECT_EQ(desegment_line("a b c").text, "a b c");
  const auto d = desegment_line("low@@ est@@");
  EXPECT_EQ(d.text, "lowest");
  EXPECT_TRUE(d.dangling_marker);
}

TEST(Desegment, RoundTripOverCorpus) {
  const auto lex = fixtures::lexicon(800, 31);
  const auto train = fixtures::corpus(lex, 2000, 32);
  std::string text;
  for (const auto& l : train) text += l + "\n";
  const Segmenter seg(learn_bpe(build_vocab_from_string(text), 1500));
  for (const auto& line : fixtures::corpus(lex, 1000, 33)) {
    ASSERT_EQ(desegment_line(seg.segment_line(line)).text, line);
  }
}

TEST(MergeTableFile, WriteFormat) {
  const auto table = learn_bpe(kToyVocab, 5);
  std::ostringstream out;
  write_merge_table(out, table);
  EXPECT_EQ(out.str(), "#bpe-merges v1 count=5\ne s\nes t\nest </w>\nl o\nlo w\n");
}

TEST(MergeTableFile, RoundTrip) {
  const auto lex = fixtures::lexicon(300, 41);
  std::string text;
  for (const auto& l : fixtures::corpus(lex, 500, 42)) text += l + "\n";
  const auto table = learn_bpe(build_vocab_from_string(text), 400);
  std::stringstream buf;
  write_merge_table(buf, table);
  const auto back = read_merge_table(buf);
  EXPECT_TRUE(same_rules(table, back));
}

TEST(MergeTableFile, Errors) {
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return read_merge_table(in);
  };
  EXPECT_THROW(read(""), InputError);
  EXPECT_THROW(read("#bpe-merges v1 count=2\na b\n"), InputError);
  EXPECT_THROW(read("#bpe-merges v1 count=1\nab\n"), InputError);
  EXPECT_THROW(read("#bpe-merges v1 count=2\na b\na b\n"), InputError);
  EXPECT_THROW(read("#bpe-merges v1 count=1\na</w> b\n"), InputError);
  EXPECT_THROW(read("#bpe-merges v1 count=x\n"), InputError);
  EXPECT_NO_THROW(read("#bpe-merges v1 count=0\n"));
}
