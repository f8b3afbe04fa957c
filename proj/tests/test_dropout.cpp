#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nmtprep/dropout.hpp"
#include "nmtprep/error.hpp"

using namespace nmtprep;
using namespace nmtprep::dropout;

namespace {

DropoutConfig config(double p_word, double p_layer, std::uint64_t seed = 1) {
  DropoutConfig c;
  c.p_word = p_word;
  c.p_layer = p_layer;
  c.layer_sizes = {500, 1024, 1024};
  c.seed = seed;
  return c;
}

std::size_t zeros(const Bits& b) {
  std::size_t n = 0;
  for (auto x : b) n += x == 0;
  return n;
}

}  // namespace

TEST(MaskPlan, ForcedProbabilities) {
  const auto keep = make_mask_plan(config(0, 0), 20, 30);
  const auto drop = make_mask_plan(config(1, 1), 20, 30);
  for (const auto* plan : {&keep, &drop}) {
    ASSERT_EQ(plan->layers.size(), 3u);
    EXPECT_EQ(plan->layers[1].size(), 1024u);
    EXPECT_EQ(plan->word_source.size(), 20u);
    EXPECT_EQ(plan->word_target.size(), 30u);
  }
  for (const auto& l : keep.layers) EXPECT_EQ(zeros(l), 0u);
  for (const auto& l : drop.layers) EXPECT_EQ(zeros(l), l.size());
  EXPECT_EQ(zeros(keep.word_source) + zeros(keep.word_target), 0u);
  EXPECT_EQ(zeros(drop.word_source) + zeros(drop.word_target), 50u);
}

TEST(MaskPlan, OneMaskPerLayerWhateverTheLength) {
  for (std::size_t len : {0u, 1u, 80u}) {
    const auto plan = make_mask_plan(config(0.1, 0.2), len, len);
    EXPECT_EQ(plan.layers.size(), 3u);
    EXPECT_EQ(plan.word_source.size(), len);
  }
}

TEST(MaskPlan, DropRatesNearNominal) {
  std::size_t word_drops = 0, word_total = 0, layer_drops = 0, layer_total = 0;
  for (std::uint64_t seed = 0; word_total < 100000; ++seed) {
    const auto plan = make_mask_plan(config(0.1, 0.2, seed), 50, 50);
    word_drops += zeros(plan.word_source) + zeros(plan.word_target);
    word_total += 100;
    for (const auto& l : plan.layers) {
      layer_drops += zeros(l);
      layer_total += l.size();
    }
  }
  EXPECT_NEAR(static_cast<double>(word_drops) / static_cast<double>(word_total), 0.1, 0.005);
  EXPECT_NEAR(static_cast<double>(layer_drops) / static_cast<double>(layer_total), 0.2, 0.005);
}

TEST(MaskPlan, RepeatedWordIsDroppedPerToken) {
  // Template "w x w": positions 0 and 2 hold the same word.
  std::size_t both = 0, either = 0;
  const std::size_t trials = 100000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    DropoutConfig c = config(0.1, 0.2, seed);
    c.layer_sizes.clear();
    const auto plan = make_mask_plan(c, 3, 0);
    const bool a = plan.word_source[0] == 0, b = plan.word_source[2] == 0;
    both += a && b;
    either += a || b;
  }
  EXPECT_NEAR(static_cast<double>(both) / trials, 0.01, 0.003);
  EXPECT_NEAR(static_cast<double>(either) / trials, 0.19, 0.01);
}

TEST(MaskPlan, SameTypePositionsIndependent) {
  double table[2][2] = {{0, 0}, {0, 0}};
  const std::size_t trials = 20000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    DropoutConfig c = config(0.3, 0.2, 1000 + seed);
    c.layer_sizes.clear();
    const auto plan = make_mask_plan(c, 4, 4);
    table[plan.word_source[1]][plan.word_target[3]] += 1;
  }
  double chi2 = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected = (table[i][0] + table[i][1]) * (table[0][j] + table[1][j]) / trials;
      chi2 += (table[i][j] - expected) * (table[i][j] - expected) / expected;
    }
  }
  // 1 degree of freedom, p = 0.001.
  EXPECT_LT(chi2, 10.83);
}

TEST(MaskPlan, ByteIdenticalAndParsable) {
  auto cfg = config(0.1, 0.2, 77);
  cfg.scaled = true;
  const auto a = render_plan(make_mask_plan(cfg, 12, 9));
  EXPECT_EQ(a, render_plan(make_mask_plan(cfg, 12, 9)));
  EXPECT_NE(a, render_plan(make_mask_plan(config(0.1, 0.2, 78), 12, 9)));
  EXPECT_EQ(a.substr(0, a.find('\n')), "#maskplan v1 seed=77 p_word=0.1 p_layer=0.2 scaled=1");
  std::istringstream in(a);
  const auto parsed = parse_plan(in);
  EXPECT_EQ(parsed, make_mask_plan(cfg, 12, 9));
  EXPECT_EQ(render_plan(parsed), a);
}

TEST(MaskPlan, SmallPlanLayout) {
  DropoutConfig c;
  c.layer_sizes = {2};
  c.p_word = 0;
  c.p_layer = 1;
  EXPECT_EQ(render_plan(make_mask_plan(c, 3, 0)), "#maskplan v1 seed=0 p_word=0 p_layer=1 scaled=0\nL0 00\nWSRC 111\nWTGT \n");
}

TEST(MaskPlan, Errors) {
  EXPECT_THROW(make_mask_plan(config(-0.1, 0.2), 1, 1), InputError);
  EXPECT_THROW(make_mask_plan(config(0.1, 1.5), 1, 1), InputError);
  EXPECT_THROW(make_mask_plan(config(std::nan(""), 0.2), 1, 1), InputError);
  auto zero_layer = config(0.1, 0.2);
  zero_layer.layer_sizes.push_back(0);
  EXPECT_THROW(make_mask_plan(zero_layer, 1, 1), InputError);

  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_plan(in);
  };
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("#maskplan v1 seed=1 p_word=0.1 p_layer=0.2\nWSRC 1\nWTGT 1\n"), InputError);
  EXPECT_THROW(parse("#maskplan v1 seed=1 p_word=0.1 p_layer=0.2 scaled=0\nWSRC 12\nWTGT 1\n"), InputError);
  EXPECT_THROW(parse("#maskplan v1 seed=1 p_word=0.1 p_layer=0.2 scaled=0\nL1 0\nWSRC 1\nWTGT 1\n"), InputError);
  EXPECT_THROW(parse("#maskplan v1 seed=1 p_word=0.1 p_layer=0.2 scaled=0\nWSRC 1\n"), InputError);
  EXPECT_THROW(parse("#maskplan v1 seed=-1 p_word=0.1 p_layer=0.2 scaled=0\nWSRC 1\nWTGT 1\n"), InputError);
}
