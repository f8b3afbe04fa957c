#include <gtest/gtest.h>

#include <sstream>

#include "nmtprep/config.hpp"
#include "nmtprep/error.hpp"

using nmtprep::InputError;
using nmtprep::PipelineConfig;

namespace {

PipelineConfig parse(const std::string& s) {
  std::istringstream in(s);
  return PipelineConfig::parse(in);
}

}  // namespace

TEST(Config, Defaults) {
  const PipelineConfig c;
  EXPECT_EQ(c.merges, 89500u);
  EXPECT_EQ(c.beam_size, 12u);
  EXPECT_EQ(c.nbest_size, 50u);
  EXPECT_EQ(c.max_len, 50u);
  EXPECT_EQ(c.ensemble_k, 4u);
  EXPECT_EQ(c.validate_every, 10000u);
  EXPECT_EQ(c.save_every, 30000u);
  EXPECT_EQ(c.minibatch_size, 80u);
  EXPECT_EQ(c.embedding_size, 500u);
  EXPECT_EQ(c.hidden_size, 1024u);
  EXPECT_DOUBLE_EQ(c.p_word, 0.1);
  EXPECT_DOUBLE_EQ(c.p_layer, 0.2);
}

TEST(Config, ParseOverrides) {
  const auto c = parse("# EN-RO\npair = en-ro\n\nstrip_diacritics=source  # Romanian side\ndropout=1\nmerges=90000\n");
  EXPECT_EQ(c.pair, "en-ro");
  EXPECT_EQ(c.strip_diacritics, "source");
  EXPECT_TRUE(c.dropout);
  EXPECT_EQ(c.merges, 90000u);
  EXPECT_EQ(c.beam_size, 12u);
}

TEST(Config, WriteParseRoundTrip) {
  auto c = parse("pair=en-ru\ntranslit_bpe=true\np_word=0.15\nseed=9\n");
  std::ostringstream out;
  c.write(out);
  const auto back = parse(out.str());
  std::ostringstream again;
  back.write(again);
  EXPECT_EQ(again.str(), out.str());
  EXPECT_TRUE(back.translit_bpe);
  EXPECT_DOUBLE_EQ(back.p_word, 0.15);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("unknown=1\n"), InputError);
  EXPECT_THROW(parse("merges\n"), InputError);
  EXPECT_THROW(parse("merges=many\n"), InputError);
  EXPECT_THROW(parse("dropout=maybe\n"), InputError);
  EXPECT_THROW(parse("strip_diacritics=both\n"), InputError);
  EXPECT_THROW(PipelineConfig::load("/nonexistent/x.conf"), InputError);
}

TEST(Config, ShippedConfigs) {
  const std::string dir = NMTPREP_DATA_DIR "/../configs/";
  const auto de = PipelineConfig::load(dir + "en-de.conf");
  const auto cs = PipelineConfig::load(dir + "en-cs.conf");
  const auto ro = PipelineConfig::load(dir + "en-ro.conf");
  const auto ru = PipelineConfig::load(dir + "en-ru.conf");
  EXPECT_TRUE(de.r2l_rerank);
  EXPECT_TRUE(cs.r2l_rerank);
  EXPECT_FALSE(ro.r2l_rerank);
  EXPECT_EQ(ro.strip_diacritics, "source");
  EXPECT_TRUE(ro.dropout);
  EXPECT_FALSE(de.dropout);
  EXPECT_TRUE(ru.translit_bpe);
  EXPECT_FALSE(de.translit_bpe);
  for (const auto* c : {&de, &cs, &ro, &ru}) {
    EXPECT_EQ(c->merges, 89500u);
    EXPECT_EQ(c->beam_size, 12u);
  }
}
