// Copyright 2026 The fsca Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fsca/config.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace fsca {
namespace {

TEST(ConfigTest, CommittedDefaultMatchesBuiltinDefaults) {
  const ExperimentConfig c = LoadExperimentConfig(testing::ConfigPath("default.json"));
  EXPECT_TRUE(c.model == ModelConfig{});
  EXPECT_EQ(c.model.bins(), 257);
  EXPECT_EQ(c.model.tcn.dilations, (std::vector<int>{1, 2, 5, 9}));
  EXPECT_EQ(c.model.attention.heads, 8);
  EXPECT_EQ(c.model.lstm.hidden, 384);
  EXPECT_EQ(c.train.learning_rate, 1e-3);
  EXPECT_EQ(c.train.chunk_frames, 192);
  EXPECT_EQ(c.mix.snr_lo, -5.0);
  EXPECT_EQ(c.mix.snr_hi, 20.0);
  EXPECT_EQ(c.mix.rir_probability, 0.75);
}

TEST(ConfigTest, CommittedTinyMatchesTestConfig) {
  const ExperimentConfig c = LoadExperimentConfig(testing::ConfigPath("tiny.json"));
  EXPECT_TRUE(c.model == testing::TinyConfig());
}

TEST(ConfigTest, JsonRoundTrip) {
  ExperimentConfig c;
  c.model = testing::TinyConfig();
  c.model.fusion_mode = FusionMode::kAttentionConcat;
  c.model.attention.mask = ops::AttentionMask::kCausal;
  c.train.steps = 17;
  c.mix.snr_lo = 3.0;
  c.mix.seed = 99;
  const ExperimentConfig back = ParseExperimentConfig(ToJson(c));
  EXPECT_TRUE(back.model == c.model);
  EXPECT_EQ(back.train.steps, 17);
  EXPECT_EQ(back.mix.snr_lo, 3.0);
  EXPECT_EQ(back.mix.seed, 99u);
  EXPECT_TRUE(ParseModelConfig(ToJson(c.model)) == c.model);
}

TEST(ConfigTest, EmptyDocumentGivesDefaults) {
  EXPECT_TRUE(ParseExperimentConfig("{}").model == ModelConfig{});
}

TEST(ConfigTest, RejectsBadInput) {
  const char* bad[] = {
      R"({"model": {"n_fft": 512, "nfft": 3}})",
      R"({"modle": {}})",
      R"({"model": {"F": 256}})",
      R"({"model": {"n": 200}})",
      R"({"model": {"attention": {"heads": 3}}})",
      R"({"model": {"tcn": {"dilations": [1, 2]}}})",
      R"({"model": {"n_fft": 500, "hop": 250}})",
      R"({"model": {"fusion_mode": "sum"}})",
      R"({"model": {"attention": {"mask": "banded"}}})",
      R"({"train": {"learning_rate": 0}})",
      R"({"mix": {"snr_db": [5, -5]}})",
      R"({"mix": {"snr_db": [1, 2, 3]}})",
      R"({"mix": {"rir_probability": 1.5}})",
      R"({"model": {"n": "fifteen"}})",
      R"({"model": )",
  };
  for (const char* text : bad) EXPECT_THROW(ParseExperimentConfig(text), ConfigError) << text;
  EXPECT_THROW(LoadExperimentConfig("/nonexistent/config.json"), IoError);
}

TEST(ConfigTest, DerivedWidths) {
  ModelConfig c;
  EXPECT_EQ(c.unit_width(), 31);
  EXPECT_EQ(c.subband_input_width(), 31);
  c.fusion_mode = FusionMode::kConcat;
  EXPECT_FALSE(c.uses_attention());
  EXPECT_EQ(c.subband_input_width(), 32);
  c.fusion_mode = FusionMode::kAttentionConcat;
  EXPECT_TRUE(c.uses_attention() && c.uses_concat());
  EXPECT_EQ(c.subband_input_width(), 32);
}

}  // namespace
}  // namespace fsca
