// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/run_config.h"

#include <gtest/gtest.h>

#include "acrotag/errors.h"
#include "test_support.h"

namespace acrotag {
namespace {

TEST(RunConfigTest, ParsesEveryKey) {
  const RunConfig c = ParseRunConfig(R"json(
# comment line
train = data/train.json
dev = /abs/dev.json   # trailing comment
out = runs/a
provider = file
embeddings = e3.bin
embeddings.0 = e0.bin
embeddings.3 = e3.bin
embedding_dim = 768
hidden_size = 256
seed = 7
epochs = 20
learning_rate = 5e-6
batch_size = 16
patience = 4
clip_norm = 1.5
dropout = 0.25
adam_beta1 = 0.8
adam_beta2 = 0.99
adam_epsilon = 1e-6
mode = per-language
threads = 2
grid.modes = joint, per-language
grid.epoch_tags = 0,1,3
)json",
                                     "/base");
  EXPECT_EQ(c.train, "/base/data/train.json");
  EXPECT_EQ(c.dev, "/abs/dev.json");
  EXPECT_EQ(c.out, "/base/runs/a");
  EXPECT_EQ(c.embeddings, "/base/e3.bin");
  EXPECT_EQ(c.grid.embeddings.at("0"), "/base/e0.bin");
  EXPECT_EQ(c.model.provider, ProviderKind::kFile);
  EXPECT_EQ(c.model.embedding_dim, 768u);
  EXPECT_EQ(c.model.hidden_size, 256u);
  EXPECT_EQ(c.model.seed, 7u);
  EXPECT_EQ(c.training.seed, 7u);
  EXPECT_EQ(c.training.epochs, 20u);
  EXPECT_EQ(c.training.learning_rate, 5e-6);
  EXPECT_EQ(c.training.batch_size, 16u);
  EXPECT_EQ(c.training.patience, 4u);
  EXPECT_EQ(c.training.clip_norm, 1.5);
  EXPECT_EQ(c.training.dropout, 0.25);
  EXPECT_EQ(c.training.beta1, 0.8);
  EXPECT_EQ(c.training.beta2, 0.99);
  EXPECT_EQ(c.training.epsilon, 1e-6);
  EXPECT_EQ(c.training.mode, ExperimentMode::kPerLanguage);
  EXPECT_EQ(c.threads, 2);
  EXPECT_EQ(c.grid.modes, (std::vector<ExperimentMode>{
                              ExperimentMode::kJoint, ExperimentMode::kPerLanguage}));
  EXPECT_EQ(c.grid.epoch_tags, (std::vector<std::string>{"0", "1", "3"}));
}

TEST(RunConfigTest, Defaults) {
  const RunConfig c = ParseRunConfig("");
  EXPECT_EQ(c.model.hidden_size, 256u);
  EXPECT_EQ(c.model.embedding_dim, 128u);
  EXPECT_EQ(c.model.provider, ProviderKind::kHashed);
  EXPECT_EQ(c.training.epochs, 20u);
  EXPECT_EQ(c.training.learning_rate, 1e-3);
  EXPECT_EQ(c.training.batch_size, 32u);
  EXPECT_EQ(c.training.patience, 5u);
  EXPECT_EQ(c.training.clip_norm, 5.0);
  EXPECT_EQ(c.training.beta1, 0.9);
  EXPECT_EQ(c.training.beta2, 0.999);
  EXPECT_EQ(c.training.epsilon, 1e-8);
}

TEST(RunConfigTest, UnknownKeyIsNamed) {
  try {
    ParseRunConfig("learning_rte = 0.1");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("learning_rte"), std::string::npos);
  }
}

TEST(RunConfigTest, BadValues) {
  EXPECT_THROW(ParseRunConfig("epochs = ten"), ConfigError);
  EXPECT_THROW(ParseRunConfig("epochs = 3x"), ConfigError);
  EXPECT_THROW(ParseRunConfig("mode = mixed"), ConfigError);
  EXPECT_THROW(ParseRunConfig("provider = bert"), ConfigError);
  EXPECT_THROW(ParseRunConfig("grid.modes = joint, both"), ConfigError);
  EXPECT_THROW(ParseRunConfig("just words"), ConfigError);
  EXPECT_THROW(ParseRunConfig(" = 3"), ConfigError);
}

TEST(RunConfigTest, LoadResolvesAgainstConfigDirectory) {
  testing::TempDir dir;
  testing::WriteFile(dir / "run.conf", "train = t.json\n");
  EXPECT_EQ(LoadRunConfig(dir / "run.conf").train, dir.path() / "t.json");
  EXPECT_THROW(LoadRunConfig(dir / "missing.conf"), Error);
}

}  // namespace
}  // namespace acrotag
