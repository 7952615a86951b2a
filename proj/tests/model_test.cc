// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/model.h"

#include <gtest/gtest.h>

#include "acrotag/checkpoint.h"
#include "acrotag/errors.h"
#include "test_support.h"

namespace acrotag {
namespace {

ModelConfig TinyConfig() {
  ModelConfig c;
  c.embedding_dim = 4;
  c.hidden_size = 3;
  c.seed = 17;
  return c;
}

std::vector<std::vector<Token>> TokensOf(const std::vector<Document>& docs) {
  std::vector<std::vector<Token>> out;
  for (const Document& d : docs) out.push_back(Tokenize(d.text));
  return out;
}

TEST(TaggerTest, EndToEndGradientMatchesFiniteDifferences) {
  const auto docs = testing::SyntheticAcronymCorpus(6, 3);
  Tagger model = Tagger::CreateHashed(TinyConfig(), TokensOf(docs));
  for (const Document& doc : docs) {
    const TaggedSentence s = MakeTaggedSentence(doc);
    const auto r = testing::CheckTaggerGradients(model, s, 1e-5, 1e-4, 1e-7);
    EXPECT_EQ(r.failed, 0u) << doc.id << ": " << r.first_failure;
    EXPECT_GT(r.checked, 200u);
  }
}

TEST(TaggerTest, EmptyTextPredictsNothing) {
  const auto docs = testing::SyntheticAcronymCorpus(2, 3);
  const Tagger model = Tagger::CreateHashed(TinyConfig(), TokensOf(docs));
  Document empty{"e", "", Language::kEn, Domain::kLegal, {}, {}};
  const Prediction p = model.Predict(empty);
  EXPECT_TRUE(p.short_spans.empty());
  EXPECT_TRUE(p.long_spans.empty());
  EXPECT_TRUE(p.tags.empty());
  TaggerGradients g = model.ZeroGradients();
  EXPECT_EQ(model.LossAndGradient(MakeTaggedSentence(empty), g), 0.0);
}

TEST(TaggerTest, EmissionsFavoringOutsidePredictNoSpans) {
  const auto docs = testing::SyntheticAcronymCorpus(4, 3);
  Tagger model = Tagger::CreateHashed(TinyConfig(), TokensOf(docs));
  model.mutable_params().emission.weight.Fill(0.0);
  model.mutable_params().emission.bias = {5, 0, 0, 0, 0};
  for (const Document& doc : docs) {
    const Prediction p = model.Predict(doc);
    EXPECT_TRUE(p.short_spans.empty());
    EXPECT_TRUE(p.long_spans.empty());
    EXPECT_EQ(p.tags, std::vector<Tag>(Tokenize(doc.text).size(), Tag::kO));
  }
}

TEST(TaggerTest, PredictionsAreValidAndDeterministic) {
  const auto docs = testing::SyntheticAcronymCorpus(10, 5);
  const Tagger model = Tagger::CreateHashed(TinyConfig(), TokensOf(docs));
  for (const Document& doc : docs) {
    const Prediction a = model.Predict(doc);
    const Prediction b = model.Predict(doc);
    EXPECT_EQ(a.tags, b.tags);
    EXPECT_EQ(a.short_spans, b.short_spans);
    EXPECT_TRUE(IsValidBio(a.tags));
  }
}

TEST(TaggerTest, SameSeedSameParameters) {
  const auto docs = testing::SyntheticAcronymCorpus(5, 5);
  const Tagger a = Tagger::CreateHashed(TinyConfig(), TokensOf(docs));
  const Tagger b = Tagger::CreateHashed(TinyConfig(), TokensOf(docs));
  EXPECT_EQ(a.params(), b.params());
  EXPECT_EQ(a.lookup()->params(), b.lookup()->params());
  EXPECT_EQ(a.params().crf, CrfParams::Masked());
}

TEST(TaggerTest, FileProviderModel) {
  testing::TempDir dir;
  const auto docs = testing::SyntheticAcronymCorpus(3, 8);
  SplitMix64 rng(1);
  EmbeddingFileWriter w(dir / "e.bin", 4);
  for (const Document& d : docs) {
    const auto n = static_cast<uint32_t>(Tokenize(d.text).size());
    std::vector<float> v(n * 4);
    for (float& x : v) x = static_cast<float>(rng.Uniform(-1, 1));
    w.Write(d.id, n, v);
  }
  w.Close();
  ModelConfig config = TinyConfig();
  config.provider = ProviderKind::kFile;
  const auto file = EmbeddingFile::Open(dir / "e.bin");
  Tagger model = Tagger::CreateWithFile(config, file);
  EXPECT_EQ(model.lookup(), nullptr);
  EXPECT_EQ(model.Predict(docs[0]).tags.size(), Tokenize(docs[0].text).size());
  const auto r = testing::CheckTaggerGradients(model, MakeTaggedSentence(docs[1]),
                                               1e-5, 1e-4, 1e-7);
  EXPECT_EQ(r.failed, 0u) << r.first_failure;

  Document unknown = docs[0];
  unknown.id = "not-in-file";
  EXPECT_THROW(model.Predict(unknown), MissingIdError);

  config.embedding_dim = 5;
  EXPECT_THROW(Tagger::CreateWithFile(config, file), ConfigError);
}

class CheckpointTest : public ::testing::Test {
 protected:
  CheckpointTest()
      : docs_(testing::SyntheticAcronymCorpus(8, 21)),
        model_(Tagger::CreateHashed(TinyConfig(), TokensOf(docs_))) {
    // Move CRF and emission away from their initial values.
    SplitMix64 rng(2);
    for (std::span<double> t : DenseTensors(model_.mutable_params())) {
      for (double& v : t) v += rng.Uniform(-0.5, 0.5);
    }
    ApplyMask(model_.mutable_params().crf);
  }
  std::vector<Document> docs_;
  Tagger model_;
  testing::TempDir dir_;
};

TEST_F(CheckpointTest, RoundTripIsBitExact) {
  SaveCheckpoint(model_, {7, 0.625}, dir_ / "m.ckpt");
  const Checkpoint loaded = LoadCheckpoint(dir_ / "m.ckpt");
  EXPECT_EQ(loaded.metadata, (TrainingMetadata{7, 0.625}));
  EXPECT_EQ(loaded.model.config(), model_.config());
  EXPECT_EQ(loaded.model.params(), model_.params());
  EXPECT_EQ(loaded.model.lookup()->params(), model_.lookup()->params());
  for (const Document& d : docs_) {
    const Prediction a = model_.Predict(d);
    const Prediction b = loaded.model.Predict(d);
    EXPECT_EQ(a.tags, b.tags);
    EXPECT_EQ(model_.Emissions(model_.provider().Embed(d.id, Tokenize(d.text))),
              loaded.model.Emissions(
                  loaded.model.provider().Embed(d.id, Tokenize(d.text))));
  }
}

TEST_F(CheckpointTest, BumpedVersionIsFormatError) {
  SaveCheckpoint(model_, {}, dir_ / "m.ckpt");
  std::string bytes = testing::ReadFile(dir_ / "m.ckpt");
  bytes[4] = static_cast<char>(kCheckpointFormatVersion + 1);
  testing::WriteFile(dir_ / "m.ckpt", bytes);
  EXPECT_THROW(LoadCheckpoint(dir_ / "m.ckpt"), FormatError);
  bytes[0] = 'X';
  testing::WriteFile(dir_ / "m.ckpt", bytes);
  EXPECT_THROW(LoadCheckpoint(dir_ / "m.ckpt"), FormatError);
}

TEST_F(CheckpointTest, TensorShapeDisagreeingWithConfig) {
  SaveCheckpoint(model_, {}, dir_ / "m.ckpt");
  std::string bytes = testing::ReadFile(dir_ / "m.ckpt");
  // The config block starts with embeddingDim right after magic and version.
  bytes[8] = 5;
  testing::WriteFile(dir_ / "m.ckpt", bytes);
  EXPECT_THROW(LoadCheckpoint(dir_ / "m.ckpt"), CheckpointShapeError);
}

TEST_F(CheckpointTest, TruncationIsCorruption) {
  SaveCheckpoint(model_, {}, dir_ / "m.ckpt");
  std::string bytes = testing::ReadFile(dir_ / "m.ckpt");
  for (size_t keep : {size_t{10}, bytes.size() / 2, bytes.size() - 1}) {
    testing::WriteFile(dir_ / "t.ckpt", bytes.substr(0, keep));
    EXPECT_THROW(LoadCheckpoint(dir_ / "t.ckpt"), DataError) << keep;
  }
}

}  // namespace
}  // namespace acrotag
