// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The acrotag Authors.

#include "acrotag/cli.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "acrotag/corpus.h"
#include "acrotag/embeddings.h"
#include "test_support.h"

namespace acrotag {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunTool(std::vector<std::string> args) {
  args.insert(args.begin(), "acrotag");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  void WriteCorpus(const std::string& name, const std::vector<Document>& docs) {
    SaveCorpus(docs, dir_ / name);
  }
  void WriteConfig(const std::string& name, const std::string& body) {
    testing::WriteFile(dir_ / name, body);
  }
  testing::TempDir dir_;
};

TEST_F(CliTest, HelpExitsZeroForEveryCommand) {
  EXPECT_EQ(RunTool({"--help"}).code, 0);
  for (const char* cmd : {"convert", "train", "grid", "predict", "score",
                          "tokenize", "check-embeddings"}) {
    const CliResult r = RunTool({cmd, "--help"});
    EXPECT_EQ(r.code, 0) << cmd;
    EXPECT_FALSE(r.out.empty()) << cmd;
  }
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(RunTool({}).code, 1);
  EXPECT_EQ(RunTool({"frobnicate"}).code, 1);
  EXPECT_EQ(RunTool({"train"}).code, 1);
  EXPECT_EQ(RunTool({"score", "only-one.json"}).code, 1);
}

TEST_F(CliTest, UnknownConfigKeyExitsOne) {
  WriteCorpus("train.json", testing::SyntheticAcronymCorpus(2, 1));
  WriteConfig("run.conf", "train = train.json\nout = o\nlearning_rte = 0.1\n");
  const CliResult r = RunTool({"train", "--config", Path("run.conf")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("learning_rte"), std::string::npos);
}

TEST_F(CliTest, AbsentEmbeddingFileExitsTwo) {
  WriteCorpus("train.json", testing::SyntheticAcronymCorpus(2, 1));
  WriteConfig("run.conf",
              "train = train.json\nout = o\nprovider = file\n"
              "embeddings = nope.bin\nepochs = 1\npatience = 1\n");
  EXPECT_EQ(RunTool({"train", "--config", Path("run.conf")}).code, 2);
}

TEST_F(CliTest, MissingCorpusExitsTwo) {
  WriteConfig("run.conf", "train = absent.json\nout = o\n");
  EXPECT_EQ(RunTool({"train", "--config", Path("run.conf")}).code, 2);
}

TEST_F(CliTest, ScoreWithDisjointIdsExitsTwo) {
  auto gold = testing::SyntheticAcronymCorpus(3, 2);
  auto pred = gold;
  for (Document& d : pred) d.id += "-x";
  WriteCorpus("gold.json", gold);
  WriteCorpus("pred.json", pred);
  EXPECT_EQ(RunTool({"score", Path("pred.json"), Path("gold.json")}).code, 2);
}

TEST_F(CliTest, ScoreOfGoldAgainstItselfIsPerfect) {
  WriteCorpus("gold.json", testing::SyntheticAcronymCorpus(14, 3));
  const CliResult r = RunTool({"score", Path("gold.json"), Path("gold.json"), "--out",
                           Path("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("0."), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1.000/1.000/1.000"), std::string::npos);
  const auto report = nlohmann::json::parse(testing::ReadFile(dir_ / "report.json"));
  EXPECT_EQ(report["all"]["macro"]["f1"], 1.0);
  EXPECT_EQ(report["vi"]["short"]["p"], 1.0);
}

TEST_F(CliTest, ConvertWritesCanonicalCorpus) {
  testing::WriteFile(dir_ / "release.json", R"json([
    {"ID": "1", "text": "Ley de Enjuiciamiento Civil (LEC)",
     "acronyms": [[29, 32]], "long-forms": [[0, 27]]}])json");
  const CliResult r = RunTool({"convert", Path("release.json"), "--out",
                           Path("es.json"), "--language", "es", "--domain", "legal"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto docs = LoadCorpus(dir_ / "es.json");
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].slice(), Slice::kEs);
  EXPECT_EQ(docs[0].long_spans, (std::vector<CharSpan>{{0, 27}}));
  EXPECT_EQ(RunTool({"convert", Path("release.json"), "--out", Path("no/dir/x.json"),
                 "--language", "es", "--domain", "legal"})
                .code,
            2);
  EXPECT_EQ(RunTool({"convert", Path("release.json"), "--out", Path("x.json"),
                 "--language", "de", "--domain", "legal"})
                .code,
            1);
}

TEST_F(CliTest, TokenizeAndCheckEmbeddings) {
  const auto docs = testing::SyntheticAcronymCorpus(3, 4);
  WriteCorpus("c.json", docs);
  ASSERT_EQ(RunTool({"tokenize", Path("c.json"), "--out", Path("tok.json")}).code, 0);
  const auto tok = nlohmann::json::parse(testing::ReadFile(dir_ / "tok.json"));
  ASSERT_EQ(tok.size(), 3u);
  EXPECT_EQ(tok[0]["id"], docs[0].id);
  EXPECT_EQ(tok[0]["tokens"].size(), Tokenize(docs[0].text).size());

  EmbeddingFileWriter w(dir_ / "e.bin", 2);
  for (size_t i = 0; i < 3; ++i) {
    const auto n = static_cast<uint32_t>(tok[i]["tokens"].size());
    w.Write(docs[i].id, i == 2 ? n + 1 : n, std::vector<float>((i == 2 ? n + 1 : n) * 2));
  }
  w.Close();
  const CliResult r =
      RunTool({"check-embeddings", Path("c.json"), "--embeddings", Path("e.bin")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("misaligned: '" + docs[2].id + "'"), std::string::npos);
  EXPECT_NE(r.out.find("1 problems"), std::string::npos);
}

TEST_F(CliTest, TrainPredictScoreOverfits) {
  WriteCorpus("train.json", testing::SyntheticAcronymCorpus(24, 5));
  WriteConfig("run.conf",
              "train = train.json\ndev = train.json\nout = run\n"
              "embedding_dim = 16\nhidden_size = 16\nepochs = 40\npatience = 40\n"
              "batch_size = 4\nlearning_rate = 0.02\n");
  const CliResult t = RunTool({"train", "--config", Path("run.conf"), "--seed", "42"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("macro"), std::string::npos);
  const std::string metrics = testing::ReadFile(dir_ / "run" / "metrics.jsonl");
  EXPECT_EQ(std::count(metrics.begin(), metrics.end(), '\n'), 40);

  const CliResult p = RunTool({"predict", Path("run/model.ckpt"), Path("train.json"),
                           "--out", Path("pred.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  const CliResult s = RunTool({"score", Path("pred.json"), Path("train.json"), "--out",
                           Path("report.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto report = nlohmann::json::parse(testing::ReadFile(dir_ / "report.json"));
  EXPECT_GE(report["all"]["macro"]["f1"].get<double>(), 0.95) << s.out;
}

TEST_F(CliTest, FileProviderTrainAndPredict) {
  const auto docs = testing::SyntheticAcronymCorpus(8, 9);
  WriteCorpus("train.json", docs);
  SplitMix64 rng(4);
  EmbeddingFileWriter w(dir_ / "e.bin", 6);
  for (const Document& d : docs) {
    const auto n = static_cast<uint32_t>(Tokenize(d.text).size());
    std::vector<float> v(n * 6);
    for (float& x : v) x = static_cast<float>(rng.Uniform(-1, 1));
    w.Write(d.id, n, v);
  }
  w.Close();
  WriteConfig("run.conf",
              "train = train.json\nout = run\nprovider = file\n"
              "hidden_size = 4\nepochs = 1\npatience = 1\n");
  const CliResult t = RunTool({"train", "--config", Path("run.conf"),
                               "--embeddings", Path("e.bin")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(RunTool({"predict", Path("run/model.ckpt"), Path("train.json"), "--out",
                     Path("pred.json"), "--embeddings", Path("e.bin")})
                .code,
            0);
  EXPECT_EQ(LoadCorpus(dir_ / "pred.json").size(), docs.size());
  // The checkpoint cannot be used without its embeddings.
  EXPECT_EQ(RunTool({"predict", Path("run/model.ckpt"), Path("train.json"), "--out",
                     Path("pred.json")})
                .code,
            1);
}

TEST_F(CliTest, PerLanguageTrainWritesOneCheckpointPerSlice) {
  WriteCorpus("train.json", testing::SyntheticAcronymCorpus(14, 6));
  WriteConfig("run.conf",
              "train = train.json\nout = run\nmode = per-language\n"
              "embedding_dim = 4\nhidden_size = 4\nepochs = 1\npatience = 1\n");
  ASSERT_EQ(RunTool({"train", "--config", Path("run.conf")}).code, 0);
  for (Slice s : kAllSlices) {
    EXPECT_TRUE(std::filesystem::exists(
        dir_ / "run" / ("model." + std::string(SliceName(s)) + ".ckpt")));
  }
}

TEST_F(CliTest, GridWritesTable) {
  WriteCorpus("train.json", testing::SyntheticAcronymCorpus(7, 7));
  WriteConfig("run.conf",
              "train = train.json\ndev = train.json\nout = g\n"
              "embedding_dim = 4\nhidden_size = 4\nepochs = 1\npatience = 1\n");
  const CliResult r = RunTool({"grid", "--config", Path("run.conf")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("r1"), std::string::npos);
  EXPECT_EQ(testing::ReadFile(dir_ / "g" / "grid.txt"), r.out);
}

TEST_F(CliTest, BinaryReportsExitCodes) {
  const std::string bin = ACROTAG_CLI_PATH;
  EXPECT_EQ(std::system((bin + " --help > /dev/null").c_str()), 0);
  const int status = std::system((bin + " score /nonexistent/a.json "
                                        "/nonexistent/b.json 2> /dev/null")
                                     .c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

}  // namespace
}  // namespace acrotag
