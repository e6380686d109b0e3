/*
 * Copyright 2026 The LECOP Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "lecop/common.hpp"
#include "lecop/pipeline.hpp"
#include "lecop/synthetic.hpp"
#include "support/oracles.hpp"

namespace lecop {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunLecop(std::vector<std::string> args) {
  args.insert(args.begin(), "lecop");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Config, ParsesCommentsAndResolvesPaths) {
  const auto cfg = ParseConfigText(
      "# comment\n"
      "train_news = data/news.tsv   # trailing\n"
      "train_behaviors = /abs/behaviors.tsv\n"
      "\n"
      "window = 3\n"
      "node2vec.p = 2\n"
      "fusion.keyword_segments = off\n"
      "history = per_impression\n"
      "intra_count = item\n",
      "/base/dir");
  EXPECT_EQ(cfg.train_news, "/base/dir/data/news.tsv");
  EXPECT_EQ(cfg.train_behaviors, "/abs/behaviors.tsv");
  EXPECT_EQ(cfg.work_dir, "/base/dir/work");
  EXPECT_EQ(cfg.window, 3);
  EXPECT_EQ(cfg.walk.p, 2.0);
  EXPECT_FALSE(cfg.keyword_segments);
  EXPECT_EQ(cfg.history_mode, HistoryMode::kPerImpression);
  EXPECT_EQ(cfg.intra_mode, IntraCountMode::kPerDistinctItem);
  EXPECT_EQ(cfg.LlmEmbeddingsPath(), "/base/dir/work/embeddings/llm.lec1");
}

TEST(Config, Errors) {
  try {
    ParseConfigText("window = 2\nbogus = 1\n", "/");
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(ParseConfigText("window = two\n", "/"), UsageError);
  EXPECT_THROW(ParseConfigText("window 2\n", "/"), UsageError);
  EXPECT_THROW(LoadConfig("/nonexistent/lecop.conf"), UsageError);
  // Range checks run after overrides are applied.
  for (const char* bad : {"window = 1\n", "model.heads = 7\n", "sgns.epochs = -1\n",
                          "threads = 0\n", "node2vec.p = 0\n"}) {
    EXPECT_THROW(ParseConfigText(bad, "/").Validate(), UsageError) << bad;
  }
  EXPECT_NO_THROW(ParseConfigText("", "/").Validate());
}

TEST(Config, JsonListsEffectiveValues) {
  PipelineConfig cfg;
  cfg.Set("seed", "42");
  cfg.Set("train.learning_rate", "0.5");
  const auto json = nlohmann::json::parse(cfg.ToJson());
  EXPECT_EQ(json["seed"], 42);
  EXPECT_EQ(json["train"]["learning_rate"], 0.5);
}

TEST(Cli, UsageAndMissingInputs) {
  testing::TempDir dir;
  EXPECT_EQ(RunLecop({"--help"}).code, 0);
  EXPECT_EQ(RunLecop({"stats"}).code, 1);
  EXPECT_EQ(RunLecop({"--config", dir / "none.conf", "stats"}).code, 1);

  WriteFile(dir / "lecop.conf", "train_news = news.tsv\ntrain_behaviors = missing.tsv\n");
  WriteFile(dir / "news.tsv", "");
  const auto r = RunLecop({"--config", dir / "lecop.conf", "stats"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.tsv"), std::string::npos);
  EXPECT_EQ(r.err.rfind("lecop: error[data]:", 0), 0u);

  EXPECT_EQ(RunLecop({"--config", dir / "lecop.conf", "--set", "nokey=1", "stats"}).code, 1);
  EXPECT_EQ(RunLecop({"--config", dir / "lecop.conf", "--set", "window", "stats"}).code, 1);
  EXPECT_EQ(RunLecop({"--config", dir / "lecop.conf", "--threads", "0", "graphs"}).code, 1);
  EXPECT_NE(RunLecop({"--config", dir / "lecop.conf", "embed-graphs"}).code, 0);
  EXPECT_NE(RunLecop({"--config", dir / "lecop.conf", "evaluate"}).code, 0);
  const auto fetch = RunLecop({"--config", dir / "lecop.conf", "fetch-embeddings"});
  EXPECT_EQ(fetch.code, 1);
}

TEST(Cli, EmptyCorpusProducesEmptyArtifacts) {
  testing::TempDir dir;
  WriteFile(dir / "lecop.conf",
            "train_news = news.tsv\ntrain_behaviors = behaviors.tsv\nkeywords = kw.jsonl\n");
  WriteFile(dir / "news.tsv", "");
  WriteFile(dir / "behaviors.tsv", "");
  WriteFile(dir / "kw.jsonl", "");
  ASSERT_EQ(RunLecop({"--config", dir / "lecop.conf", "prompts"}).code, 0);
  EXPECT_EQ(ReadFile(dir / "work/prompts/embedding_prompts.jsonl"), "");
  EXPECT_EQ(ReadFile(dir / "work/prompts/keyword_prompts.jsonl"), "");
  EXPECT_EQ(ReadFile(dir / "work/prompts/triples.jsonl"), "");
  ASSERT_EQ(RunLecop({"--config", dir / "lecop.conf", "graphs"}).code, 0);
  for (const auto rel : kGraphFiles) {
    EXPECT_EQ(ReadFile(dir / ("work/" + std::string(rel))), "");
  }
  ASSERT_EQ(RunLecop({"--config", dir / "lecop.conf", "embed-graphs"}).code, 0);
  EXPECT_EQ(RunLecop({"--config", dir / "lecop.conf", "train"}).code, 2);
}

TEST(Cli, SmallSyntheticRunIsReproducible) {
  SyntheticOptions o;
  o.users = 30;
  o.news = 80;
  o.cold_news = 10;
  o.train_impressions_per_user = 2;
  const auto corpus = GenerateSynthetic(o);
  std::vector<std::string> snapshot;
  for (int run = 0; run < 2; ++run) {
    testing::TempDir dir;
    WriteSynthetic(corpus, o, dir.path().string());
    const std::string conf = dir / "lecop.conf";
    for (const char* cmd : {"stats", "prompts", "graphs", "embed-graphs", "train", "evaluate"}) {
      const auto r = RunLecop({"--config", conf, "--threads", "1", "--set", "train.epochs=2", cmd});
      ASSERT_EQ(r.code, 0) << cmd << ": " << r.err;
      if (std::string(cmd) == "evaluate") EXPECT_NE(r.out.find("NRMS+LECOP"), std::string::npos);
    }
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir / "work")) {
      if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir.path()).string());
    }
    std::sort(files.begin(), files.end());
    std::string all;
    for (const auto& f : files) all += f + "\n" + ReadFile(dir / f);
    snapshot.push_back(all);
    EXPECT_TRUE(fs::exists(dir / "work/checkpoints/model/checkpoint.json"));
    EXPECT_TRUE(fs::exists(dir / "work/reports/overlap.json"));
    EXPECT_TRUE(fs::exists(dir / "work/embeddings/news_vectors.lec1"));
  }
  EXPECT_TRUE(snapshot[0] == snapshot[1]);
}

}  // namespace
}  // namespace lecop
