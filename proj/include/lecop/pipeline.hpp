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

#ifndef LECOP_PIPELINE_HPP_
#define LECOP_PIPELINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lecop/common.hpp"
#include "lecop/cooccur.hpp"
#include "lecop/metrics.hpp"
#include "lecop/node2vec.hpp"
#include "lecop/recommender.hpp"

namespace lecop {

// One run's settings. Read from a "key = value" file; command-line flags
// override individual keys.
struct PipelineConfig {
  std::string train_news;
  std::string train_behaviors;
  std::string dev_news;
  std::string dev_behaviors;
  std::string keywords;
  std::string llm_embeddings;  // default: <work_dir>/embeddings/llm.lec1
  std::string work_dir = "work";

  std::string embedding_endpoint;
  std::string embedding_token;
  int embedding_batch_size = 32;
  int embedding_parallelism = 1;

  int window = 2;
  IntraCountMode intra_mode = IntraCountMode::kPerPosition;
  HistoryMode history_mode = HistoryMode::kLongestPerUser;

  node2vec::WalkConfig walk;
  node2vec::SgnsConfig sgns;

  int dim_id = 100;
  int dim_item_item_kw = 100;
  int dim_intra_kw = 100;
  bool keyword_segments = true;
  bool zero_llm_fallback = false;

  int heads = 15;
  int attention_dim = 200;
  TrainConfig train;

  bool echo = true;
  bool strict = false;
  bool skip_bad_rows = false;
  bool keywords_strict = false;

  std::uint64_t seed = 0;
  int threads = DefaultThreads();

  int out_dim() const { return dim_id + dim_item_item_kw + dim_intra_kw; }
  EncoderShape encoder_shape() const;
  std::string LlmEmbeddingsPath() const;
  std::string WorkPath(std::string_view relative) const;

  // Throws UsageError for unknown keys or unparseable values.
  void Set(const std::string& key, const std::string& value);
  void Validate() const;
  // Every key with its effective value, for checkpoints and reports.
  std::string ToJson() const;
};

// Relative paths in the file resolve against the file's directory.
PipelineConfig LoadConfig(const std::string& path);
PipelineConfig ParseConfigText(std::string_view text, const std::string& base_dir);

// Work-dir layout.
inline constexpr std::string_view kGraphFiles[3] = {
    "graphs/id_id.tsv", "graphs/item_item_kw.tsv", "graphs/intra_item_kw.tsv"};
inline constexpr std::string_view kCoocEmbeddingFiles[3] = {
    "embeddings/cooc_id.lec1", "embeddings/cooc_item_item_kw.lec1",
    "embeddings/cooc_intra_kw.lec1"};
inline constexpr std::string_view kDefaultCheckpoint = "checkpoints/model";

// Subcommands. Each throws DataError / UsageError / RuntimeFailure on
// failure; `log` receives human-readable progress.
void CmdStats(const PipelineConfig& cfg, std::ostream& log);
void CmdPrompts(const PipelineConfig& cfg, std::ostream& log);
void CmdFetchEmbeddings(const PipelineConfig& cfg, std::ostream& log);
void CmdGraphs(const PipelineConfig& cfg, std::ostream& log);
void CmdEmbedGraphs(const PipelineConfig& cfg, std::ostream& log);
void CmdTrain(const PipelineConfig& cfg, std::ostream& log);
// Returns the report; also writes reports/eval.{json,txt}.
MetricsReport CmdEvaluate(const PipelineConfig& cfg, const std::string& checkpoint,
                          std::ostream& log);

// Full command line (argv[0] included). Returns the process exit code:
// 0 success, 1 usage error, 2 data error, 3 runtime failure.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace lecop

#endif  // LECOP_PIPELINE_HPP_
