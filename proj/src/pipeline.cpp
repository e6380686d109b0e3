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

#include "lecop/pipeline.hpp"

#include <charconv>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lecop/dataset.hpp"
#include "lecop/embedding_client.hpp"
#include "lecop/fusion.hpp"
#include "lecop/keywords.hpp"
#include "lecop/prompts.hpp"

namespace lecop {
namespace {

namespace fs = std::filesystem;

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError("config key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  const std::string v = ToLowerAscii(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError("config key '" + key + "': expected true/false, got '" + value + "'");
}

bool IsPathKey(const std::string& key) {
  return key == "train_news" || key == "train_behaviors" || key == "dev_news" ||
         key == "dev_behaviors" || key == "keywords" || key == "llm_embeddings" ||
         key == "work_dir";
}

void RequirePath(const std::string& path, const std::string& key) {
  if (path.empty()) throw DataError("config key '" + key + "' is not set");
  if (!fs::exists(path)) {
    throw DataError("missing input for '" + key + "': " + path);
  }
}

ParseOptions RowOptions(const PipelineConfig& cfg) {
  return {cfg.skip_bad_rows && !cfg.strict};
}

KeywordMap LoadKeywordsIfSet(const PipelineConfig& cfg, std::ostream& log) {
  if (cfg.keywords.empty()) {
    log << "lecop: info: no keywords file configured; keyword graphs will be empty\n";
    return {};
  }
  RequirePath(cfg.keywords, "keywords");
  auto loaded = LoadKeywords(cfg.keywords, {cfg.keywords_strict || cfg.strict});
  if (loaded.truncated_entries > 0) {
    log << "lecop: info: truncated " << loaded.truncated_entries
        << " keyword lists to 3 entries\n";
  }
  return std::move(loaded.keywords);
}

std::vector<NewsItem> LoadCatalog(const PipelineConfig& cfg, std::ostream& log) {
  RequirePath(cfg.train_news, "train_news");
  std::vector<std::vector<NewsItem>> parts;
  auto train = ParseNews(cfg.train_news, RowOptions(cfg));
  if (train.skipped_rows) log << "lecop: info: skipped " << train.skipped_rows << " bad news rows\n";
  parts.push_back(std::move(train.records));
  if (!cfg.dev_news.empty()) {
    RequirePath(cfg.dev_news, "dev_news");
    auto dev = ParseNews(cfg.dev_news, RowOptions(cfg));
    if (dev.skipped_rows) log << "lecop: info: skipped " << dev.skipped_rows << " bad news rows\n";
    parts.push_back(std::move(dev.records));
  }
  return MergeCatalogs(parts);
}

std::vector<Impression> LoadBehaviors(const PipelineConfig& cfg, const std::string& path,
                                      const std::string& key, std::ostream& log) {
  RequirePath(path, key);
  auto parsed = ParseBehaviors(path, RowOptions(cfg));
  if (parsed.skipped_rows) {
    log << "lecop: info: skipped " << parsed.skipped_rows << " bad rows in " << path << "\n";
  }
  return std::move(parsed.records);
}

CoocEmbeddingSet LoadCooc(const PipelineConfig& cfg) {
  EmbeddingTable tables[3];
  for (int k = 0; k < 3; ++k) {
    const std::string path = cfg.WorkPath(kCoocEmbeddingFiles[k]);
    RequirePath(path, "co-occurrence embeddings");
    tables[k] = LoadEmbeddings(path);
  }
  CoocEmbeddingSet cooc{std::move(tables[0]), std::move(tables[1]), std::move(tables[2]),
                        cfg.keyword_segments};
  if (static_cast<int>(cooc.out_dim()) != cfg.out_dim()) {
    throw DataError("co-occurrence embedding dims sum to " +
                    std::to_string(cooc.out_dim()) + ", config expects " +
                    std::to_string(cfg.out_dim()));
  }
  return cooc;
}

NewsFeatures LoadFeatures(const PipelineConfig& cfg, std::ostream& log) {
  const auto catalog = LoadCatalog(cfg, log);
  const auto keywords = LoadKeywordsIfSet(cfg, log);
  const std::string llm_path = cfg.LlmEmbeddingsPath();
  RequirePath(llm_path, "llm_embeddings");
  const EmbeddingTable llm = LoadEmbeddings(llm_path);
  const CoocEmbeddingSet cooc = LoadCooc(cfg);
  NewsFeatures features(catalog, llm, cooc, keywords, {cfg.zero_llm_fallback});
  const auto& cov = features.coverage();
  log << "lecop: info: features for " << features.size() << " news; fallbacks id="
      << cov.id_fallbacks << " item_item_kw=" << cov.item_item_kw_fallbacks
      << " intra_kw=" << cov.intra_kw_fallbacks << " llm=" << cov.llm_fallbacks << "\n";
  return features;
}

nlohmann::ordered_json StatsJson(const DatasetStats& s) {
  return {{"user_count", s.user_count},
          {"news_count", s.news_count},
          {"click_count", s.click_count}};
}

std::string OneLine(std::string msg) {
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return msg;
}

}  // namespace

EncoderShape PipelineConfig::encoder_shape() const {
  EncoderShape s;
  s.dim = out_dim();
  s.heads = heads;
  s.head_dim = heads > 0 ? out_dim() / heads : 0;
  s.attention_dim = attention_dim;
  return s;
}

std::string PipelineConfig::LlmEmbeddingsPath() const {
  return llm_embeddings.empty() ? WorkPath("embeddings/llm.lec1") : llm_embeddings;
}

std::string PipelineConfig::WorkPath(std::string_view relative) const {
  return (fs::path(work_dir) / fs::path(relative)).string();
}

void PipelineConfig::Set(const std::string& key, const std::string& value) {
  using Setter = std::function<void(PipelineConfig&, const std::string&)>;
  static const std::map<std::string, Setter> kSetters = {
      {"train_news", [](auto& c, const auto& v) { c.train_news = v; }},
      {"train_behaviors", [](auto& c, const auto& v) { c.train_behaviors = v; }},
      {"dev_news", [](auto& c, const auto& v) { c.dev_news = v; }},
      {"dev_behaviors", [](auto& c, const auto& v) { c.dev_behaviors = v; }},
      {"keywords", [](auto& c, const auto& v) { c.keywords = v; }},
      {"llm_embeddings", [](auto& c, const auto& v) { c.llm_embeddings = v; }},
      {"work_dir", [](auto& c, const auto& v) { c.work_dir = v; }},
      {"embedding.endpoint", [](auto& c, const auto& v) { c.embedding_endpoint = v; }},
      {"embedding.token", [](auto& c, const auto& v) { c.embedding_token = v; }},
      {"embedding.batch_size",
       [](auto& c, const auto& v) { c.embedding_batch_size = ParseNumber<int>("embedding.batch_size", v); }},
      {"embedding.parallelism",
       [](auto& c, const auto& v) { c.embedding_parallelism = ParseNumber<int>("embedding.parallelism", v); }},
      {"window", [](auto& c, const auto& v) { c.window = ParseNumber<int>("window", v); }},
      {"intra_count",
       [](auto& c, const auto& v) {
         if (v == "position") {
           c.intra_mode = IntraCountMode::kPerPosition;
         } else if (v == "item") {
           c.intra_mode = IntraCountMode::kPerDistinctItem;
         } else {
           throw UsageError("intra_count must be 'position' or 'item'");
         }
       }},
      {"history",
       [](auto& c, const auto& v) {
         if (v == "longest") {
           c.history_mode = HistoryMode::kLongestPerUser;
         } else if (v == "per_impression") {
           c.history_mode = HistoryMode::kPerImpression;
         } else {
           throw UsageError("history must be 'longest' or 'per_impression'");
         }
       }},
      {"node2vec.p", [](auto& c, const auto& v) { c.walk.p = ParseNumber<double>("node2vec.p", v); }},
      {"node2vec.q", [](auto& c, const auto& v) { c.walk.q = ParseNumber<double>("node2vec.q", v); }},
      {"node2vec.walk_length",
       [](auto& c, const auto& v) { c.walk.walk_length = ParseNumber<int>("node2vec.walk_length", v); }},
      {"node2vec.walks_per_node",
       [](auto& c, const auto& v) { c.walk.walks_per_node = ParseNumber<int>("node2vec.walks_per_node", v); }},
      {"sgns.context_window",
       [](auto& c, const auto& v) { c.sgns.context_window = ParseNumber<int>("sgns.context_window", v); }},
      {"sgns.negatives",
       [](auto& c, const auto& v) { c.sgns.negatives = ParseNumber<int>("sgns.negatives", v); }},
      {"sgns.epochs", [](auto& c, const auto& v) { c.sgns.epochs = ParseNumber<int>("sgns.epochs", v); }},
      {"sgns.learning_rate",
       [](auto& c, const auto& v) { c.sgns.learning_rate = ParseNumber<double>("sgns.learning_rate", v); }},
      {"fusion.dim_id", [](auto& c, const auto& v) { c.dim_id = ParseNumber<int>("fusion.dim_id", v); }},
      {"fusion.dim_item_item_kw",
       [](auto& c, const auto& v) { c.dim_item_item_kw = ParseNumber<int>("fusion.dim_item_item_kw", v); }},
      {"fusion.dim_intra_kw",
       [](auto& c, const auto& v) { c.dim_intra_kw = ParseNumber<int>("fusion.dim_intra_kw", v); }},
      {"fusion.keyword_segments",
       [](auto& c, const auto& v) { c.keyword_segments = ParseBool("fusion.keyword_segments", v); }},
      {"fusion.zero_llm_fallback",
       [](auto& c, const auto& v) { c.zero_llm_fallback = ParseBool("fusion.zero_llm_fallback", v); }},
      {"model.heads", [](auto& c, const auto& v) { c.heads = ParseNumber<int>("model.heads", v); }},
      {"model.attention_dim",
       [](auto& c, const auto& v) { c.attention_dim = ParseNumber<int>("model.attention_dim", v); }},
      {"train.negatives",
       [](auto& c, const auto& v) { c.train.negatives = ParseNumber<int>("train.negatives", v); }},
      {"train.batch_size",
       [](auto& c, const auto& v) { c.train.batch_size = ParseNumber<int>("train.batch_size", v); }},
      {"train.learning_rate",
       [](auto& c, const auto& v) { c.train.learning_rate = ParseNumber<double>("train.learning_rate", v); }},
      {"train.epochs", [](auto& c, const auto& v) { c.train.epochs = ParseNumber<int>("train.epochs", v); }},
      {"train.max_history",
       [](auto& c, const auto& v) { c.train.max_history = ParseNumber<int>("train.max_history", v); }},
      {"prompts.echo", [](auto& c, const auto& v) { c.echo = ParseBool("prompts.echo", v); }},
      {"strict", [](auto& c, const auto& v) { c.strict = ParseBool("strict", v); }},
      {"skip_bad_rows", [](auto& c, const auto& v) { c.skip_bad_rows = ParseBool("skip_bad_rows", v); }},
      {"keywords.strict",
       [](auto& c, const auto& v) { c.keywords_strict = ParseBool("keywords.strict", v); }},
      {"seed", [](auto& c, const auto& v) { c.seed = ParseNumber<std::uint64_t>("seed", v); }},
      {"threads", [](auto& c, const auto& v) { c.threads = ParseNumber<int>("threads", v); }},
  };
  const auto it = kSetters.find(key);
  if (it == kSetters.end()) throw UsageError("unknown config key '" + key + "'");
  it->second(*this, value);
}

void PipelineConfig::Validate() const {
  if (window < 2) throw UsageError("window must be >= 2");
  if (dim_id < 1 || dim_item_item_kw < 1 || dim_intra_kw < 1) {
    throw UsageError("fusion dims must be positive");
  }
  if (heads < 1 || out_dim() % heads != 0) {
    throw UsageError("model.heads must divide the fused dim " + std::to_string(out_dim()));
  }
  if (threads < 1) throw UsageError("threads must be >= 1");
  if (embedding_batch_size < 1 || embedding_parallelism < 1) {
    throw UsageError("embedding batch size and parallelism must be >= 1");
  }
  node2vec::Validate(walk);
  node2vec::Validate(sgns);
  train.Validate();
  encoder_shape().Validate();
}

std::string PipelineConfig::ToJson() const {
  nlohmann::ordered_json j;
  j["window"] = window;
  j["intra_count"] = intra_mode == IntraCountMode::kPerPosition ? "position" : "item";
  j["history"] = history_mode == HistoryMode::kLongestPerUser ? "longest" : "per_impression";
  j["node2vec"] = {{"p", walk.p},
                   {"q", walk.q},
                   {"walk_length", walk.walk_length},
                   {"walks_per_node", walk.walks_per_node}};
  j["sgns"] = {{"context_window", sgns.context_window},
               {"negatives", sgns.negatives},
               {"epochs", sgns.epochs},
               {"learning_rate", sgns.learning_rate}};
  j["fusion"] = {{"dim_id", dim_id},
                 {"dim_item_item_kw", dim_item_item_kw},
                 {"dim_intra_kw", dim_intra_kw},
                 {"keyword_segments", keyword_segments},
                 {"zero_llm_fallback", zero_llm_fallback}};
  j["model"] = {{"heads", heads}, {"attention_dim", attention_dim}};
  j["train"] = {{"negatives", train.negatives},
                {"batch_size", train.batch_size},
                {"learning_rate", train.learning_rate},
                {"epochs", train.epochs},
                {"max_history", train.max_history},
                {"beta1", train.beta1},
                {"beta2", train.beta2},
                {"epsilon", train.epsilon}};
  j["seed"] = seed;
  return j.dump();
}

PipelineConfig ParseConfigText(std::string_view text, const std::string& base_dir) {
  PipelineConfig cfg;
  cfg.work_dir = (fs::path(base_dir) / cfg.work_dir).lexically_normal().string();
  std::size_t line_no = 0;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (IsPathKey(key) && !value.empty() && fs::path(value).is_relative()) {
      value = (fs::path(base_dir) / value).lexically_normal().string();
    }
    try {
      cfg.Set(key, value);
    } catch (const UsageError& e) {
      throw UsageError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

PipelineConfig LoadConfig(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path);
  const fs::path p(path);
  return ParseConfigText(ReadFile(path), p.has_parent_path() ? p.parent_path().string() : ".");
}

void CmdStats(const PipelineConfig& cfg, std::ostream& log) {
  RequirePath(cfg.train_news, "train_news");
  RequirePath(cfg.train_behaviors, "train_behaviors");
  const auto train_news = ParseNews(cfg.train_news, RowOptions(cfg));
  const auto train = LoadBehaviors(cfg, cfg.train_behaviors, "train_behaviors", log);
  std::vector<NewsItem> dev_news;
  std::vector<Impression> dev;
  const bool has_dev = !cfg.dev_behaviors.empty();
  if (!cfg.dev_news.empty()) {
    RequirePath(cfg.dev_news, "dev_news");
    dev_news = ParseNews(cfg.dev_news, RowOptions(cfg)).records;
  }
  if (has_dev) dev = LoadBehaviors(cfg, cfg.dev_behaviors, "dev_behaviors", log);

  const auto catalog = MergeCatalogs({train_news.records, dev_news});
  std::vector<Impression> all = train;
  all.insert(all.end(), dev.begin(), dev.end());
  const DatasetStats combined = ComputeStats(catalog, all);

  nlohmann::ordered_json j;
  j["click_rule"] = "positive candidate labels; histories excluded";
  j["combined"] = StatsJson(combined);
  j["train"] = StatsJson(ComputeStats(train_news.records, train));
  if (has_dev) j["dev"] = StatsJson(ComputeStats(dev_news, dev));
  WriteFile(cfg.WorkPath("reports/stats.json"), j.dump(2) + "\n");
  WriteFile(cfg.WorkPath("reports/stats.txt"), StatsToText(combined));
  log << StatsToText(combined);

  const KeywordMap keywords = LoadKeywordsIfSet(cfg, log);
  if (!cfg.keywords.empty()) {
    WriteFile(cfg.WorkPath("reports/keyword_validation.json"),
              ValidationToJson(ValidateKeywords(keywords, catalog)));
  }
  if (has_dev) {
    const OverlapReport overlap = ComputeOverlap(train, dev, keywords);
    WriteFile(cfg.WorkPath("reports/overlap.json"), OverlapToJson(overlap));
    WriteFile(cfg.WorkPath("reports/overlap.txt"), OverlapToText(overlap));
    log << OverlapToText(overlap);
  }
}

void CmdPrompts(const PipelineConfig& cfg, std::ostream& log) {
  const auto catalog = LoadCatalog(cfg, log);
  std::vector<ContrastiveTriple> triples;
  if (!catalog.empty()) {
    const TripleSet set = BuildContrastiveTriples(catalog, DeriveSeed(cfg.seed, "triples"));
    triples = set.triples;
    log << "lecop: info: " << triples.size() << " triples; skipped "
        << set.skipped_empty_abstract << " without abstract, "
        << set.skipped_no_distinct_negative << " without a distinct negative\n";
  }
  std::vector<PromptRecord> embedding_prompts;
  std::vector<PromptRecord> keyword_prompts;
  for (const auto& item : catalog) {
    embedding_prompts.push_back(BuildEmbeddingPrompt(item, cfg.echo));
    keyword_prompts.push_back(BuildKeywordPrompt(item));
  }
  WriteFile(cfg.WorkPath("prompts/triples.jsonl"), TriplesToJsonl(triples));
  WriteFile(cfg.WorkPath("prompts/embedding_prompts.jsonl"), PromptsToJsonl(embedding_prompts));
  WriteFile(cfg.WorkPath("prompts/keyword_prompts.jsonl"), PromptsToJsonl(keyword_prompts));
  WriteFile(cfg.WorkPath("prompts/templates.json"), PromptTemplatesJson(cfg.echo));
}

void CmdFetchEmbeddings(const PipelineConfig& cfg, std::ostream& log) {
  if (cfg.embedding_endpoint.empty()) throw UsageError("embedding.endpoint is not set");
  const std::string prompts_path = cfg.WorkPath("prompts/embedding_prompts.jsonl");
  RequirePath(prompts_path, "embedding prompts (run 'prompts' first)");
  const auto prompts = ParsePromptsJsonl(ReadFile(prompts_path));
  FetchOptions options;
  options.batch_size = static_cast<std::size_t>(cfg.embedding_batch_size);
  options.parallelism = cfg.embedding_parallelism;
  options.bearer_token = cfg.embedding_token;
  const EmbeddingTable table = FetchEmbeddings(cfg.embedding_endpoint, prompts, options);
  SaveEmbeddings(table, cfg.LlmEmbeddingsPath());
  log << "lecop: info: fetched " << table.size() << " embeddings of dim " << table.dim() << "\n";
}

void CmdGraphs(const PipelineConfig& cfg, std::ostream& log) {
  const auto train = LoadBehaviors(cfg, cfg.train_behaviors, "train_behaviors", log);
  const KeywordMap keywords = LoadKeywordsIfSet(cfg, log);
  const auto histories = SelectHistories(train, cfg.history_mode);
  const PairSets pairs =
      Accumulate(histories, {cfg.window, cfg.intra_mode}, keywords, cfg.threads);
  const PairMultiset* sets[3] = {&pairs.id_id, &pairs.item_item_kw, &pairs.intra_kw};
  nlohmann::ordered_json report;
  report["histories"] = histories.size();
  report["window"] = cfg.window;
  report["positions_without_keywords"] = pairs.positions_without_keywords;
  for (int k = 0; k < 3; ++k) {
    const WeightedGraph graph = BuildGraph(*sets[k]);
    WriteFile(cfg.WorkPath(kGraphFiles[k]), DumpGraph(graph));
    report[std::string(PairKindName(sets[k]->kind()))] = {
        {"nodes", graph.num_nodes()},
        {"edges", graph.num_edges()},
        {"total_weight", graph.TotalWeight()}};
    log << "lecop: info: " << PairKindName(sets[k]->kind()) << " graph: "
        << graph.num_nodes() << " nodes, " << graph.num_edges() << " edges\n";
  }
  WriteFile(cfg.WorkPath("reports/graphs.json"), report.dump(2) + "\n");
}

void CmdEmbedGraphs(const PipelineConfig& cfg, std::ostream& log) {
  const int dims[3] = {cfg.dim_id, cfg.dim_item_item_kw, cfg.dim_intra_kw};
  const char* names[3] = {"id_id", "item_item_kw", "intra_item_kw"};
  WeightedGraph graphs[3];
  for (int k = 0; k < 3; ++k) {
    const std::string path = cfg.WorkPath(kGraphFiles[k]);
    RequirePath(path, std::string(names[k]) + " graph (run 'graphs' first)");
    try {
      graphs[k] = ParseGraph(ReadFile(path));
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what());
    }
  }
  std::string loss_log = "graph\tepoch\tloss\n";
  for (int k = 0; k < 3; ++k) {
    node2vec::WalkConfig walk = cfg.walk;
    walk.seed = DeriveSeed(cfg.seed, std::string("node2vec/walks/") + names[k]);
    node2vec::SgnsConfig sgns = cfg.sgns;
    sgns.dim = dims[k];
    sgns.seed = DeriveSeed(cfg.seed, std::string("node2vec/sgns/") + names[k]);
    sgns.threads = cfg.threads;
    const auto result = node2vec::EmbedGraph(graphs[k], walk, sgns, cfg.threads);
    SaveEmbeddings(result.embeddings, cfg.WorkPath(kCoocEmbeddingFiles[k]));
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
      loss_log += std::string(names[k]) + "\t" + std::to_string(e + 1) + "\t" +
                  FormatDouble(result.epoch_loss[e]) + "\n";
    }
    log << "lecop: info: embedded " << result.embeddings.size() << " nodes of "
        << names[k] << " (dim " << dims[k] << ")\n";
  }
  WriteFile(cfg.WorkPath("reports/sgns_loss.tsv"), loss_log);
}

void CmdTrain(const PipelineConfig& cfg, std::ostream& log) {
  const auto train = LoadBehaviors(cfg, cfg.train_behaviors, "train_behaviors", log);
  const NewsFeatures features = LoadFeatures(cfg, log);
  TrainConfig tc = cfg.train;
  tc.seed = DeriveSeed(cfg.seed, "train");
  tc.threads = cfg.threads;
  RecommenderModel init = RecommenderModel::Init(cfg.encoder_shape(), features.llm_dim(),
                                                 DeriveSeed(cfg.seed, "model/init"));
  const TrainResult result = Train(train, features, std::move(init), tc);

  SaveCheckpoint(result.model, cfg.WorkPath(kDefaultCheckpoint), cfg.ToJson());
  std::string loss_log = "epoch\tloss\n";
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    loss_log += std::to_string(e + 1) + "\t" + FormatDouble(result.epoch_loss[e]) + "\n";
    log << "lecop: info: epoch " << e + 1 << " loss " << result.epoch_loss[e] << "\n";
  }
  WriteFile(cfg.WorkPath("reports/train_loss.tsv"), loss_log);
  SaveEmbeddings(BuildNewsTable(features, result.model.projection),
                 cfg.WorkPath("embeddings/news_vectors.lec1"));
}

MetricsReport CmdEvaluate(const PipelineConfig& cfg, const std::string& checkpoint,
                          std::ostream& log) {
  const std::string dir = checkpoint.empty() ? cfg.WorkPath(kDefaultCheckpoint) : checkpoint;
  RequirePath(dir + "/checkpoint.json", "checkpoint");
  const RecommenderModel model = LoadCheckpoint(dir);
  const auto dev = LoadBehaviors(cfg, cfg.dev_behaviors, "dev_behaviors", log);
  const NewsFeatures features = LoadFeatures(cfg, log);
  if (static_cast<std::size_t>(model.projection.weight.rows()) != features.out_dim() ||
      static_cast<std::size_t>(model.projection.weight.cols()) != features.llm_dim()) {
    throw DataError("checkpoint shape does not match the configured embeddings");
  }
  const int max_history = cfg.train.max_history;
  const bool strict = cfg.strict;
  const MetricsReport report = Evaluate(
      dev,
      [&](const Impression& imp) {
        std::vector<double> scores;
        for (const auto& s : Predict(imp, model, features, max_history, strict)) {
          scores.push_back(s.score);
        }
        return scores;
      },
      cfg.threads);
  WriteFile(cfg.WorkPath("reports/eval.json"), MetricsToJson(report));
  WriteFile(cfg.WorkPath("reports/eval.txt"), MetricsToTable(report, "NRMS+LECOP"));
  return report;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"News recommendation from LLM embeddings and co-occurrence graphs"};
  app.name(args.empty() ? "lecop" : fs::path(args[0]).filename().string());
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  std::uint64_t seed = 0;
  bool strict = false;
  std::vector<std::string> overrides;
  std::string checkpoint;

  app.add_option("--config", config_path, "Pipeline config file (key = value)")->required();
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (1 = reproducible)");
  auto* seed_opt = app.add_option("--seed", seed, "Global seed");
  app.add_flag("--strict", strict, "Fail on any bad row or unresolvable id");
  app.add_option("--set", overrides, "Override a config key: key=value");

  auto* stats = app.add_subcommand("stats", "Dataset statistics and train/dev overlap reports");
  auto* prompts = app.add_subcommand("prompts", "Write contrastive triples and LLM prompts");
  auto* fetch = app.add_subcommand("fetch-embeddings", "Fetch LLM embeddings over HTTP");
  auto* graphs = app.add_subcommand("graphs", "Build the three co-occurrence graphs");
  auto* embed = app.add_subcommand("embed-graphs", "Train node2vec embeddings per graph");
  auto* train = app.add_subcommand("train", "Fuse news vectors and train the user model");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on the dev split");
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint directory");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const auto fail = [&err](const char* kind, const std::string& msg, int code) {
    err << "lecop: error[" << kind << "]: " << OneLine(msg) << "\n";
    return code;
  };
  try {
    PipelineConfig cfg = LoadConfig(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      cfg.Set(std::string(Trim(std::string_view(kv).substr(0, eq))),
              std::string(Trim(std::string_view(kv).substr(eq + 1))));
    }
    if (threads_opt->count()) cfg.threads = threads;
    if (seed_opt->count()) cfg.seed = seed;
    if (strict) cfg.strict = true;
    cfg.Validate();

    if (stats->parsed()) CmdStats(cfg, err);
    if (prompts->parsed()) CmdPrompts(cfg, err);
    if (fetch->parsed()) CmdFetchEmbeddings(cfg, err);
    if (graphs->parsed()) CmdGraphs(cfg, err);
    if (embed->parsed()) CmdEmbedGraphs(cfg, err);
    if (train->parsed()) CmdTrain(cfg, err);
    if (evaluate->parsed()) {
      out << MetricsToTable(CmdEvaluate(cfg, checkpoint, err), "NRMS+LECOP");
    }
  } catch (const UsageError& e) {
    return fail("usage", e.what(), 1);
  } catch (const DataError& e) {
    return fail("data", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), 3);
  }
  return 0;
}

}  // namespace lecop
