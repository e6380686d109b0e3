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

#ifndef LECOP_SYNTHETIC_HPP_
#define LECOP_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lecop/dataset.hpp"
#include "lecop/embeddings.hpp"
#include "lecop/keywords.hpp"

namespace lecop {

// Planted-preference corpus: every user prefers one latent topic, every news
// item belongs to one topic and carries keywords from that topic's
// vocabulary. The last `cold_news` items never appear in training data.
struct SyntheticOptions {
  int users = 200;
  int news = 500;
  int cold_news = 100;
  int topics = 2;
  int keywords_per_topic = 20;
  int keywords_per_item = 3;
  int history_length = 20;
  int train_impressions_per_user = 5;
  int positives = 2;
  int negatives = 6;
  double history_noise = 0.1;  // off-topic share of clicks in histories
  double click_noise = 0.05;   // chance a candidate's topic is flipped
  int llm_dim = 32;
  double llm_signal = 0.3;  // topic component of the LLM vectors
  double llm_noise = 1.0;   // per-component Gaussian noise
  std::uint64_t seed = 7;
};

struct SyntheticCorpus {
  std::vector<NewsItem> train_news;  // warm items
  std::vector<NewsItem> dev_news;    // warm and cold items
  std::vector<Impression> train_behaviors;
  std::vector<Impression> dev_behaviors;  // warm then cold impressions
  std::vector<Impression> dev_cold_behaviors;
  KeywordMap keywords;
  EmbeddingTable llm;
  std::unordered_map<std::string, int> topic;
  std::unordered_set<std::string> cold_ids;
};

SyntheticCorpus GenerateSynthetic(const SyntheticOptions& options);

// Writes train/news.tsv, train/behaviors.tsv, dev/news.tsv,
// dev/behaviors.tsv, dev/behaviors_cold.tsv, keywords.jsonl, llm.lec1 and a
// matching lecop.conf under `dir`.
void WriteSynthetic(const SyntheticCorpus& corpus, const SyntheticOptions& options,
                    const std::string& dir);

}  // namespace lecop

#endif  // LECOP_SYNTHETIC_HPP_
