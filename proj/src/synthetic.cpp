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

#include "lecop/synthetic.hpp"

#include <algorithm>
#include <filesystem>
#include <random>

#include "lecop/common.hpp"

namespace lecop {
namespace {

std::string KeywordName(int topic, int k) {
  std::string s = "t" + std::to_string(topic) + "kw";
  if (k < 10) s += "0";
  return s + std::to_string(k);
}

// Draws an item id of the given topic from `pool`, avoiding `taken`.
std::size_t Draw(const std::vector<std::size_t>& pool, std::mt19937_64& rng,
                 const std::unordered_set<std::size_t>& taken) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int tries = 0; tries < 1000; ++tries) {
    const std::size_t idx = pool[pick(rng)];
    if (!taken.count(idx)) return idx;
  }
  throw UsageError("synthetic corpus: item pool too small");
}

}  // namespace

SyntheticCorpus GenerateSynthetic(const SyntheticOptions& o) {
  if (o.topics < 2 || o.users < 1 || o.cold_news < 0 || o.news - o.cold_news < o.topics ||
      o.keywords_per_item > o.keywords_per_topic || o.llm_dim < o.topics) {
    throw UsageError("synthetic corpus: inconsistent options");
  }
  SyntheticCorpus c;
  c.llm = EmbeddingTable(static_cast<std::size_t>(o.llm_dim));
  const int warm = o.news - o.cold_news;

  std::mt19937_64 rng(DeriveSeed(o.seed, "synthetic/news"));
  std::normal_distribution<double> noise(0.0, o.llm_noise);
  // pools[cold][topic] -> item indices
  std::vector<std::vector<std::size_t>> pools[2];
  pools[0].resize(o.topics);
  pools[1].resize(o.topics);
  std::vector<std::string> ids(o.news);
  for (int i = 0; i < o.news; ++i) {
    const int t = i % o.topics;
    const bool cold = i >= warm;
    ids[i] = "N" + std::to_string(i + 1);
    pools[cold][t].push_back(static_cast<std::size_t>(i));

    std::vector<int> ks(o.keywords_per_topic);
    for (int k = 0; k < o.keywords_per_topic; ++k) ks[k] = k;
    std::shuffle(ks.begin(), ks.end(), rng);
    std::vector<std::string> kws;
    for (int k = 0; k < o.keywords_per_item; ++k) kws.push_back(KeywordName(t, ks[k]));

    NewsItem item;
    item.news_id = ids[i];
    item.category = "news";
    item.subcategory = "topic" + std::to_string(t);
    item.title = "Story " + std::to_string(i + 1) + " on " + kws[0];
    item.abstract = "Coverage of";
    for (const auto& kw : kws) item.abstract += " " + kw;
    item.abstract += ".";
    c.keywords[ids[i]] = kws;
    c.topic[ids[i]] = t;
    if (cold) {
      c.cold_ids.insert(ids[i]);
    } else {
      c.train_news.push_back(item);
    }
    c.dev_news.push_back(item);

    std::vector<double> vec(o.llm_dim);
    for (auto& v : vec) v = noise(rng);
    vec[t] += o.llm_signal;
    c.llm.Add(ids[i], std::span<const double>(vec));
  }

  std::bernoulli_distribution history_flip(o.history_noise);
  std::bernoulli_distribution click_flip(o.click_noise);
  std::uniform_int_distribution<int> other_topic(1, o.topics - 1);
  int impression_counter = 0;

  auto make_impression = [&](const std::string& user, int pref,
                             const std::vector<std::string>& history, bool cold,
                             std::mt19937_64& r) {
    Impression imp;
    imp.impression_id = std::to_string(++impression_counter);
    imp.user_id = user;
    imp.timestamp = "11/15/2019 8:00:00 AM";
    imp.history = history;
    std::unordered_set<std::size_t> taken;
    const auto add = [&](int label) {
      int t = pref;
      if (label == 0) t = (pref + other_topic(r)) % o.topics;
      if (click_flip(r)) t = (t == pref) ? (pref + other_topic(r)) % o.topics : pref;
      const std::size_t idx = Draw(pools[cold][t], r, taken);
      taken.insert(idx);
      imp.candidates.push_back({ids[idx], label});
    };
    for (int k = 0; k < o.positives; ++k) add(1);
    for (int k = 0; k < o.negatives; ++k) add(0);
    std::shuffle(imp.candidates.begin(), imp.candidates.end(), r);
    return imp;
  };

  for (int u = 0; u < o.users; ++u) {
    std::mt19937_64 r(DeriveSeed(o.seed, "synthetic/user/" + std::to_string(u)));
    const std::string user = "U" + std::to_string(u + 1);
    const int pref = u % o.topics;
    std::vector<std::string> history;
    std::unordered_set<std::size_t> taken;
    for (int h = 0; h < o.history_length; ++h) {
      const int t = history_flip(r) ? (pref + other_topic(r)) % o.topics : pref;
      const std::size_t idx = Draw(pools[0][t], r, taken);
      taken.insert(idx);
      history.push_back(ids[idx]);
    }
    for (int k = 0; k < o.train_impressions_per_user; ++k) {
      c.train_behaviors.push_back(make_impression(user, pref, history, false, r));
    }
    c.dev_behaviors.push_back(make_impression(user, pref, history, false, r));
    if (o.cold_news >= o.topics * (o.positives + o.negatives)) {
      c.dev_cold_behaviors.push_back(make_impression(user, pref, history, true, r));
    }
  }
  c.dev_behaviors.insert(c.dev_behaviors.end(), c.dev_cold_behaviors.begin(),
                         c.dev_cold_behaviors.end());
  return c;
}

void WriteSynthetic(const SyntheticCorpus& c, const SyntheticOptions& o,
                    const std::string& dir) {
  namespace fs = std::filesystem;
  const auto path = [&](const char* rel) { return (fs::path(dir) / rel).string(); };
  WriteFile(path("train/news.tsv"), SerializeNews(c.train_news));
  WriteFile(path("train/behaviors.tsv"), SerializeBehaviors(c.train_behaviors));
  WriteFile(path("dev/news.tsv"), SerializeNews(c.dev_news));
  WriteFile(path("dev/behaviors.tsv"), SerializeBehaviors(c.dev_behaviors));
  WriteFile(path("dev/behaviors_cold.tsv"), SerializeBehaviors(c.dev_cold_behaviors));
  WriteFile(path("keywords.jsonl"), SerializeKeywords(c.keywords));
  SaveEmbeddings(c.llm, path("llm.lec1"));
  std::string conf =
      "# Synthetic planted-preference corpus.\n"
      "train_news = train/news.tsv\n"
      "train_behaviors = train/behaviors.tsv\n"
      "dev_news = dev/news.tsv\n"
      "dev_behaviors = dev/behaviors.tsv\n"
      "keywords = keywords.jsonl\n"
      "llm_embeddings = llm.lec1\n"
      "work_dir = work\n"
      "window = 2\n"
      "node2vec.walk_length = 20\n"
      "node2vec.walks_per_node = 10\n"
      "sgns.epochs = 3\n"
      "fusion.dim_id = 20\n"
      "fusion.dim_item_item_kw = 20\n"
      "fusion.dim_intra_kw = 20\n"
      "model.heads = 3\n"
      "model.attention_dim = 32\n"
      "train.batch_size = 64\n"
      "train.learning_rate = 0.001\n"
      "train.epochs = 5\n"
      "seed = " + std::to_string(o.seed) + "\n";
  WriteFile(path("lecop.conf"), conf);
}

}  // namespace lecop
