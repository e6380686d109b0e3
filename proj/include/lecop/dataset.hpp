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

#ifndef LECOP_DATASET_HPP_
#define LECOP_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lecop/keywords.hpp"

namespace lecop {

// One row of a MIND news file.
struct NewsItem {
  std::string news_id;
  std::string category;
  std::string subcategory;
  std::string title;
  std::string abstract;

  bool operator==(const NewsItem&) const = default;
};

struct Candidate {
  std::string news_id;
  int label = 0;  // 0 or 1

  bool operator==(const Candidate&) const = default;
};

// One row of a MIND behaviors file. History is ordered oldest to newest.
struct Impression {
  std::string impression_id;
  std::string user_id;
  std::string timestamp;
  std::vector<std::string> history;
  std::vector<Candidate> candidates;

  bool operator==(const Impression&) const = default;
};

struct ParseOptions {
  // When set, malformed rows are counted and skipped instead of failing.
  bool skip_bad_rows = false;
};

template <typename T>
struct ParseResult {
  std::vector<T> records;
  std::size_t skipped_rows = 0;
};

ParseResult<NewsItem> ParseNewsText(std::string_view text,
                                    const ParseOptions& options = {});
ParseResult<NewsItem> ParseNews(const std::string& path,
                                const ParseOptions& options = {});
ParseResult<Impression> ParseBehaviorsText(std::string_view text,
                                           const ParseOptions& options = {});
ParseResult<Impression> ParseBehaviors(const std::string& path,
                                       const ParseOptions& options = {});

std::string SerializeNews(const std::vector<NewsItem>& news);
std::string SerializeBehaviors(const std::vector<Impression>& impressions);

// Concatenates catalogs, keeping the first record for ids seen earlier.
std::vector<NewsItem> MergeCatalogs(
    const std::vector<std::vector<NewsItem>>& catalogs);

struct DatasetStats {
  std::uint64_t user_count = 0;
  std::uint64_t news_count = 0;
  // Positive candidate labels across all behavior rows. Histories are not
  // counted.
  std::uint64_t click_count = 0;

  bool operator==(const DatasetStats&) const = default;
};

DatasetStats ComputeStats(const std::vector<NewsItem>& news,
                          const std::vector<Impression>& impressions);

struct OverlapCell {
  std::uint64_t total = 0;
  std::uint64_t seen = 0;
  double fraction_seen = 1.0;
  double fraction_unseen = 0.0;
};

// Fraction of test-split tokens that also occur anywhere in the train split.
// The occurrence stream of an impression is its history ids followed by its
// candidate ids.
struct OverlapReport {
  OverlapCell news_id_dedup;
  OverlapCell news_id_all;
  OverlapCell keyword_dedup;
  OverlapCell keyword_all;
  // Test-stream occurrences (and distinct ids) with no keyword entry.
  std::uint64_t uncovered_occurrences = 0;
  std::uint64_t uncovered_distinct = 0;
};

OverlapReport ComputeOverlap(const std::vector<Impression>& train,
                             const std::vector<Impression>& test,
                             const KeywordMap& keywords);

std::string StatsToText(const DatasetStats& stats);
std::string StatsToJson(const DatasetStats& stats);
std::string OverlapToText(const OverlapReport& report);
std::string OverlapToJson(const OverlapReport& report);

}  // namespace lecop

#endif  // LECOP_DATASET_HPP_
