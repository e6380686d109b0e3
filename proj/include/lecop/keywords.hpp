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

#ifndef LECOP_KEYWORDS_HPP_
#define LECOP_KEYWORDS_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lecop {

struct NewsItem;

// news_id -> 1..3 LLM-extracted keywords, in generation order.
using KeywordMap = std::map<std::string, std::vector<std::string>>;

inline constexpr std::size_t kMaxKeywords = 3;

struct KeywordLoadOptions {
  // Strict: more than three keywords is an error. Lenient: keep the first
  // three and count the entry as truncated.
  bool strict = false;
};

struct KeywordLoadResult {
  KeywordMap keywords;
  std::size_t truncated_entries = 0;
};

// Parses a "[kw1, kw2, kw3]" string into trimmed keywords.
std::vector<std::string> SplitBracketKeywords(std::string_view raw);

KeywordLoadResult ParseKeywordsText(std::string_view text,
                                    const KeywordLoadOptions& options = {});
KeywordLoadResult LoadKeywords(const std::string& path,
                               const KeywordLoadOptions& options = {});
std::string SerializeKeywords(const KeywordMap& keywords);

struct KeywordValidationReport {
  std::size_t total = 0;  // entries scanned
  std::size_t total_keywords = 0;
  std::size_t violations_absent_from_text = 0;
  std::size_t violations_count_range = 0;
  std::vector<std::string> violating_ids;  // sorted, unique
  std::vector<std::string> uncovered_ids;  // not in the catalog, sorted
};

// A keyword is valid when it occurs case-insensitively in
// title + " " + abstract. Part-of-speech is not checked.
KeywordValidationReport ValidateKeywords(const KeywordMap& keywords,
                                         const std::vector<NewsItem>& catalog);

std::string ValidationToJson(const KeywordValidationReport& report);

}  // namespace lecop

#endif  // LECOP_KEYWORDS_HPP_
