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

#include "lecop/keywords.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "lecop/common.hpp"
#include "lecop/dataset.hpp"

namespace lecop {
namespace {

std::string StripQuotes(std::string_view s) {
  s = Trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    s = Trim(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

}  // namespace

std::vector<std::string> SplitBracketKeywords(std::string_view raw) {
  raw = Trim(raw);
  if (!raw.empty() && raw.front() == '[') raw.remove_prefix(1);
  if (!raw.empty() && raw.back() == ']') raw.remove_suffix(1);
  std::vector<std::string> out;
  for (std::string_view part : SplitView(raw, ',')) {
    std::string kw = StripQuotes(part);
    if (!kw.empty()) out.push_back(std::move(kw));
  }
  return out;
}

KeywordLoadResult ParseKeywordsText(std::string_view text,
                                    const KeywordLoadOptions& options) {
  KeywordLoadResult result;
  std::size_t line_no = 0;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::string where = "keywords line " + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + "unparseable JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("news_id") || !j["news_id"].is_string() ||
        !j.contains("keywords")) {
      throw DataError(where + "expected {\"news_id\": str, \"keywords\": ...}");
    }
    const std::string id = j["news_id"].get<std::string>();
    std::vector<std::string> kws;
    const auto& raw = j["keywords"];
    if (raw.is_string()) {
      kws = SplitBracketKeywords(raw.get<std::string>());
    } else if (raw.is_array()) {
      for (const auto& k : raw) {
        if (!k.is_string()) throw DataError(where + "non-string keyword");
        std::string kw(Trim(k.get<std::string>()));
        if (!kw.empty()) kws.push_back(std::move(kw));
      }
    } else {
      throw DataError(where + "keywords must be a list or a bracketed string");
    }
    if (kws.empty()) throw DataError(where + "empty keyword list for " + id);
    if (kws.size() > kMaxKeywords) {
      if (options.strict) {
        throw DataError(where + std::to_string(kws.size()) +
                        " keywords for " + id + " (at most 3 allowed)");
      }
      kws.resize(kMaxKeywords);
      ++result.truncated_entries;
    }
    if (!result.keywords.emplace(id, std::move(kws)).second) {
      throw DataError(where + "duplicate news id " + id);
    }
  }
  return result;
}

KeywordLoadResult LoadKeywords(const std::string& path,
                               const KeywordLoadOptions& options) {
  try {
    return ParseKeywordsText(ReadFile(path), options);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string SerializeKeywords(const KeywordMap& keywords) {
  std::string out;
  for (const auto& [id, kws] : keywords) {
    nlohmann::ordered_json j = {{"news_id", id}, {"keywords", kws}};
    out += j.dump() + '\n';
  }
  return out;
}

KeywordValidationReport ValidateKeywords(const KeywordMap& keywords,
                                         const std::vector<NewsItem>& catalog) {
  std::unordered_map<std::string, const NewsItem*> by_id;
  for (const auto& item : catalog) by_id.emplace(item.news_id, &item);

  KeywordValidationReport report;
  std::set<std::string> violating;
  for (const auto& [id, kws] : keywords) {
    ++report.total;
    report.total_keywords += kws.size();
    bool bad = false;
    if (kws.empty() || kws.size() > kMaxKeywords) {
      ++report.violations_count_range;
      bad = true;
    }
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      report.uncovered_ids.push_back(id);
    } else {
      const std::string text =
          ToLowerAscii(it->second->title + " " + it->second->abstract);
      for (const auto& kw : kws) {
        const std::string token = KeywordToken(kw);
        if (token.empty() || text.find(token) == std::string::npos) {
          ++report.violations_absent_from_text;
          bad = true;
        }
      }
    }
    if (bad) violating.insert(id);
  }
  report.violating_ids.assign(violating.begin(), violating.end());
  return report;
}

std::string ValidationToJson(const KeywordValidationReport& r) {
  nlohmann::ordered_json j = {
      {"total", r.total},
      {"total_keywords", r.total_keywords},
      {"violations_absent_from_text", r.violations_absent_from_text},
      {"violations_count_range", r.violations_count_range},
      {"violating_ids", r.violating_ids},
      {"uncovered_ids", r.uncovered_ids}};
  return j.dump(2) + "\n";
}

}  // namespace lecop
