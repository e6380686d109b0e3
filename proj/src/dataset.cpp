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

#include "lecop/dataset.hpp"

#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "lecop/common.hpp"

namespace lecop {
namespace {

// Iterates over lines, stripping a trailing '\r'. Line numbers are 1-based.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    fn(line, line_no);
    start = end + 1;
  }
}

std::vector<std::string> SplitTokens(std::string_view field) {
  std::vector<std::string> out;
  for (std::string_view tok : SplitView(field, ' ')) {
    if (!tok.empty()) out.emplace_back(tok);
  }
  return out;
}

template <typename T, typename RowFn>
ParseResult<T> ParseRows(std::string_view text, const ParseOptions& options,
                         const char* what, RowFn&& parse_row) {
  ParseResult<T> result;
  ForEachLine(text, [&](std::string_view line, std::size_t line_no) {
    if (Trim(line).empty()) return;
    try {
      result.records.push_back(parse_row(line));
    } catch (const DataError& e) {
      if (!options.skip_bad_rows) {
        throw DataError(std::string(what) + " line " + std::to_string(line_no) +
                        ": " + e.what());
      }
      ++result.skipped_rows;
    }
  });
  return result;
}

void FinishCell(OverlapCell& cell) {
  if (cell.total == 0) {
    cell.fraction_seen = 1.0;
    cell.fraction_unseen = 0.0;
    return;
  }
  cell.fraction_seen =
      static_cast<double>(cell.seen) / static_cast<double>(cell.total);
  cell.fraction_unseen = 1.0 - cell.fraction_seen;
}

template <typename Fn>
void ForEachStreamId(const std::vector<Impression>& impressions, Fn&& fn) {
  for (const auto& imp : impressions) {
    for (const auto& id : imp.history) fn(id);
    for (const auto& c : imp.candidates) fn(c.news_id);
  }
}

nlohmann::ordered_json CellJson(const OverlapCell& c) {
  return {{"total", c.total},
          {"seen", c.seen},
          {"fraction_seen", c.fraction_seen},
          {"fraction_unseen", c.fraction_unseen}};
}

}  // namespace

ParseResult<NewsItem> ParseNewsText(std::string_view text,
                                    const ParseOptions& options) {
  std::unordered_set<std::string> ids;
  auto result = ParseRows<NewsItem>(
      text, options, "news", [&](std::string_view line) {
        const auto fields = SplitView(line, '\t');
        if (fields.size() < 4) {
          throw DataError("malformed row: expected at least 4 tab-separated "
                          "fields, got " +
                          std::to_string(fields.size()));
        }
        NewsItem item;
        item.news_id = std::string(fields[0]);
        item.category = std::string(fields[1]);
        item.subcategory = std::string(fields[2]);
        item.title = std::string(fields[3]);
        if (fields.size() > 4) item.abstract = std::string(fields[4]);
        if (item.news_id.empty()) throw DataError("malformed row: empty news id");
        if (item.title.empty()) {
          throw DataError("malformed row: empty title for " + item.news_id);
        }
        return item;
      });
  // Duplicates are a catalog-level error and are never skipped.
  for (const auto& item : result.records) {
    if (!ids.insert(item.news_id).second) {
      throw DataError("duplicate news id: " + item.news_id);
    }
  }
  return result;
}

ParseResult<NewsItem> ParseNews(const std::string& path,
                                const ParseOptions& options) {
  try {
    return ParseNewsText(ReadFile(path), options);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

ParseResult<Impression> ParseBehaviorsText(std::string_view text,
                                           const ParseOptions& options) {
  return ParseRows<Impression>(
      text, options, "behaviors", [](std::string_view line) {
        const auto fields = SplitView(line, '\t');
        if (fields.size() < 5) {
          throw DataError("malformed row: expected 5 tab-separated fields, got " +
                          std::to_string(fields.size()));
        }
        Impression imp;
        imp.impression_id = std::string(fields[0]);
        imp.user_id = std::string(fields[1]);
        imp.timestamp = std::string(fields[2]);
        imp.history = SplitTokens(fields[3]);
        for (const auto& tok : SplitTokens(fields[4])) {
          const std::size_t dash = tok.rfind('-');
          if (dash == std::string::npos || dash == 0 ||
              dash + 2 != tok.size() ||
              (tok[dash + 1] != '0' && tok[dash + 1] != '1')) {
            throw DataError("malformed candidate token '" + tok +
                            "': expected <news_id>-0 or <news_id>-1");
          }
          imp.candidates.push_back(
              {tok.substr(0, dash), tok[dash + 1] == '1' ? 1 : 0});
        }
        if (imp.candidates.empty()) {
          throw DataError("malformed row: no candidates in impression " +
                          imp.impression_id);
        }
        return imp;
      });
}

ParseResult<Impression> ParseBehaviors(const std::string& path,
                                       const ParseOptions& options) {
  try {
    return ParseBehaviorsText(ReadFile(path), options);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string SerializeNews(const std::vector<NewsItem>& news) {
  std::string out;
  for (const auto& n : news) {
    out += n.news_id + '\t' + n.category + '\t' + n.subcategory + '\t' +
           n.title + '\t' + n.abstract + '\n';
  }
  return out;
}

std::string SerializeBehaviors(const std::vector<Impression>& impressions) {
  std::string out;
  for (const auto& imp : impressions) {
    out += imp.impression_id + '\t' + imp.user_id + '\t' + imp.timestamp + '\t';
    for (std::size_t i = 0; i < imp.history.size(); ++i) {
      if (i) out += ' ';
      out += imp.history[i];
    }
    out += '\t';
    for (std::size_t i = 0; i < imp.candidates.size(); ++i) {
      if (i) out += ' ';
      out += imp.candidates[i].news_id + '-' +
             std::to_string(imp.candidates[i].label);
    }
    out += '\n';
  }
  return out;
}

std::vector<NewsItem> MergeCatalogs(
    const std::vector<std::vector<NewsItem>>& catalogs) {
  std::vector<NewsItem> out;
  std::unordered_set<std::string> seen;
  for (const auto& catalog : catalogs) {
    for (const auto& item : catalog) {
      if (seen.insert(item.news_id).second) out.push_back(item);
    }
  }
  return out;
}

DatasetStats ComputeStats(const std::vector<NewsItem>& news,
                          const std::vector<Impression>& impressions) {
  DatasetStats stats;
  std::unordered_set<std::string> users;
  std::unordered_set<std::string> ids;
  for (const auto& n : news) ids.insert(n.news_id);
  for (const auto& imp : impressions) {
    users.insert(imp.user_id);
    for (const auto& c : imp.candidates) stats.click_count += c.label;
  }
  stats.user_count = users.size();
  stats.news_count = ids.size();
  return stats;
}

OverlapReport ComputeOverlap(const std::vector<Impression>& train,
                             const std::vector<Impression>& test,
                             const KeywordMap& keywords) {
  // Keyword tokens per news id, normalized once.
  std::unordered_map<std::string, std::vector<std::string>> tokens;
  for (const auto& [id, kws] : keywords) {
    auto& dst = tokens[id];
    for (const auto& kw : kws) dst.push_back(KeywordToken(kw));
  }

  std::unordered_set<std::string> train_ids;
  std::unordered_set<std::string> train_kws;
  ForEachStreamId(train, [&](const std::string& id) {
    if (!train_ids.insert(id).second) return;
    if (auto it = tokens.find(id); it != tokens.end()) {
      train_kws.insert(it->second.begin(), it->second.end());
    }
  });

  OverlapReport report;
  std::unordered_set<std::string> test_ids;
  std::unordered_set<std::string> test_kws;
  std::unordered_set<std::string> uncovered;
  ForEachStreamId(test, [&](const std::string& id) {
    const bool id_seen = train_ids.count(id) > 0;
    ++report.news_id_all.total;
    report.news_id_all.seen += id_seen;
    if (test_ids.insert(id).second) {
      ++report.news_id_dedup.total;
      report.news_id_dedup.seen += id_seen;
    }
    const auto it = tokens.find(id);
    if (it == tokens.end()) {
      ++report.uncovered_occurrences;
      uncovered.insert(id);
      return;
    }
    for (const auto& kw : it->second) {
      const bool kw_seen = train_kws.count(kw) > 0;
      ++report.keyword_all.total;
      report.keyword_all.seen += kw_seen;
      if (test_kws.insert(kw).second) {
        ++report.keyword_dedup.total;
        report.keyword_dedup.seen += kw_seen;
      }
    }
  });
  report.uncovered_distinct = uncovered.size();
  FinishCell(report.news_id_dedup);
  FinishCell(report.news_id_all);
  FinishCell(report.keyword_dedup);
  FinishCell(report.keyword_all);
  return report;
}

std::string StatsToText(const DatasetStats& stats) {
  std::ostringstream out;
  out << "# click_count = positive candidate labels across behavior rows "
         "(histories excluded)\n";
  out << "user_count\t" << stats.user_count << '\n';
  out << "news_count\t" << stats.news_count << '\n';
  out << "click_count\t" << stats.click_count << '\n';
  return out.str();
}

std::string StatsToJson(const DatasetStats& stats) {
  nlohmann::ordered_json j = {
      {"click_rule", "positive candidate labels; histories excluded"},
      {"user_count", stats.user_count},
      {"news_count", stats.news_count},
      {"click_count", stats.click_count}};
  return j.dump(2) + "\n";
}

std::string OverlapToText(const OverlapReport& r) {
  std::ostringstream out;
  out << "# occurrence stream = history ids + candidate ids per impression; "
         "keywords compared trimmed and case-insensitive\n";
  const auto cell = [&out](const char* name, const OverlapCell& c) {
    out << name << ".total\t" << c.total << '\n';
    out << name << ".seen\t" << c.seen << '\n';
    out << name << ".fraction_seen\t" << FormatDouble(c.fraction_seen) << '\n';
    out << name << ".fraction_unseen\t" << FormatDouble(c.fraction_unseen)
        << '\n';
  };
  cell("news_id.dedup", r.news_id_dedup);
  cell("news_id.all", r.news_id_all);
  cell("keyword.dedup", r.keyword_dedup);
  cell("keyword.all", r.keyword_all);
  out << "keyword.uncovered_occurrences\t" << r.uncovered_occurrences << '\n';
  out << "keyword.uncovered_distinct\t" << r.uncovered_distinct << '\n';
  return out.str();
}

std::string OverlapToJson(const OverlapReport& r) {
  nlohmann::ordered_json j = {
      {"occurrence_stream", "history ids + candidate ids per impression"},
      {"keyword_tokenization", "trimmed, case-insensitive"},
      {"news_id", {{"dedup", CellJson(r.news_id_dedup)},
                   {"all", CellJson(r.news_id_all)}}},
      {"keyword", {{"dedup", CellJson(r.keyword_dedup)},
                   {"all", CellJson(r.keyword_all)},
                   {"uncovered_occurrences", r.uncovered_occurrences},
                   {"uncovered_distinct", r.uncovered_distinct}}}};
  return j.dump(2) + "\n";
}

}  // namespace lecop
