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

#include "lecop/common.hpp"
#include "lecop/dataset.hpp"
#include "lecop/keywords.hpp"
#include "support/oracles.hpp"

namespace lecop {
namespace {

TEST(ParseKeywords, ArrayForm) {
  const auto r = ParseKeywordsText(R"({"news_id": "N1", "keywords": ["NFL", " officiating "]})");
  ASSERT_EQ(r.keywords.at("N1").size(), 2u);
  EXPECT_EQ(r.keywords.at("N1")[1], "officiating");
}

TEST(ParseKeywords, BracketString) {
  const auto r =
      ParseKeywordsText(R"({"news_id": "N1", "keywords": "[keyword1, keyword2, keyword3]"})");
  EXPECT_EQ(r.keywords.at("N1"),
            (std::vector<std::string>{"keyword1", "keyword2", "keyword3"}));
  EXPECT_EQ(SplitBracketKeywords(" [ 'a b' , \"c\",, ] "),
            (std::vector<std::string>{"a b", "c"}));
}

TEST(ParseKeywords, TooManyStrictVersusLenient) {
  const char* line = R"({"news_id": "N1", "keywords": ["a", "b", "c", "d"]})";
  EXPECT_THROW(ParseKeywordsText(line, {true}), DataError);
  const auto r = ParseKeywordsText(line, {false});
  EXPECT_EQ(r.keywords.at("N1"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r.truncated_entries, 1u);
}

TEST(ParseKeywords, Errors) {
  EXPECT_THROW(ParseKeywordsText(R"({"news_id": "N1", "keywords": []})"), DataError);
  EXPECT_THROW(ParseKeywordsText(R"({"news_id": "N1", "keywords": "[ ]"})"), DataError);
  EXPECT_THROW(ParseKeywordsText("not json"), DataError);
  EXPECT_THROW(ParseKeywordsText(R"({"id": "N1"})"), DataError);
  EXPECT_THROW(ParseKeywordsText(R"({"news_id": "N1", "keywords": 3})"), DataError);
  EXPECT_THROW(ParseKeywordsText("{\"news_id\": \"N1\", \"keywords\": [\"a\"]}\n"
                                 "{\"news_id\": \"N1\", \"keywords\": [\"b\"]}"),
               DataError);
}

TEST(ParseKeywords, RoundTrip) {
  const KeywordMap m = {{"N1", {"a", "b"}}, {"N2", {"c d"}}, {"N3", {"x", "y", "z"}}};
  EXPECT_EQ(ParseKeywordsText(SerializeKeywords(m)).keywords, m);
}

NewsItem Item(std::string id, std::string title, std::string abstract) {
  return {std::move(id), "sports", "football_nfl", std::move(title), std::move(abstract)};
}

TEST(ValidateKeywords, PresenceInText) {
  const std::vector<NewsItem> catalog = {
      Item("N1", "Should NFL be able to fine players for criticizing officiating?",
           "Several fines came down."),
      Item("N2", "Holiday appetizers", "")};
  const KeywordMap ok = {{"N1", {"nfl", "Officiating"}},
                         {"N2", {"Holiday appetizers"}}};
  const auto r = ValidateKeywords(ok, catalog);
  EXPECT_EQ(r.total, 2u);
  EXPECT_EQ(r.violations_absent_from_text, 0u);
  EXPECT_TRUE(r.violating_ids.empty());
}

TEST(ValidateKeywords, PlantedViolationsAndOrderIndependence) {
  std::vector<NewsItem> catalog;
  KeywordMap m;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "N" + std::to_string(i);
    catalog.push_back(Item(id, "title about topic" + std::to_string(i), "body text"));
    m[id] = {"topic" + std::to_string(i), "body"};
  }
  m["N3"][1] = "zebra";
  m["N7"] = {"missing", "body", "title", "extra"};
  m["GHOST"] = {"x"};
  const auto r = ValidateKeywords(m, catalog);
  EXPECT_EQ(r.violations_absent_from_text, 3u);  // zebra, missing, extra
  EXPECT_EQ(r.violations_count_range, 1u);
  EXPECT_EQ(r.violating_ids, (std::vector<std::string>{"N3", "N7"}));
  EXPECT_EQ(r.uncovered_ids, (std::vector<std::string>{"GHOST"}));
  EXPECT_EQ(r.total, 11u);

  std::vector<NewsItem> reversed(catalog.rbegin(), catalog.rend());
  const auto r2 = ValidateKeywords(m, reversed);
  EXPECT_EQ(ValidationToJson(r), ValidationToJson(r2));
}

}  // namespace
}  // namespace lecop
