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

#include <algorithm>
#include <random>
#include <set>

#include "lecop/common.hpp"
#include "lecop/dataset.hpp"
#include "support/oracles.hpp"

namespace lecop {
namespace {

constexpr char kNews[] =
    "N1\tsports\tfootball_nfl\tShould NFL be able to fine players for criticizing "
    "officiating?\tSeveral fines came down against NFL players for criticizing "
    "officiating this week.\thttps://example.com\t[]\t[]\n"
    "N2\tfoodanddrink\trecipes\t5 Classic Appetizers That Make Holiday Hosting a "
    "Breeze\tThese appetizers are simple.\n"
    "N3\tnews\tnewsworld\tWorld briefing\n";

TEST(ParseNews, ReadsFieldsAndIgnoresExtraColumns) {
  const auto r = ParseNewsText(kNews);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.records[0].news_id, "N1");
  EXPECT_EQ(r.records[0].category, "sports");
  EXPECT_EQ(r.records[0].subcategory, "football_nfl");
  EXPECT_EQ(r.records[0].abstract,
            "Several fines came down against NFL players for criticizing officiating "
            "this week.");
  EXPECT_EQ(r.records[1].news_id, "N2");
  EXPECT_EQ(r.records[1].title, "5 Classic Appetizers That Make Holiday Hosting a Breeze");
  EXPECT_EQ(r.records[2].abstract, "");
  EXPECT_EQ(r.skipped_rows, 0u);
}

TEST(ParseNews, EmptyInput) {
  EXPECT_TRUE(ParseNewsText("").records.empty());
}

TEST(ParseNews, ShortRowReportsLineNumber) {
  try {
    ParseNewsText("N1\ta\tb\tt\n\nN2\tonly\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(ParseNews, DuplicateIdIsAnError) {
  EXPECT_THROW(ParseNewsText("N1\ta\tb\tt\nN1\ta\tb\tu\n"), DataError);
  EXPECT_THROW(ParseNewsText("N1\ta\tb\tt\nN1\ta\tb\tu\n", {true}), DataError);
}

TEST(ParseNews, SkipBadRowsCounts) {
  const auto r = ParseNewsText("N1\ta\tb\tt\nbad\nN2\ta\tb\t\nN3\ta\tb\tt\n", {true});
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.skipped_rows, 2u);
}

TEST(ParseNews, MissingFileNamesPath) {
  try {
    ParseNews("/nonexistent/news.tsv");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/news.tsv"), std::string::npos);
  }
}

TEST(ParseBehaviors, MapsFields) {
  const auto r = ParseBehaviorsText("1\tU1\t11/11/2019 9:05:58 AM\tN2 N3 N5\tN7-1 N8-0\n");
  ASSERT_EQ(r.records.size(), 1u);
  const auto& imp = r.records[0];
  EXPECT_EQ(imp.user_id, "U1");
  EXPECT_EQ(imp.history, (std::vector<std::string>{"N2", "N3", "N5"}));
  ASSERT_EQ(imp.candidates.size(), 2u);
  EXPECT_EQ(imp.candidates[0], (Candidate{"N7", 1}));
  EXPECT_EQ(imp.candidates[1], (Candidate{"N8", 0}));
}

TEST(ParseBehaviors, EmptyHistory) {
  const auto r = ParseBehaviorsText("1\tU1\tt\t\tN7-1\n");
  EXPECT_TRUE(r.records.at(0).history.empty());
}

TEST(ParseBehaviors, IdsContainingDashes) {
  const auto r = ParseBehaviorsText("1\tU1\tt\t\tab-cd-1 x-y-0\n");
  EXPECT_EQ(r.records[0].candidates[0], (Candidate{"ab-cd", 1}));
  EXPECT_EQ(r.records[0].candidates[1], (Candidate{"x-y", 0}));
}

TEST(ParseBehaviors, BadCandidateTokens) {
  for (const char* bad : {"N7", "N7-2", "N7-", "-1", "N7-10"}) {
    try {
      ParseBehaviorsText(std::string("1\tU1\tt\t\tN1-0\n2\tU1\tt\t\t") + bad + "\n");
      FAIL() << bad;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(ParseBehaviorsText("1\tU1\tt\tN1\t\n"), DataError);
}

TEST(ParseBehaviors, TenRowFixtureCountsPositives) {
  std::string text;
  int expected = 0;
  for (int i = 0; i < 10; ++i) {
    std::string cands;
    for (int c = 0; c <= i % 4; ++c) {
      const int label = (i + c) % 3 == 0;
      expected += label;
      cands += (c ? " " : "") + std::string("N") + std::to_string(c) + "-" +
               std::to_string(label);
    }
    text += std::to_string(i) + "\tU" + std::to_string(i % 5) + "\tt\tN1\t" + cands + "\n";
  }
  const auto r = ParseBehaviorsText(text);
  ASSERT_EQ(r.records.size(), 10u);
  EXPECT_EQ(ComputeStats({}, r.records).click_count, static_cast<std::uint64_t>(expected));
  for (const auto& imp : r.records) {
    for (const auto& c : imp.candidates) EXPECT_TRUE(c.label == 0 || c.label == 1);
  }
}

std::vector<Impression> RandomImpressions(std::mt19937_64& rng, int n, int users, int news) {
  std::vector<Impression> out;
  std::uniform_int_distribution<int> u(1, users), item(1, news), len(0, 6), lab(0, 1);
  for (int i = 0; i < n; ++i) {
    Impression imp;
    imp.impression_id = std::to_string(i + 1);
    imp.user_id = "U" + std::to_string(u(rng));
    imp.timestamp = "t";
    for (int h = len(rng); h > 0; --h) imp.history.push_back("N" + std::to_string(item(rng)));
    for (int c = 1 + len(rng); c > 0; --c) {
      imp.candidates.push_back({"N" + std::to_string(item(rng)), lab(rng)});
    }
    out.push_back(imp);
  }
  return out;
}

TEST(Serialize, RoundTrip) {
  std::mt19937_64 rng(3);
  const auto imps = RandomImpressions(rng, 50, 10, 30);
  const auto again = ParseBehaviorsText(SerializeBehaviors(imps)).records;
  EXPECT_EQ(again, imps);
  const auto news = ParseNewsText(kNews).records;
  EXPECT_EQ(ParseNewsText(SerializeNews(news)).records, news);
}

TEST(ComputeStats, EmptyInputs) {
  EXPECT_EQ(ComputeStats({}, {}), (DatasetStats{0, 0, 0}));
}

TEST(ComputeStats, MatchesTally) {
  std::mt19937_64 rng(5);
  const auto imps = RandomImpressions(rng, 40, 5, 20);
  std::set<std::string> users;
  std::uint64_t clicks = 0;
  for (const auto& imp : imps) {
    users.insert(imp.user_id);
    for (const auto& c : imp.candidates) clicks += c.label;
  }
  std::vector<NewsItem> news(7);
  for (int i = 0; i < 7; ++i) news[i].news_id = "N" + std::to_string(i);
  const auto s = ComputeStats(news, imps);
  EXPECT_EQ(s.user_count, users.size());
  EXPECT_EQ(s.news_count, 7u);
  EXPECT_EQ(s.click_count, clicks);
}

TEST(MergeCatalogs, FirstOccurrenceWins) {
  NewsItem a{"N1", "c", "s", "first", ""};
  NewsItem b{"N1", "c", "s", "second", ""};
  NewsItem c{"N2", "c", "s", "t", ""};
  const auto merged = MergeCatalogs({{a}, {b, c}});
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0].title, "first");
}

Impression Imp(std::vector<std::string> history, std::vector<std::string> cands) {
  Impression imp;
  imp.user_id = "U";
  imp.history = std::move(history);
  for (auto& c : cands) imp.candidates.push_back({c, 0});
  return imp;
}

TEST(ComputeOverlap, IdenticalStreamsHaveNoUnseen) {
  std::mt19937_64 rng(9);
  const auto imps = RandomImpressions(rng, 30, 5, 20);
  KeywordMap kw;
  for (int i = 1; i <= 20; ++i) kw["N" + std::to_string(i)] = {"k" + std::to_string(i % 7)};
  const auto r = ComputeOverlap(imps, imps, kw);
  for (const auto* c : {&r.news_id_dedup, &r.news_id_all, &r.keyword_dedup, &r.keyword_all}) {
    EXPECT_EQ(c->fraction_unseen, 0.0);
    EXPECT_EQ(c->fraction_seen, 1.0);
  }
}

TEST(ComputeOverlap, SixNewsSplitMatchesSetArithmetic) {
  // Train sees N1..N4; test uses N3..N6, so N5 and N6 are unseen ids.
  const std::vector<Impression> train = {Imp({"N1", "N2"}, {"N3"}), Imp({}, {"N4", "N1"})};
  const std::vector<Impression> test = {Imp({"N3", "N5"}, {"N6", "N3"}), Imp({"N4"}, {"N5"})};
  const KeywordMap kw = {{"N1", {"Alpha"}}, {"N2", {"beta"}}, {"N3", {"gamma"}},
                         {"N4", {" ALPHA "}}, {"N5", {"alpha", "delta"}}};
  const auto r = ComputeOverlap(train, test, kw);
  // Test stream: N3 N5 N6 N3 N4 N5.
  EXPECT_EQ(r.news_id_all.total, 6u);
  EXPECT_EQ(r.news_id_all.seen, 3u);
  EXPECT_EQ(r.news_id_dedup.total, 4u);
  EXPECT_EQ(r.news_id_dedup.seen, 2u);
  EXPECT_DOUBLE_EQ(r.news_id_dedup.fraction_unseen, 0.5);
  // Keyword stream: gamma alpha delta gamma alpha alpha delta; N6 uncovered.
  EXPECT_EQ(r.keyword_all.total, 7u);
  EXPECT_EQ(r.keyword_all.seen, 5u);
  EXPECT_EQ(r.keyword_dedup.total, 3u);
  EXPECT_EQ(r.keyword_dedup.seen, 2u);
  EXPECT_EQ(r.uncovered_occurrences, 1u);
  EXPECT_EQ(r.uncovered_distinct, 1u);
}

TEST(ComputeOverlap, CellsSumToOneAndIgnoreOrder) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto train = RandomImpressions(rng, 20, 5, 30);
    auto test = RandomImpressions(rng, 20, 5, 30);
    KeywordMap kw;
    for (int i = 1; i <= 30; i += 2) kw["N" + std::to_string(i)] = {"k" + std::to_string(i % 9)};
    const auto a = ComputeOverlap(train, test, kw);
    std::shuffle(train.begin(), train.end(), rng);
    std::shuffle(test.begin(), test.end(), rng);
    const auto b = ComputeOverlap(train, test, kw);
    const OverlapCell* ca[] = {&a.news_id_dedup, &a.news_id_all, &a.keyword_dedup, &a.keyword_all};
    const OverlapCell* cb[] = {&b.news_id_dedup, &b.news_id_all, &b.keyword_dedup, &b.keyword_all};
    for (int c = 0; c < 4; ++c) {
      EXPECT_NEAR(ca[c]->fraction_seen + ca[c]->fraction_unseen, 1.0, 1e-12);
      EXPECT_EQ(ca[c]->seen, cb[c]->seen);
      EXPECT_EQ(ca[c]->total, cb[c]->total);
    }
  }
}

TEST(Reports, TextAndJsonMentionCountingRule) {
  const auto text = StatsToText({1, 2, 3});
  EXPECT_NE(text.find("click_count\t3"), std::string::npos);
  EXPECT_NE(StatsToJson({1, 2, 3}).find("\"click_count\": 3"), std::string::npos);
  const auto ov = OverlapToText(ComputeOverlap({}, {}, {}));
  EXPECT_NE(ov.find("news_id.dedup.fraction_unseen\t0"), std::string::npos) << ov;
}

}  // namespace
}  // namespace lecop
