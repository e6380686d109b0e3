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

#include "lecop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "lecop/common.hpp"
#include "lecop/dataset.hpp"

namespace lecop {
namespace {

void CheckSizes(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw DataError("metric: " + std::to_string(scores.size()) + " scores vs " +
                    std::to_string(labels.size()) + " labels");
  }
}

// Candidate indices by descending score, ties by index.
std::vector<std::size_t> RankOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

std::size_t CountPositives(std::span<const int> labels) {
  return static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(),
                                                [](int l) { return l > 0; }));
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const int> labels) {
  CheckSizes(scores, labels);
  const std::size_t pos = CountPositives(labels);
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) throw DataError("auc needs both positive and negative labels");

  // Rank-sum with midranks for ties (Mann-Whitney U).
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j - 1) + 1.0;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] > 0) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double p = static_cast<double>(pos);
  const double u = pos_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

double Mrr(std::span<const double> scores, std::span<const int> labels) {
  CheckSizes(scores, labels);
  const std::size_t pos = CountPositives(labels);
  if (pos == 0) throw DataError("mrr needs at least one positive label");
  const auto order = RankOrder(scores);
  double sum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (labels[order[r]] > 0) sum += 1.0 / static_cast<double>(r + 1);
  }
  return sum / static_cast<double>(pos);
}

double NdcgAt(std::span<const double> scores, std::span<const int> labels,
              std::size_t k) {
  CheckSizes(scores, labels);
  if (k == 0) throw DataError("ndcg cutoff must be >= 1");
  const std::size_t pos = CountPositives(labels);
  if (pos == 0) throw DataError("ndcg needs at least one positive label");
  const auto order = RankOrder(scores);
  double dcg = 0.0;
  for (std::size_t r = 0; r < order.size() && r < k; ++r) {
    if (labels[order[r]] > 0) dcg += 1.0 / std::log2(static_cast<double>(r + 2));
  }
  double ideal = 0.0;
  for (std::size_t r = 0; r < pos && r < k; ++r) {
    ideal += 1.0 / std::log2(static_cast<double>(r + 2));
  }
  return dcg / ideal;
}

MetricsReport Evaluate(const std::vector<Impression>& impressions,
                       const ImpressionScorer& scorer, int threads) {
  struct Row {
    bool evaluable = false;
    double auc = 0, mrr = 0, ndcg5 = 0, ndcg10 = 0;
  };
  std::vector<Row> rows(impressions.size());
  ParallelFor(impressions.size(), threads, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& imp = impressions[i];
      std::vector<int> labels;
      labels.reserve(imp.candidates.size());
      for (const auto& c : imp.candidates) labels.push_back(c.label);
      const std::size_t pos = CountPositives(labels);
      if (pos == 0 || pos == labels.size()) continue;
      const std::vector<double> scores = scorer(imp);
      rows[i] = {true, Auc(scores, labels), Mrr(scores, labels),
                 NdcgAt(scores, labels, 5), NdcgAt(scores, labels, 10)};
    }
  });
  MetricsReport report;
  for (const auto& r : rows) {
    if (!r.evaluable) {
      ++report.impressions_skipped;
      continue;
    }
    ++report.impressions_evaluated;
    report.auc += r.auc;
    report.mrr += r.mrr;
    report.ndcg5 += r.ndcg5;
    report.ndcg10 += r.ndcg10;
  }
  if (report.impressions_evaluated == 0) {
    throw DataError("no evaluable impressions (each needs a positive and a negative)");
  }
  const double n = static_cast<double>(report.impressions_evaluated);
  report.auc /= n;
  report.mrr /= n;
  report.ndcg5 /= n;
  report.ndcg10 /= n;
  return report;
}

std::string MetricsToJson(const MetricsReport& r) {
  nlohmann::ordered_json j = {{"auc", r.auc},
                              {"mrr", r.mrr},
                              {"ndcg@5", r.ndcg5},
                              {"ndcg@10", r.ndcg10},
                              {"impressions_evaluated", r.impressions_evaluated},
                              {"impressions_skipped", r.impressions_skipped}};
  return j.dump(2) + "\n";
}

std::string MetricsToTable(const MetricsReport& r, const std::string& label) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %8s %8s\n", "Methods", "AUC", "MRR",
                "nDCG@5", "nDCG@10");
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-16s %8.4f %8.4f %8.4f %8.4f\n", label.c_str(),
                r.auc, r.mrr, r.ndcg5, r.ndcg10);
  out += buf;
  std::snprintf(buf, sizeof(buf), "# evaluated %zu impressions, skipped %zu\n",
                r.impressions_evaluated, r.impressions_skipped);
  out += buf;
  return out;
}

}  // namespace lecop
