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

#ifndef LECOP_METRICS_HPP_
#define LECOP_METRICS_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lecop {

struct Impression;

// Fraction of (positive, negative) pairs ranked correctly; ties count 0.5.
// Requires at least one positive and one negative.
double Auc(std::span<const double> scores, std::span<const int> labels);

// Mean reciprocal rank over positives. Ranks are by descending score with
// score ties broken by original index.
double Mrr(std::span<const double> scores, std::span<const int> labels);

// Binary-gain nDCG at cutoff k, same ranking as Mrr.
double NdcgAt(std::span<const double> scores, std::span<const int> labels,
              std::size_t k);

struct MetricsReport {
  double auc = 0.0;
  double mrr = 0.0;
  double ndcg5 = 0.0;
  double ndcg10 = 0.0;
  std::size_t impressions_evaluated = 0;
  std::size_t impressions_skipped = 0;  // no positive or no negative
};

// Returns one score per candidate of the impression, in candidate order.
using ImpressionScorer = std::function<std::vector<double>(const Impression&)>;

// Per-impression metrics averaged with equal weight. Throws if nothing is
// evaluable. `scorer` may be called concurrently when threads > 1.
MetricsReport Evaluate(const std::vector<Impression>& impressions,
                       const ImpressionScorer& scorer, int threads = 1);

std::string MetricsToJson(const MetricsReport& report);
// Aligned table with columns AUC, MRR, nDCG@5, nDCG@10.
std::string MetricsToTable(const MetricsReport& report, const std::string& label);

}  // namespace lecop

#endif  // LECOP_METRICS_HPP_
