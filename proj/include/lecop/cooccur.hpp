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

#ifndef LECOP_COOCCUR_HPP_
#define LECOP_COOCCUR_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lecop/keywords.hpp"

namespace lecop {

struct Impression;

enum class PairKind { kIdId, kItemItemKeyword, kIntraItemKeyword };

std::string_view PairKindName(PairKind kind);
// "id:" for news-id nodes, "kw:" for keyword nodes.
std::string_view NodePrefix(PairKind kind);

struct PairHash {
  std::size_t operator()(const std::pair<std::string, std::string>& p) const;
};

// Multiset of unordered token pairs. Pairs are stored with the
// lexicographically smaller token first; self pairs are never stored.
class PairMultiset {
 public:
  using Key = std::pair<std::string, std::string>;

  explicit PairMultiset(PairKind kind) : kind_(kind) {}

  PairKind kind() const { return kind_; }
  void Add(std::string_view a, std::string_view b, std::uint64_t count = 1);
  void Merge(const PairMultiset& other);
  std::uint64_t Count(std::string_view a, std::string_view b) const;
  std::size_t size() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }
  std::uint64_t TotalCount() const;
  const std::unordered_map<Key, std::uint64_t, PairHash>& counts() const {
    return counts_;
  }
  // Entries sorted by (a, b).
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> Sorted() const;

  bool operator==(const PairMultiset& other) const {
    return kind_ == other.kind_ && counts_ == other.counts_;
  }

 private:
  PairKind kind_;
  std::unordered_map<Key, std::uint64_t, PairHash> counts_;
};

enum class IntraCountMode {
  kPerPosition,      // each history position contributes its item's pairs
  kPerDistinctItem,  // each distinct item contributes once per corpus
};

enum class HistoryMode {
  kLongestPerUser,  // one history per user: the longest one seen
  kPerImpression,   // every impression's history
};

struct CooccurrenceOptions {
  int window = 2;
  IntraCountMode intra_mode = IntraCountMode::kPerPosition;
};

struct PairSets {
  PairMultiset id_id{PairKind::kIdId};
  PairMultiset item_item_kw{PairKind::kItemItemKeyword};
  PairMultiset intra_kw{PairKind::kIntraItemKeyword};
  // History positions whose item has no keyword entry.
  std::uint64_t positions_without_keywords = 0;

  bool operator==(const PairSets& other) const {
    return id_id == other.id_id && item_item_kw == other.item_item_kw &&
           intra_kw == other.intra_kw;
  }
};

// Slides a window of `window` positions (stride 1) over the history. Each
// unordered pair of positions inside a window contributes one id pair and
// one keyword pair per cross-item keyword combination. Positions holding the
// same news id contribute nothing across. A history shorter than the window
// forms a single window. Every position also contributes the keyword pairs
// within its own item.
PairSets ExtractPairs(std::span<const std::string> history,
                      const CooccurrenceOptions& options,
                      const KeywordMap& keywords);

// Elementwise sum of ExtractPairs over the corpus. With kPerDistinctItem the
// intra-item pairs come from the set of distinct items instead.
PairSets Accumulate(const std::vector<std::vector<std::string>>& corpus,
                    const CooccurrenceOptions& options,
                    const KeywordMap& keywords, int threads = 1);

// Histories to mine, sorted by user id then impression order.
std::vector<std::vector<std::string>> SelectHistories(
    const std::vector<Impression>& impressions, HistoryMode mode);

// Undirected graph over namespaced node tokens with integer edge weights.
class WeightedGraph {
 public:
  struct Neighbor {
    std::uint32_t node;
    std::uint64_t weight;
  };
  struct Edge {
    std::string a;
    std::string b;
    std::uint64_t weight;
  };

  WeightedGraph() = default;
  // Parallel edges are summed; self loops are rejected.
  WeightedGraph(const std::vector<std::string>& nodes,
                const std::vector<Edge>& edges);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  const std::string& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  // Index of a node token, or -1.
  std::int64_t IndexOf(const std::string& token) const;
  std::span<const Neighbor> neighbors(std::size_t i) const { return adj_[i]; }
  // 0 if there is no edge.
  std::uint64_t EdgeWeight(std::size_t i, std::size_t j) const;
  std::uint64_t TotalWeight() const;
  // Canonical edge list sorted by (a, b) with a < b.
  std::vector<Edge> Edges() const;

 private:
  std::vector<std::string> nodes_;  // sorted
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::vector<Neighbor>> adj_;  // sorted by node
  std::size_t num_edges_ = 0;
};

// Nodes are the pair endpoints, namespaced by the multiset kind.
WeightedGraph BuildGraph(const PairMultiset& pairs);

// Edge list "a\tb\tweight", sorted; isolated nodes as single-token lines.
std::string DumpGraph(const WeightedGraph& graph);
WeightedGraph ParseGraph(std::string_view text);

}  // namespace lecop

#endif  // LECOP_COOCCUR_HPP_
