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

#include "lecop/cooccur.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "lecop/common.hpp"
#include "lecop/dataset.hpp"

namespace lecop {
namespace {

// Distinct normalized keyword tokens of an item, or nullptr if the item has
// no keyword entry.
class KeywordIndex {
 public:
  explicit KeywordIndex(const KeywordMap& keywords) {
    for (const auto& [id, kws] : keywords) {
      std::vector<std::string> tokens;
      for (const auto& kw : kws) {
        std::string t = KeywordToken(kw);
        if (!t.empty() && std::find(tokens.begin(), tokens.end(), t) == tokens.end()) {
          tokens.push_back(std::move(t));
        }
      }
      tokens_.emplace(id, std::move(tokens));
    }
  }

  const std::vector<std::string>* Find(const std::string& id) const {
    const auto it = tokens_.find(id);
    return it == tokens_.end() ? nullptr : &it->second;
  }

 private:
  std::unordered_map<std::string, std::vector<std::string>> tokens_;
};

void AddIntraPairs(const std::vector<std::string>& kws, std::uint64_t count,
                   PairMultiset& out) {
  for (std::size_t a = 0; a < kws.size(); ++a) {
    for (std::size_t b = a + 1; b < kws.size(); ++b) out.Add(kws[a], kws[b], count);
  }
}

PairSets ExtractWithIndex(std::span<const std::string> history,
                          const CooccurrenceOptions& options,
                          const KeywordIndex& index, bool intra) {
  if (options.window < 2) {
    throw UsageError("co-occurrence window must be >= 2, got " +
                     std::to_string(options.window));
  }
  PairSets out;
  const std::size_t n = history.size();
  const std::size_t w = static_cast<std::size_t>(options.window);
  const std::size_t last_start = n > w ? n - w : 0;

  std::vector<const std::vector<std::string>*> kws(n);
  for (std::size_t i = 0; i < n; ++i) {
    kws[i] = index.Find(history[i]);
    if (kws[i] == nullptr) ++out.positions_without_keywords;
    if (intra && kws[i] != nullptr) AddIntraPairs(*kws[i], 1, out.intra_kw);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && j - i < w; ++j) {
      // Window starts s with s <= i and j < s + w, clipped to valid starts.
      const std::size_t lo = j + 1 > w ? j + 1 - w : 0;
      const std::size_t hi = std::min(i, last_start);
      if (hi < lo) continue;
      const std::uint64_t windows = hi - lo + 1;
      if (history[i] == history[j]) continue;
      out.id_id.Add(history[i], history[j], windows);
      if (kws[i] == nullptr || kws[j] == nullptr) continue;
      for (const auto& a : *kws[i]) {
        for (const auto& b : *kws[j]) {
          if (a != b) out.item_item_kw.Add(a, b, windows);
        }
      }
    }
  }
  return out;
}

void MergeInto(PairSets& dst, const PairSets& src) {
  dst.id_id.Merge(src.id_id);
  dst.item_item_kw.Merge(src.item_item_kw);
  dst.intra_kw.Merge(src.intra_kw);
  dst.positions_without_keywords += src.positions_without_keywords;
}

}  // namespace

std::string_view PairKindName(PairKind kind) {
  switch (kind) {
    case PairKind::kIdId:
      return "id_id";
    case PairKind::kItemItemKeyword:
      return "item_item_kw";
    case PairKind::kIntraItemKeyword:
      return "intra_item_kw";
  }
  return "unknown";
}

std::string_view NodePrefix(PairKind kind) {
  return kind == PairKind::kIdId ? "id:" : "kw:";
}

std::size_t PairHash::operator()(
    const std::pair<std::string, std::string>& p) const {
  const std::size_t h1 = std::hash<std::string>{}(p.first);
  const std::size_t h2 = std::hash<std::string>{}(p.second);
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

void PairMultiset::Add(std::string_view a, std::string_view b,
                       std::uint64_t count) {
  if (a == b || count == 0) return;
  if (b < a) std::swap(a, b);
  counts_[Key(std::string(a), std::string(b))] += count;
}

void PairMultiset::Merge(const PairMultiset& other) {
  for (const auto& [key, count] : other.counts_) counts_[key] += count;
}

std::uint64_t PairMultiset::Count(std::string_view a, std::string_view b) const {
  if (b < a) std::swap(a, b);
  const auto it = counts_.find(Key(std::string(a), std::string(b)));
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t PairMultiset::TotalCount() const {
  std::uint64_t total = 0;
  for (const auto& [key, count] : counts_) total += count;
  return total;
}

std::vector<std::tuple<std::string, std::string, std::uint64_t>>
PairMultiset::Sorted() const {
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> out;
  out.reserve(counts_.size());
  for (const auto& [key, count] : counts_) out.emplace_back(key.first, key.second, count);
  std::sort(out.begin(), out.end());
  return out;
}

PairSets ExtractPairs(std::span<const std::string> history,
                      const CooccurrenceOptions& options,
                      const KeywordMap& keywords) {
  return ExtractWithIndex(history, options, KeywordIndex(keywords), true);
}

PairSets Accumulate(const std::vector<std::vector<std::string>>& corpus,
                    const CooccurrenceOptions& options,
                    const KeywordMap& keywords, int threads) {
  if (options.window < 2) {
    throw UsageError("co-occurrence window must be >= 2, got " +
                     std::to_string(options.window));
  }
  const KeywordIndex index(keywords);
  const bool per_position = options.intra_mode == IntraCountMode::kPerPosition;
  const int chunks = std::max(1, threads);
  std::vector<PairSets> partial(static_cast<std::size_t>(chunks));
  ParallelFor(corpus.size(), chunks,
              [&](std::size_t begin, std::size_t end, int chunk) {
                for (std::size_t h = begin; h < end; ++h) {
                  MergeInto(partial[chunk],
                            ExtractWithIndex(corpus[h], options, index,
                                             per_position));
                }
              });
  PairSets total;
  for (const auto& p : partial) MergeInto(total, p);
  if (!per_position) {
    std::set<std::string> distinct;
    for (const auto& history : corpus) distinct.insert(history.begin(), history.end());
    for (const auto& id : distinct) {
      if (const auto* kws = index.Find(id)) AddIntraPairs(*kws, 1, total.intra_kw);
    }
  }
  return total;
}

std::vector<std::vector<std::string>> SelectHistories(
    const std::vector<Impression>& impressions, HistoryMode mode) {
  std::vector<const Impression*> order;
  order.reserve(impressions.size());
  for (const auto& imp : impressions) order.push_back(&imp);
  std::stable_sort(order.begin(), order.end(),
                   [](const Impression* a, const Impression* b) {
                     return a->user_id < b->user_id;
                   });
  std::vector<std::vector<std::string>> out;
  if (mode == HistoryMode::kPerImpression) {
    for (const auto* imp : order) {
      if (!imp->history.empty()) out.push_back(imp->history);
    }
    return out;
  }
  for (std::size_t i = 0; i < order.size();) {
    const Impression* best = order[i];
    std::size_t j = i + 1;
    for (; j < order.size() && order[j]->user_id == order[i]->user_id; ++j) {
      if (order[j]->history.size() > best->history.size()) best = order[j];
    }
    if (!best->history.empty()) out.push_back(best->history);
    i = j;
  }
  return out;
}

WeightedGraph::WeightedGraph(const std::vector<std::string>& nodes,
                             const std::vector<Edge>& edges) {
  std::set<std::string> all(nodes.begin(), nodes.end());
  for (const auto& e : edges) {
    if (e.a == e.b) throw DataError("self loop on node " + e.a);
    if (e.weight == 0) throw DataError("zero-weight edge " + e.a + " - " + e.b);
    all.insert(e.a);
    all.insert(e.b);
  }
  nodes_.assign(all.begin(), all.end());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    index_.emplace(nodes_[i], static_cast<std::uint32_t>(i));
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> merged;
  for (const auto& e : edges) {
    std::uint32_t a = index_.at(e.a);
    std::uint32_t b = index_.at(e.b);
    if (b < a) std::swap(a, b);
    merged[{a, b}] += e.weight;
  }
  adj_.resize(nodes_.size());
  for (const auto& [key, weight] : merged) {
    adj_[key.first].push_back({key.second, weight});
    adj_[key.second].push_back({key.first, weight});
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
  num_edges_ = merged.size();
}

std::int64_t WeightedGraph::IndexOf(const std::string& token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::uint64_t WeightedGraph::EdgeWeight(std::size_t i, std::size_t j) const {
  const auto& list = adj_[i];
  const auto it = std::lower_bound(
      list.begin(), list.end(), j,
      [](const Neighbor& n, std::size_t target) { return n.node < target; });
  return (it != list.end() && it->node == j) ? it->weight : 0;
}

std::uint64_t WeightedGraph::TotalWeight() const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < adj_.size(); ++i) {
    for (const auto& n : adj_[i]) {
      if (n.node > i) total += n.weight;
    }
  }
  return total;
}

std::vector<WeightedGraph::Edge> WeightedGraph::Edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (std::size_t i = 0; i < adj_.size(); ++i) {
    for (const auto& n : adj_[i]) {
      if (n.node > i) out.push_back({nodes_[i], nodes_[n.node], n.weight});
    }
  }
  return out;
}

WeightedGraph BuildGraph(const PairMultiset& pairs) {
  const std::string prefix(NodePrefix(pairs.kind()));
  std::vector<WeightedGraph::Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, count] : pairs.counts()) {
    edges.push_back({prefix + key.first, prefix + key.second, count});
  }
  return WeightedGraph({}, edges);
}

std::string DumpGraph(const WeightedGraph& graph) {
  std::string out;
  std::vector<bool> has_edge(graph.num_nodes(), false);
  for (std::size_t i = 0; i < graph.num_nodes(); ++i) {
    has_edge[i] = !graph.neighbors(i).empty();
  }
  // Nodes are sorted, so emitting per source node keeps the output sorted.
  for (std::size_t i = 0; i < graph.num_nodes(); ++i) {
    if (!has_edge[i]) {
      out += graph.node(i) + '\n';
      continue;
    }
    for (const auto& n : graph.neighbors(i)) {
      if (n.node > i) {
        out += graph.node(i) + '\t' + graph.node(n.node) + '\t' +
               std::to_string(n.weight) + '\n';
      }
    }
  }
  return out;
}

WeightedGraph ParseGraph(std::string_view text) {
  std::vector<std::string> nodes;
  std::vector<WeightedGraph::Edge> edges;
  std::size_t line_no = 0;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    const auto fields = SplitView(line, '\t');
    if (fields.size() == 1) {
      nodes.emplace_back(fields[0]);
      continue;
    }
    std::uint64_t weight = 0;
    if (fields.size() == 3) {
      const auto res = std::from_chars(fields[2].data(),
                                       fields[2].data() + fields[2].size(), weight);
      if (res.ec != std::errc() || res.ptr != fields[2].data() + fields[2].size()) {
        weight = 0;
      }
    }
    if (fields.size() != 3 || weight == 0 || fields[0] == fields[1]) {
      throw DataError("graph line " + std::to_string(line_no) +
                      ": expected node_a<TAB>node_b<TAB>positive weight");
    }
    edges.push_back({std::string(fields[0]), std::string(fields[1]), weight});
  }
  return WeightedGraph(nodes, edges);
}

}  // namespace lecop
