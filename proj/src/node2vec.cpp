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

#include "lecop/node2vec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include "lecop/common.hpp"

namespace lecop::node2vec {
namespace {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)), stable for large |x|.
double LogSigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::uint32_t SampleIndex(const std::vector<WeightedNeighbor>& weights,
                          std::mt19937_64& rng) {
  double total = 0.0;
  for (const auto& w : weights) total += w.weight;
  std::uniform_real_distribution<double> unit(0.0, total);
  double r = unit(rng);
  for (const auto& w : weights) {
    if (r < w.weight) return w.node;
    r -= w.weight;
  }
  return weights.back().node;
}

}  // namespace

void Validate(const WalkConfig& cfg) {
  if (!(cfg.p > 0.0) || !(cfg.q > 0.0)) throw UsageError("node2vec p and q must be > 0");
  if (cfg.walk_length < 2) throw UsageError("walk_length must be >= 2");
  if (cfg.walks_per_node < 1) throw UsageError("walks_per_node must be >= 1");
}

void Validate(const SgnsConfig& cfg) {
  if (cfg.dim < 1) throw UsageError("SGNS dim must be >= 1");
  if (cfg.context_window < 1) throw UsageError("context_window must be >= 1");
  if (cfg.negatives < 1) throw UsageError("negatives must be >= 1");
  if (cfg.epochs < 1) throw UsageError("epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) throw UsageError("learning_rate must be > 0");
}

std::vector<WeightedNeighbor> TransitionWeights(const WeightedGraph& graph,
                                                std::optional<std::uint32_t> prev,
                                                std::uint32_t curr,
                                                const WalkConfig& cfg) {
  const auto neighbors = graph.neighbors(curr);
  std::vector<WeightedNeighbor> out;
  out.reserve(neighbors.size());
  for (const auto& n : neighbors) {
    double alpha = 1.0;
    if (prev.has_value()) {
      if (n.node == *prev) {
        alpha = 1.0 / cfg.p;
      } else if (graph.EdgeWeight(*prev, n.node) == 0) {
        alpha = 1.0 / cfg.q;
      }
    }
    out.push_back({n.node, static_cast<double>(n.weight) * alpha});
  }
  return out;
}

std::vector<Walk> GenerateWalks(const WeightedGraph& graph, const WalkConfig& cfg,
                                int threads) {
  Validate(cfg);
  const std::size_t n = graph.num_nodes();
  const std::size_t rounds = static_cast<std::size_t>(cfg.walks_per_node);
  std::vector<Walk> walks(n * rounds);
  ParallelFor(walks.size(), threads, [&](std::size_t begin, std::size_t end, int) {
    for (std::size_t w = begin; w < end; ++w) {
      std::mt19937_64 rng(DeriveSeed(cfg.seed, w));
      Walk& walk = walks[w];
      walk.reserve(static_cast<std::size_t>(cfg.walk_length));
      walk.push_back(static_cast<std::uint32_t>(w % n));
      std::optional<std::uint32_t> prev;
      while (walk.size() < static_cast<std::size_t>(cfg.walk_length)) {
        const std::uint32_t curr = walk.back();
        const auto weights = TransitionWeights(graph, prev, curr, cfg);
        if (weights.empty()) break;
        walk.push_back(SampleIndex(weights, rng));
        prev = curr;
      }
    }
  });
  return walks;
}

double PairLoss(std::span<const double> center, std::span<const double> context,
                const std::vector<std::span<const double>>& negatives) {
  double loss = -LogSigmoid(Dot(center, context));
  for (const auto& neg : negatives) loss -= LogSigmoid(-Dot(center, neg));
  return loss;
}

PairGradient PairLossGradient(std::span<const double> center,
                              std::span<const double> context,
                              const std::vector<std::span<const double>>& negatives) {
  const std::size_t dim = center.size();
  PairGradient g;
  g.center.assign(dim, 0.0);
  // d/dx [-log sigmoid(x)] = sigmoid(x) - 1; d/dx [-log sigmoid(-x)] = sigmoid(x)
  const double c_pos = Sigmoid(Dot(center, context)) - 1.0;
  g.context.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    g.center[i] += c_pos * context[i];
    g.context[i] = c_pos * center[i];
  }
  for (const auto& neg : negatives) {
    const double c_neg = Sigmoid(Dot(center, neg));
    std::vector<double> gn(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      g.center[i] += c_neg * neg[i];
      gn[i] = c_neg * center[i];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

double SgdPairStep(std::span<double> center, std::span<double> context,
                   const std::vector<std::span<double>>& negatives,
                   double learning_rate) {
  const std::size_t dim = center.size();
  std::vector<double> center_update(dim, 0.0);
  double loss = 0.0;
  const auto step = [&](std::span<double> out, double label) {
    const double dot = Dot(center, out);
    loss -= LogSigmoid(label > 0 ? dot : -dot);
    const double g = (label - Sigmoid(dot)) * learning_rate;
    for (std::size_t i = 0; i < dim; ++i) {
      center_update[i] += g * out[i];
      out[i] += g * center[i];
    }
  };
  step(context, 1.0);
  for (const auto& neg : negatives) step(neg, 0.0);
  for (std::size_t i = 0; i < dim; ++i) center[i] += center_update[i];
  return loss;
}

SgnsResult TrainSgns(const std::vector<Walk>& walks,
                     const std::vector<std::string>& vocabulary,
                     const SgnsConfig& cfg) {
  Validate(cfg);
  if (vocabulary.empty()) throw DataError("SGNS: empty vocabulary");
  if (walks.empty()) throw DataError("SGNS: no walks");
  const std::size_t vocab = vocabulary.size();
  const std::size_t dim = static_cast<std::size_t>(cfg.dim);

  std::vector<double> counts(vocab, 0.0);
  std::size_t tokens = 0;
  for (const auto& walk : walks) {
    for (auto node : walk) {
      if (node >= vocab) throw DataError("SGNS: walk node outside vocabulary");
      counts[node] += 1.0;
    }
    tokens += walk.size();
  }
  std::vector<double> noise(vocab);
  for (std::size_t i = 0; i < vocab; ++i) noise[i] = std::pow(counts[i], 0.75);

  std::vector<double> input(vocab * dim);
  std::vector<double> output(vocab * dim, 0.0);
  {
    std::mt19937_64 rng(DeriveSeed(cfg.seed, "sgns/init"));
    const double half = 0.5 / static_cast<double>(dim);
    std::uniform_real_distribution<double> init(-half, half);
    for (auto& v : input) v = init(rng);
  }

  const auto row = [dim](std::vector<double>& m, std::size_t i) {
    return std::span<double>(m.data() + i * dim, dim);
  };
  const std::size_t total_tokens = tokens * static_cast<std::size_t>(cfg.epochs);
  std::atomic<std::size_t> processed{0};
  const int threads = std::max(1, cfg.threads);

  SgnsResult result{EmbeddingTable(dim), {}};
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<double> loss_sum(static_cast<std::size_t>(threads), 0.0);
    std::vector<std::size_t> pair_count(static_cast<std::size_t>(threads), 0);
    ParallelFor(walks.size(), threads, [&](std::size_t begin, std::size_t end,
                                            int chunk) {
      std::mt19937_64 rng(DeriveSeed(
          DeriveSeed(cfg.seed, static_cast<std::uint64_t>(epoch)),
          static_cast<std::uint64_t>(chunk)));
      std::discrete_distribution<std::uint32_t> sample_noise(noise.begin(),
                                                             noise.end());
      std::vector<std::span<double>> negs;
      for (std::size_t w = begin; w < end; ++w) {
        const Walk& walk = walks[w];
        const double progress = static_cast<double>(processed.load()) /
                                static_cast<double>(total_tokens);
        const double lr = std::max(cfg.min_learning_rate,
                                   cfg.learning_rate * (1.0 - progress));
        for (std::size_t i = 0; i < walk.size(); ++i) {
          const std::size_t lo =
              i >= static_cast<std::size_t>(cfg.context_window)
                  ? i - static_cast<std::size_t>(cfg.context_window)
                  : 0;
          const std::size_t hi = std::min(
              walk.size() - 1, i + static_cast<std::size_t>(cfg.context_window));
          for (std::size_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            negs.clear();
            for (int k = 0; k < cfg.negatives; ++k) {
              const std::uint32_t n = sample_noise(rng);
              if (n == walk[j]) continue;
              negs.push_back(row(output, n));
            }
            loss_sum[chunk] +=
                SgdPairStep(row(input, walk[i]), row(output, walk[j]), negs, lr);
            ++pair_count[chunk];
          }
        }
        processed += walk.size();
      }
    });
    double loss = 0.0;
    std::size_t pairs = 0;
    for (int t = 0; t < threads; ++t) {
      loss += loss_sum[t];
      pairs += pair_count[t];
    }
    result.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }

  for (std::size_t i = 0; i < vocab; ++i) {
    result.embeddings.Add(vocabulary[i], std::span<const double>(row(input, i)));
  }
  return result;
}

SgnsResult EmbedGraph(const WeightedGraph& graph, const WalkConfig& walk_cfg,
                      const SgnsConfig& sgns_cfg, int walk_threads) {
  Validate(sgns_cfg);
  if (graph.num_nodes() == 0) {
    return {EmbeddingTable(static_cast<std::size_t>(sgns_cfg.dim)), {}};
  }
  const auto walks = GenerateWalks(graph, walk_cfg, walk_threads);
  return TrainSgns(walks, graph.nodes(), sgns_cfg);
}

}  // namespace lecop::node2vec
