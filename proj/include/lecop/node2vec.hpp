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

#ifndef LECOP_NODE2VEC_HPP_
#define LECOP_NODE2VEC_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lecop/cooccur.hpp"
#include "lecop/embeddings.hpp"

namespace lecop::node2vec {

// Second-order random walk parameters. p controls returning to the previous
// node, q controls moving away from it.
struct WalkConfig {
  double p = 1.0;
  double q = 1.0;
  int walk_length = 40;
  int walks_per_node = 10;
  std::uint64_t seed = 0;
};

struct SgnsConfig {
  int dim = 100;
  int context_window = 5;
  int negatives = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  // Linear decay floor.
  double min_learning_rate = 1e-4;
  std::uint64_t seed = 0;
  // >1 trains with unsynchronized shared updates; results then depend on
  // scheduling.
  int threads = 1;
};

void Validate(const WalkConfig& cfg);
void Validate(const SgnsConfig& cfg);

struct WeightedNeighbor {
  std::uint32_t node;
  double weight;
};

// Unnormalized weights for the next step from `curr`. Without `prev` the
// weights are the edge weights; otherwise each edge weight is scaled by 1/p
// for prev itself, 1 for common neighbors of prev and 1/q for the rest.
// Ordered by neighbor index; empty for an isolated node.
std::vector<WeightedNeighbor> TransitionWeights(const WeightedGraph& graph,
                                                std::optional<std::uint32_t> prev,
                                                std::uint32_t curr,
                                                const WalkConfig& cfg);

using Walk = std::vector<std::uint32_t>;

// walks_per_node walks from every node, ordered by round then node index.
// Each walk has its own RNG stream, so the result does not depend on
// `threads`.
std::vector<Walk> GenerateWalks(const WeightedGraph& graph, const WalkConfig& cfg,
                                int threads = 1);

// Skip-gram negative-sampling loss of one (center, context) pair:
//   -log sigmoid(u.v) - sum_n log sigmoid(-u.v_n)
double PairLoss(std::span<const double> center, std::span<const double> context,
                const std::vector<std::span<const double>>& negatives);

struct PairGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

PairGradient PairLossGradient(std::span<const double> center,
                              std::span<const double> context,
                              const std::vector<std::span<const double>>& negatives);

// One SGD step on PairLoss, updating all vectors in place. Output vectors are
// updated in order, each using the center vector from before the step.
// Returns the loss before the step.
double SgdPairStep(std::span<double> center, std::span<double> context,
                   const std::vector<std::span<double>>& negatives,
                   double learning_rate);

struct SgnsResult {
  // Center ("input") vectors keyed by vocabulary token.
  EmbeddingTable embeddings;
  // Mean pair loss per epoch.
  std::vector<double> epoch_loss;
};

// Trains on walks over node indices into `vocabulary`. Negatives are drawn
// from the unigram distribution of the walks raised to 0.75.
SgnsResult TrainSgns(const std::vector<Walk>& walks,
                     const std::vector<std::string>& vocabulary,
                     const SgnsConfig& cfg);

// Walks plus SGNS over every node of the graph. An empty graph yields an
// empty table of dimension cfg.dim.
SgnsResult EmbedGraph(const WeightedGraph& graph, const WalkConfig& walk_cfg,
                      const SgnsConfig& sgns_cfg, int walk_threads = 1);

}  // namespace lecop::node2vec

#endif  // LECOP_NODE2VEC_HPP_
