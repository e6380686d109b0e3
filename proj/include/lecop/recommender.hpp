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

#ifndef LECOP_RECOMMENDER_HPP_
#define LECOP_RECOMMENDER_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lecop/fusion.hpp"

namespace lecop {

struct Impression;

struct EncoderShape {
  int dim = 300;
  int heads = 15;
  int head_dim = 20;
  int attention_dim = 200;

  void Validate() const;
};

// Multi-head self-attention over clicked news vectors followed by additive
// attention pooling. No positional encoding: the encoder is invariant to the
// order of the history.
struct UserEncoderParams {
  EncoderShape shape;
  std::vector<Eigen::MatrixXd> query;  // per head, head_dim x dim
  std::vector<Eigen::MatrixXd> key;
  std::vector<Eigen::MatrixXd> value;
  Eigen::MatrixXd attn_proj;   // attention_dim x dim
  Eigen::VectorXd attn_query;  // attention_dim

  // Xavier-uniform initialization.
  static UserEncoderParams Init(const EncoderShape& shape, std::uint64_t seed);
  static UserEncoderParams Zeros(const EncoderShape& shape);
};

struct RecommenderModel {
  UserEncoderParams encoder;
  ProjectionParams projection;

  static RecommenderModel Init(const EncoderShape& shape, std::size_t llm_dim,
                               std::uint64_t seed);
  // Same shapes, all zeros. Used as a gradient accumulator.
  static RecommenderModel ZerosLike(const RecommenderModel& model);
  // Every parameter tensor as a flat view, in a fixed order.
  std::vector<std::span<double>> Tensors();
  std::vector<std::span<const double>> Tensors() const;
};

// Encodes clicked news vectors (one per column, dim rows). An empty history
// encodes to the zero vector.
Eigen::VectorXd EncodeUser(const Eigen::MatrixXd& clicked,
                           const UserEncoderParams& params);

// Additive attention weights of the last EncodeUser-style pass, exposed for
// property checks.
Eigen::VectorXd PoolingWeights(const Eigen::MatrixXd& clicked,
                               const UserEncoderParams& params);

double Score(const Eigen::VectorXd& user, const Eigen::VectorXd& candidate);

struct TrainConfig {
  int negatives = 4;
  int batch_size = 512;
  double learning_rate = 2e-4;
  int epochs = 5;
  int max_history = 50;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  // >1 splits each batch over threads; gradients are summed in chunk order.
  int threads = 1;

  void Validate() const;
};

// One softmax group: candidates[0] is the clicked item, the rest are
// negatives. Entries index into NewsFeatures.
struct TrainingGroup {
  std::vector<std::size_t> history;
  std::vector<std::size_t> candidates;
};

// Resolvable history ids, most recent max_history kept.
std::vector<std::size_t> ResolveHistory(const Impression& impression,
                                        const NewsFeatures& features,
                                        int max_history);

// One group per clicked candidate. Negatives come from the impression's
// unclicked candidates, topped up with random catalog items.
std::vector<TrainingGroup> BuildGroups(const std::vector<Impression>& impressions,
                                       const NewsFeatures& features,
                                       const TrainConfig& cfg,
                                       std::uint64_t seed);

// Mean cross-entropy of the groups; accumulates d(loss)/d(params) into
// `grad` when non-null.
double GroupLoss(const RecommenderModel& model, const NewsFeatures& features,
                 std::span<const TrainingGroup> groups,
                 RecommenderModel* grad = nullptr);

struct TrainResult {
  RecommenderModel model;
  std::vector<double> epoch_loss;
};

// Adam on the mean group loss. Co-occurrence and LLM vectors are frozen;
// the projection and the user encoder are learned.
TrainResult Train(const std::vector<Impression>& impressions,
                  const NewsFeatures& features, RecommenderModel init,
                  const TrainConfig& cfg);

struct ScoredCandidate {
  std::string news_id;
  double score = 0.0;
};

// Scores every candidate in input order. Unknown candidate ids throw in
// strict mode and score against a zero vector otherwise.
std::vector<ScoredCandidate> Predict(const Impression& impression,
                                     const RecommenderModel& model,
                                     const NewsFeatures& features,
                                     int max_history, bool strict = false);

// Checkpoint directory: checkpoint.json plus one LEC1 file per tensor group.
// Values are stored as float32.
void SaveCheckpoint(const RecommenderModel& model, const std::string& dir,
                    const std::string& config_json);
RecommenderModel LoadCheckpoint(const std::string& dir);

}  // namespace lecop

#endif  // LECOP_RECOMMENDER_HPP_
