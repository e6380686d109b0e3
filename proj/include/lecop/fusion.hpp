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

#ifndef LECOP_FUSION_HPP_
#define LECOP_FUSION_HPP_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lecop/embeddings.hpp"
#include "lecop/keywords.hpp"

namespace lecop {

struct NewsItem;

// Node embeddings of the three co-occurrence graphs. Keys carry the graph
// namespace: "id:<news_id>" or "kw:<keyword token>".
struct CoocEmbeddingSet {
  EmbeddingTable id_vecs;
  EmbeddingTable item_item_kw_vecs;
  EmbeddingTable intra_kw_vecs;
  // Off zeroes the two keyword segments (ID-graph-only ablation).
  bool use_keyword_segments = true;

  std::size_t out_dim() const {
    return id_vecs.dim() + item_item_kw_vecs.dim() + intra_kw_vecs.dim();
  }
};

// Affine map from LLM embedding space to the fused news space.
struct ProjectionParams {
  Eigen::MatrixXd weight;  // out_dim x llm_dim
  Eigen::VectorXd bias;    // out_dim

  // Xavier-uniform weight, zero bias.
  static ProjectionParams Init(std::size_t out_dim, std::size_t llm_dim,
                               std::uint64_t seed);
};

struct FusionCoverage {
  std::uint64_t id_fallbacks = 0;
  std::uint64_t item_item_kw_fallbacks = 0;
  std::uint64_t intra_kw_fallbacks = 0;
  std::uint64_t llm_fallbacks = 0;
};

// Mean of the item's keyword node vectors present in `kw_vecs`; zero when
// none are present (and *fallback is set).
Eigen::VectorXd PoolKeywords(const std::string& news_id,
                             const KeywordMap& keywords,
                             const EmbeddingTable& kw_vecs,
                             bool* fallback = nullptr);

// [id vector | pooled item-item keyword vector | pooled intra keyword vector],
// each segment zero when the item is absent from that graph.
Eigen::VectorXd AssembleCooc(const std::string& news_id,
                             const CoocEmbeddingSet& cooc,
                             const KeywordMap& keywords,
                             FusionCoverage* coverage = nullptr);

// weight * llm_vec + bias + cooc_vec
Eigen::VectorXd Fuse(const Eigen::VectorXd& llm_vec, const Eigen::VectorXd& cooc_vec,
                     const ProjectionParams& proj);

struct FeatureOptions {
  // Catalog items without an LLM vector get a zero LLM vector instead of
  // failing.
  bool zero_llm_fallback = false;
};

// Frozen per-item inputs of the news model: LLM vectors and co-occurrence
// vectors, column-aligned by catalog index.
class NewsFeatures {
 public:
  NewsFeatures(const std::vector<NewsItem>& catalog, const EmbeddingTable& llm,
               const CoocEmbeddingSet& cooc, const KeywordMap& keywords,
               const FeatureOptions& options = {});

  std::size_t size() const { return ids_.size(); }
  std::size_t llm_dim() const { return static_cast<std::size_t>(llm_.rows()); }
  std::size_t out_dim() const { return static_cast<std::size_t>(cooc_.rows()); }
  // Catalog index or -1.
  std::int64_t IndexOf(const std::string& id) const;
  const std::string& id(std::size_t i) const { return ids_[i]; }
  const Eigen::MatrixXd& llm() const { return llm_; }    // llm_dim x N
  const Eigen::MatrixXd& cooc() const { return cooc_; }  // out_dim x N
  const FusionCoverage& coverage() const { return coverage_; }

  // Fused vector of one item.
  Eigen::VectorXd Fused(std::size_t i, const ProjectionParams& proj) const;
  // Fused vectors of the given items, one column each.
  Eigen::MatrixXd Fused(const std::vector<std::size_t>& items,
                        const ProjectionParams& proj) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  Eigen::MatrixXd llm_;
  Eigen::MatrixXd cooc_;
  FusionCoverage coverage_;
};

// Fused vector for every catalog item.
EmbeddingTable BuildNewsTable(const NewsFeatures& features,
                              const ProjectionParams& proj);

}  // namespace lecop

#endif  // LECOP_FUSION_HPP_
