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

#include "lecop/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lecop/common.hpp"
#include "lecop/dataset.hpp"

namespace lecop {

ProjectionParams ProjectionParams::Init(std::size_t out_dim, std::size_t llm_dim,
                                        std::uint64_t seed) {
  ProjectionParams p;
  p.weight.resize(static_cast<Eigen::Index>(out_dim),
                  static_cast<Eigen::Index>(llm_dim));
  p.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_dim));
  std::mt19937_64 rng(seed);
  const double limit =
      std::sqrt(6.0 / static_cast<double>(out_dim + llm_dim));
  std::uniform_real_distribution<double> u(-limit, limit);
  for (Eigen::Index c = 0; c < p.weight.cols(); ++c) {
    for (Eigen::Index r = 0; r < p.weight.rows(); ++r) p.weight(r, c) = u(rng);
  }
  return p;
}

Eigen::VectorXd PoolKeywords(const std::string& news_id,
                             const KeywordMap& keywords,
                             const EmbeddingTable& kw_vecs, bool* fallback) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kw_vecs.dim()));
  std::size_t found = 0;
  if (const auto it = keywords.find(news_id); it != keywords.end()) {
    std::vector<std::string> seen;
    for (const auto& kw : it->second) {
      std::string token = KeywordToken(kw);
      if (std::find(seen.begin(), seen.end(), token) != seen.end()) continue;
      seen.push_back(token);
      if (const auto vec = kw_vecs.Find("kw:" + token)) {
        for (std::size_t d = 0; d < vec->size(); ++d) {
          sum[static_cast<Eigen::Index>(d)] += (*vec)[d];
        }
        ++found;
      }
    }
  }
  if (fallback) *fallback = found == 0;
  if (found > 1) sum /= static_cast<double>(found);
  return sum;
}

Eigen::VectorXd AssembleCooc(const std::string& news_id,
                             const CoocEmbeddingSet& cooc,
                             const KeywordMap& keywords,
                             FusionCoverage* coverage) {
  const auto d1 = static_cast<Eigen::Index>(cooc.id_vecs.dim());
  const auto d2 = static_cast<Eigen::Index>(cooc.item_item_kw_vecs.dim());
  const auto d3 = static_cast<Eigen::Index>(cooc.intra_kw_vecs.dim());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d1 + d2 + d3);

  if (const auto vec = cooc.id_vecs.Find("id:" + news_id)) {
    for (Eigen::Index d = 0; d < d1; ++d) out[d] = (*vec)[static_cast<std::size_t>(d)];
  } else if (coverage) {
    ++coverage->id_fallbacks;
  }
  if (!cooc.use_keyword_segments) {
    if (coverage) {
      ++coverage->item_item_kw_fallbacks;
      ++coverage->intra_kw_fallbacks;
    }
    return out;
  }
  bool fallback = false;
  out.segment(d1, d2) = PoolKeywords(news_id, keywords, cooc.item_item_kw_vecs, &fallback);
  if (fallback && coverage) ++coverage->item_item_kw_fallbacks;
  out.segment(d1 + d2, d3) = PoolKeywords(news_id, keywords, cooc.intra_kw_vecs, &fallback);
  if (fallback && coverage) ++coverage->intra_kw_fallbacks;
  return out;
}

Eigen::VectorXd Fuse(const Eigen::VectorXd& llm_vec, const Eigen::VectorXd& cooc_vec,
                     const ProjectionParams& proj) {
  if (proj.weight.cols() != llm_vec.size() || proj.weight.rows() != cooc_vec.size() ||
      proj.bias.size() != cooc_vec.size()) {
    throw DataError("fuse: shape mismatch (weight " +
                    std::to_string(proj.weight.rows()) + "x" +
                    std::to_string(proj.weight.cols()) + ", llm " +
                    std::to_string(llm_vec.size()) + ", cooc " +
                    std::to_string(cooc_vec.size()) + ")");
  }
  return proj.weight * llm_vec + proj.bias + cooc_vec;
}

NewsFeatures::NewsFeatures(const std::vector<NewsItem>& catalog,
                           const EmbeddingTable& llm,
                           const CoocEmbeddingSet& cooc,
                           const KeywordMap& keywords,
                           const FeatureOptions& options) {
  const auto n = static_cast<Eigen::Index>(catalog.size());
  llm_.setZero(static_cast<Eigen::Index>(llm.dim()), n);
  cooc_.setZero(static_cast<Eigen::Index>(cooc.out_dim()), n);
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const std::string& id = catalog[i].news_id;
    if (!index_.emplace(id, i).second) throw DataError("duplicate catalog id " + id);
    ids_.push_back(id);
    const auto col = static_cast<Eigen::Index>(i);
    if (const auto vec = llm.Find(id)) {
      for (std::size_t d = 0; d < vec->size(); ++d) {
        llm_(static_cast<Eigen::Index>(d), col) = (*vec)[d];
      }
    } else if (options.zero_llm_fallback) {
      ++coverage_.llm_fallbacks;
    } else {
      missing.push_back(id);
    }
    cooc_.col(col) = AssembleCooc(id, cooc, keywords, &coverage_);
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) +
                      " news ids have no LLM embedding: ";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      if (i) msg += ", ";
      msg += missing[i];
    }
    if (missing.size() > 20) msg += ", ...";
    throw DataError(msg);
  }
}

std::int64_t NewsFeatures::IndexOf(const std::string& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

Eigen::VectorXd NewsFeatures::Fused(std::size_t i, const ProjectionParams& proj) const {
  const auto col = static_cast<Eigen::Index>(i);
  return Fuse(llm_.col(col), cooc_.col(col), proj);
}

Eigen::MatrixXd NewsFeatures::Fused(const std::vector<std::size_t>& items,
                                    const ProjectionParams& proj) const {
  const auto n = static_cast<Eigen::Index>(items.size());
  Eigen::MatrixXd llm(llm_.rows(), n);
  Eigen::MatrixXd out(cooc_.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto col = static_cast<Eigen::Index>(items[static_cast<std::size_t>(k)]);
    llm.col(k) = llm_.col(col);
    out.col(k) = cooc_.col(col);
  }
  if (proj.weight.rows() != out.rows() || proj.weight.cols() != llm.rows()) {
    throw DataError("projection shape does not match news features");
  }
  out.noalias() += proj.weight * llm;
  out.colwise() += proj.bias;
  return out;
}

EmbeddingTable BuildNewsTable(const NewsFeatures& features,
                              const ProjectionParams& proj) {
  EmbeddingTable table(features.out_dim());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Eigen::VectorXd v = features.Fused(i, proj);
    table.Add(features.id(i), std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
  }
  return table;
}

}  // namespace lecop
