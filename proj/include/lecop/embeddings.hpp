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

#ifndef LECOP_EMBEDDINGS_HPP_
#define LECOP_EMBEDDINGS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lecop {

// Ordered id -> float vector table with one fixed dimension. Used for LLM
// text embeddings, graph node embeddings and fused news vectors alike.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 1);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  // Throws DataError on duplicate id, wrong length or non-finite component.
  void Add(std::string id, std::span<const float> vec);
  void Add(std::string id, std::span<const double> vec);

  bool Contains(const std::string& id) const { return index_.count(id) > 0; }
  std::optional<std::span<const float>> Find(const std::string& id) const;

  const std::string& id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }

  bool operator==(const EmbeddingTable& other) const {
    return dim_ == other.dim_ && ids_ == other.ids_ && data_ == other.data_;
  }

 private:
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Binary layout: "LEC1", u32 dim, u32 count, then per record a u16 id
// length, the UTF-8 id bytes and dim float32 values. All little-endian.
std::string EncodeBinary(const EmbeddingTable& table);
EmbeddingTable DecodeBinary(std::string_view bytes);

// TSV: id followed by dim float fields.
std::string EncodeText(const EmbeddingTable& table);
EmbeddingTable DecodeText(std::string_view text);

void SaveEmbeddings(const EmbeddingTable& table, const std::string& path);
void SaveEmbeddingsText(const EmbeddingTable& table, const std::string& path);
// Detects the binary layout by its magic bytes, otherwise parses TSV.
EmbeddingTable LoadEmbeddings(const std::string& path);

}  // namespace lecop

#endif  // LECOP_EMBEDDINGS_HPP_
