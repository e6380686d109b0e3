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

#include "lecop/embeddings.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

#include "lecop/common.hpp"

namespace lecop {
namespace {

constexpr char kMagic[4] = {'L', 'E', 'C', '1'};

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::uint16_t U16() {
    Need(2);
    const auto lo = static_cast<unsigned char>(bytes_[pos_]);
    const auto hi = static_cast<unsigned char>(bytes_[pos_ + 1]);
    pos_ += 2;
    return static_cast<std::uint16_t>(lo | (hi << 8));
  }
  std::string_view Bytes(std::size_t n) {
    Need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw DataError("truncated embedding file");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw DataError("embedding dim must be positive");
}

void EmbeddingTable::Add(std::string id, std::span<const float> vec) {
  if (vec.size() != dim_) {
    throw DataError("dimension mismatch for id '" + id + "': got " +
                    std::to_string(vec.size()) + ", table dim " +
                    std::to_string(dim_));
  }
  for (float v : vec) {
    if (!std::isfinite(v)) {
      throw DataError("non-finite component in vector for id '" + id + "'");
    }
  }
  if (!index_.emplace(id, ids_.size()).second) {
    throw DataError("duplicate embedding id '" + id + "'");
  }
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), vec.begin(), vec.end());
}

void EmbeddingTable::Add(std::string id, std::span<const double> vec) {
  std::vector<float> f(vec.begin(), vec.end());
  Add(std::move(id), std::span<const float>(f));
}

std::optional<std::span<const float>> EmbeddingTable::Find(
    const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

std::string EncodeBinary(const EmbeddingTable& table) {
  std::string out(kMagic, 4);
  PutU32(out, static_cast<std::uint32_t>(table.dim()));
  PutU32(out, static_cast<std::uint32_t>(table.size()));
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string& id = table.id(i);
    if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw DataError("id too long for binary layout: " + id.substr(0, 32));
    }
    PutU16(out, static_cast<std::uint16_t>(id.size()));
    out += id;
    for (float v : table.row(i)) PutU32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

EmbeddingTable DecodeBinary(std::string_view bytes) {
  Reader r(bytes);
  if (r.Bytes(4) != std::string_view(kMagic, 4)) {
    throw DataError("bad magic: not a LEC1 embedding file");
  }
  const std::uint32_t dim = r.U32();
  const std::uint32_t count = r.U32();
  EmbeddingTable table(dim);
  std::vector<float> vec(dim);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string id(r.Bytes(r.U16()));
    for (auto& v : vec) v = std::bit_cast<float>(r.U32());
    table.Add(std::move(id), std::span<const float>(vec));
  }
  if (!r.AtEnd()) throw DataError("trailing bytes after embedding records");
  return table;
}

std::string EncodeText(const EmbeddingTable& table) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += table.id(i);
    for (float v : table.row(i)) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out += '\t';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

EmbeddingTable DecodeText(std::string_view text) {
  std::optional<EmbeddingTable> table;
  std::size_t line_no = 0;
  std::vector<float> vec;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    const auto fields = SplitView(line, '\t');
    const std::string id(fields[0]);
    vec.clear();
    for (std::size_t f = 1; f < fields.size(); ++f) {
      const std::string_view s = Trim(fields[f]);
      float v = 0.0f;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw DataError("embedding line " + std::to_string(line_no) +
                        ": bad float '" + std::string(s) + "' for id '" + id +
                        "'");
      }
      vec.push_back(v);
    }
    if (vec.empty()) {
      throw DataError("embedding line " + std::to_string(line_no) +
                      ": no vector for id '" + id + "'");
    }
    if (!table) table.emplace(vec.size());
    table->Add(id, std::span<const float>(vec));
  }
  if (!table) throw DataError("empty text embedding file: dimension unknown");
  return std::move(*table);
}

void SaveEmbeddings(const EmbeddingTable& table, const std::string& path) {
  WriteFile(path, EncodeBinary(table));
}

void SaveEmbeddingsText(const EmbeddingTable& table, const std::string& path) {
  WriteFile(path, EncodeText(table));
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  const std::string bytes = ReadFile(path);
  try {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
      return DecodeBinary(bytes);
    }
    return DecodeText(bytes);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace lecop
