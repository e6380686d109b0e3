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

#include "lecop/embedding_client.hpp"

#include <cmath>
#include <optional>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "lecop/common.hpp"

namespace lecop {
namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint SplitUrl(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw UsageError("embedding endpoint must be an http:// URL: " + url);
  }
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::string MissingIds(const std::vector<PromptRecord>& prompts,
                       std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ", ";
    out += prompts[i].news_id;
  }
  return out;
}

struct BatchResult {
  std::vector<std::vector<float>> vectors;
};

class TransientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BatchResult PostBatch(const Endpoint& ep, const std::vector<PromptRecord>& prompts,
                      std::size_t begin, std::size_t end,
                      const FetchOptions& options) {
  nlohmann::json body;
  body["input"] = nlohmann::json::array();
  body["ids"] = nlohmann::json::array();
  for (std::size_t i = begin; i < end; ++i) {
    body["input"].push_back(prompts[i].prompt_text);
    body["ids"].push_back(prompts[i].news_id);
  }

  httplib::Client client(ep.base);
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_write_timeout(options.timeout);
  httplib::Headers headers;
  if (!options.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + options.bearer_token);
  }
  auto res = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransientError("connection failure: " + httplib::to_string(res.error()));
  }
  if (res->status >= 500) {
    throw TransientError("server returned HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw RuntimeFailure("embedding endpoint returned HTTP " +
                         std::to_string(res->status) + " for ids [" +
                         MissingIds(prompts, begin, end) + "]");
  }

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("unparseable embedding response: ") + e.what());
  }
  if (!reply.is_object() || !reply.contains("embeddings") ||
      !reply["embeddings"].is_array()) {
    throw DataError("embedding response lacks an \"embeddings\" array");
  }
  const auto& rows = reply["embeddings"];
  const std::size_t expected = end - begin;
  if (rows.size() != expected) {
    const std::size_t got = std::min(rows.size(), expected);
    throw DataError("embedding count mismatch: sent " + std::to_string(expected) +
                    ", received " + std::to_string(rows.size()) +
                    "; missing ids [" + MissingIds(prompts, begin + got, end) +
                    "]");
  }
  BatchResult out;
  out.vectors.reserve(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    const auto& row = rows[i];
    if (!row.is_array()) {
      throw DataError("embedding for id '" + prompts[begin + i].news_id +
                      "' is not an array");
    }
    std::vector<float> vec;
    vec.reserve(row.size());
    for (const auto& v : row) {
      if (!v.is_number()) {
        throw DataError("non-finite component in embedding for id '" +
                        prompts[begin + i].news_id + "'");
      }
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        throw DataError("non-finite component in embedding for id '" +
                        prompts[begin + i].news_id + "'");
      }
      vec.push_back(static_cast<float>(d));
    }
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

BatchResult PostWithRetry(const Endpoint& ep,
                          const std::vector<PromptRecord>& prompts,
                          std::size_t begin, std::size_t end,
                          const FetchOptions& options) {
  auto delay = options.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return PostBatch(ep, prompts, begin, end, options);
    } catch (const TransientError& e) {
      if (attempt >= options.max_attempts) {
        throw RuntimeFailure(std::string(e.what()) + " after " +
                             std::to_string(attempt) +
                             " attempts; missing ids [" +
                             MissingIds(prompts, begin, end) + "]");
      }
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

}  // namespace

EmbeddingTable FetchEmbeddings(const std::string& endpoint,
                               const std::vector<PromptRecord>& prompts,
                               const FetchOptions& options) {
  if (options.batch_size == 0) throw UsageError("batch_size must be positive");
  if (prompts.empty()) return EmbeddingTable(1);
  const Endpoint ep = SplitUrl(endpoint);

  const std::size_t batches =
      (prompts.size() + options.batch_size - 1) / options.batch_size;
  std::vector<std::optional<BatchResult>> results(batches);
  ParallelFor(batches, options.parallelism,
              [&](std::size_t first, std::size_t last, int) {
                for (std::size_t b = first; b < last; ++b) {
                  const std::size_t begin = b * options.batch_size;
                  const std::size_t end =
                      std::min(prompts.size(), begin + options.batch_size);
                  results[b] = PostWithRetry(ep, prompts, begin, end, options);
                }
              });

  const std::size_t dim = results[0]->vectors.at(0).size();
  if (dim == 0) throw DataError("embedding endpoint returned empty vectors");
  EmbeddingTable table(dim);
  std::size_t i = 0;
  for (const auto& batch : results) {
    for (const auto& vec : batch->vectors) {
      table.Add(prompts[i++].news_id, std::span<const float>(vec));
    }
  }
  return table;
}

}  // namespace lecop
