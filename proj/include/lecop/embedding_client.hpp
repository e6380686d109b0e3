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

#ifndef LECOP_EMBEDDING_CLIENT_HPP_
#define LECOP_EMBEDDING_CLIENT_HPP_

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

#include "lecop/embeddings.hpp"
#include "lecop/prompts.hpp"

namespace lecop {

struct FetchOptions {
  std::size_t batch_size = 32;
  // Batches in flight at once.
  int parallelism = 1;
  // Total attempts per batch, including the first.
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{60};
  // Sent as "Authorization: Bearer <token>" when non-empty.
  std::string bearer_token;
};

// POSTs {"input": [...], "ids": [...]} per batch to `endpoint` and expects
// {"embeddings": [[...], ...]} back. 5xx responses and connection failures
// are retried with exponential backoff; 4xx responses fail immediately.
// Never returns a partial table: any failure throws, naming the missing ids.
EmbeddingTable FetchEmbeddings(const std::string& endpoint,
                               const std::vector<PromptRecord>& prompts,
                               const FetchOptions& options = {});

}  // namespace lecop

#endif  // LECOP_EMBEDDING_CLIENT_HPP_
