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

#ifndef LECOP_PROMPTS_HPP_
#define LECOP_PROMPTS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lecop {

struct NewsItem;

inline constexpr std::string_view kRetrievalInstruction =
    "Given a news title, retrieve semantically similar abstract:";
inline constexpr std::string_view kEmbeddingInstruction =
    "Given the information of a news, compress it into a maximum of 5 words "
    "for recommendation:";
inline constexpr std::string_view kKeywordInstruction =
    "Given the information of a news, extract one to three keywords (The "
    "keywords must appear in the news information and must be nouns. Please "
    "provide the results in the following format: [keyword1, keyword2, "
    "keyword3]):";

// Title-to-abstract retrieval example for contrastive fine-tuning.
struct ContrastiveTriple {
  std::string query;
  std::string positive;
  std::string negative;
  // Provenance, not serialized.
  std::string news_id;
  std::string negative_id;

  bool operator==(const ContrastiveTriple&) const = default;
};

struct TripleSet {
  std::vector<ContrastiveTriple> triples;
  // Items skipped because their abstract is empty, or because every other
  // abstract is textually identical to theirs.
  std::size_t skipped_empty_abstract = 0;
  std::size_t skipped_no_distinct_negative = 0;
};

struct PromptRecord {
  std::string news_id;
  std::string prompt_text;

  bool operator==(const PromptRecord&) const = default;
};

// One triple per item with a non-empty abstract. The negative is the abstract
// of a uniformly drawn other eligible item; each item's draw uses its own
// stream derived from `seed` and the item index.
TripleSet BuildContrastiveTriples(const std::vector<NewsItem>& news,
                                  std::uint64_t seed);

// Instruction line followed by category/subcategory/title/abstract lines.
// With echo, the four content lines are repeated once more.
PromptRecord BuildEmbeddingPrompt(const NewsItem& item, bool echo);

// Keyword instruction, then the title and abstract on their own lines.
PromptRecord BuildKeywordPrompt(const NewsItem& item);

std::string TriplesToJsonl(const std::vector<ContrastiveTriple>& triples);
std::string PromptsToJsonl(const std::vector<PromptRecord>& prompts);
std::vector<PromptRecord> ParsePromptsJsonl(std::string_view text);
// The instruction strings and echo setting used for a prompt run.
std::string PromptTemplatesJson(bool echo);

}  // namespace lecop

#endif  // LECOP_PROMPTS_HPP_
