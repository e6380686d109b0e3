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

#include "lecop/prompts.hpp"

#include <random>

#include "json.hpp"
#include "lecop/common.hpp"
#include "lecop/dataset.hpp"

namespace lecop {
namespace {

std::string ContentBlock(const NewsItem& item) {
  return "category : " + item.category + "\nsubcategory : " + item.subcategory +
         "\ntitle : " + item.title + "\nabstract : " + item.abstract;
}

}  // namespace

TripleSet BuildContrastiveTriples(const std::vector<NewsItem>& news,
                                  std::uint64_t seed) {
  std::vector<const NewsItem*> eligible;
  TripleSet out;
  for (const auto& item : news) {
    if (item.abstract.empty()) {
      ++out.skipped_empty_abstract;
    } else {
      eligible.push_back(&item);
    }
  }
  if (eligible.size() < 2) {
    throw DataError("contrastive triples need at least 2 items with abstracts, got " +
                    std::to_string(eligible.size()));
  }

  const std::size_t n = eligible.size();
  for (std::size_t i = 0; i < n; ++i) {
    const NewsItem& self = *eligible[i];
    std::mt19937_64 rng(DeriveSeed(seed, i));
    std::uniform_int_distribution<std::size_t> pick(0, n - 2);
    const NewsItem* negative = nullptr;
    for (int attempt = 0; attempt < 64 && negative == nullptr; ++attempt) {
      std::size_t j = pick(rng);
      if (j >= i) ++j;
      if (eligible[j]->abstract != self.abstract) negative = eligible[j];
    }
    if (negative == nullptr) {
      // Heavy abstract duplication: scan from a random offset instead.
      const std::size_t start = pick(rng);
      for (std::size_t k = 0; k < n && negative == nullptr; ++k) {
        const std::size_t j = (start + k) % n;
        if (j != i && eligible[j]->abstract != self.abstract) negative = eligible[j];
      }
    }
    if (negative == nullptr) {
      ++out.skipped_no_distinct_negative;
      continue;
    }
    out.triples.push_back({self.title, self.abstract, negative->abstract,
                           self.news_id, negative->news_id});
  }
  return out;
}

PromptRecord BuildEmbeddingPrompt(const NewsItem& item, bool echo) {
  const std::string block = ContentBlock(item);
  std::string text = std::string(kEmbeddingInstruction) + "\n" + block;
  if (echo) text += "\n" + block;
  return {item.news_id, std::move(text)};
}

PromptRecord BuildKeywordPrompt(const NewsItem& item) {
  return {item.news_id, std::string(kKeywordInstruction) + "\n" + item.title +
                            "\n" + item.abstract};
}

std::string TriplesToJsonl(const std::vector<ContrastiveTriple>& triples) {
  std::string out;
  for (const auto& t : triples) {
    nlohmann::ordered_json j = {
        {"query", t.query}, {"positive", t.positive}, {"negative", t.negative}};
    out += j.dump() + '\n';
  }
  return out;
}

std::string PromptsToJsonl(const std::vector<PromptRecord>& prompts) {
  std::string out;
  for (const auto& p : prompts) {
    nlohmann::ordered_json j = {{"news_id", p.news_id}, {"prompt", p.prompt_text}};
    out += j.dump() + '\n';
  }
  return out;
}

std::vector<PromptRecord> ParsePromptsJsonl(std::string_view text) {
  std::vector<PromptRecord> out;
  std::size_t line_no = 0;
  for (std::string_view line : SplitView(text, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("news_id").get<std::string>(),
                     j.at("prompt").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw DataError("prompts line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string PromptTemplatesJson(bool echo) {
  nlohmann::ordered_json j = {
      {"retrieval_instruction", kRetrievalInstruction},
      {"embedding_instruction", kEmbeddingInstruction},
      {"embedding_content_lines",
       {"category : {category}", "subcategory : {subcategory}",
        "title : {title}", "abstract : {abstract}"}},
      {"echo", echo},
      {"echo_rule", "content lines repeated once; instruction not repeated"},
      {"keyword_instruction", kKeywordInstruction},
      {"keyword_layout", "{instruction}\\n{title}\\n{abstract}"}};
  return j.dump(2) + "\n";
}

}  // namespace lecop
