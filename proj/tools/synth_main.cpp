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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lecop/common.hpp"
#include "lecop/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a planted-preference synthetic corpus"};
  std::string out_dir;
  lecop::SyntheticOptions o;
  app.add_option("out_dir", out_dir, "Output directory")->required();
  app.add_option("--seed", o.seed, "Generator seed");
  app.add_option("--users", o.users, "Number of users");
  app.add_option("--news", o.news, "Number of news items");
  app.add_option("--cold-news", o.cold_news, "Items held out of all training data");
  app.add_option("--llm-signal", o.llm_signal, "Topic component of the LLM vectors");
  CLI11_PARSE(app, argc, argv);
  try {
    lecop::WriteSynthetic(lecop::GenerateSynthetic(o), o, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "lecop_synth: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
