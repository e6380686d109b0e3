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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "lecop/common.hpp"
#include "lecop/cooccur.hpp"
#include "lecop/dataset.hpp"
#include "lecop/embeddings.hpp"
#include "lecop/fusion.hpp"
#include "lecop/keywords.hpp"
#include "lecop/metrics.hpp"
#include "lecop/node2vec.hpp"
#include "lecop/pipeline.hpp"
#include "lecop/synthetic.hpp"
#include "support/mock_server.hpp"
#include "support/oracles.hpp"

namespace lecop {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int Cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "lecop");
  std::ostringstream o, e;
  const int code = RunCli(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::fprintf(stderr, "%s", e.str().c_str());
  return code;
}

// ---------------------------------------------------------------------------

Outcome TwoItemGraphs() {
  Outcome r;
  testing::TempDir dir;
  WriteFile(dir / "news.tsv", SerializeNews({{"News2", "c", "s", "t2", ""},
                                             {"News3", "c", "s", "t3", ""}}));
  Impression imp{"1", "U1", "", {"News2", "News3"}, {{"News2", 1}, {"News3", 0}}};
  WriteFile(dir / "behaviors.tsv", SerializeBehaviors({imp}));
  WriteFile(dir / "keywords.jsonl",
            SerializeKeywords({{"News2", {"keyword1"}}, {"News3", {"keyword4", "keyword5"}}}));
  WriteFile(dir / "lecop.conf",
            "train_news = news.tsv\ntrain_behaviors = behaviors.tsv\nkeywords = keywords.jsonl\n"
            "window = 2\n");
  r.Check(Cli({"--config", dir / "lecop.conf", "--threads", "1", "graphs"}) == 0, "graphs failed");
  if (!r.pass) return r;

  using Edges = std::vector<std::tuple<std::string, std::string, std::uint64_t>>;
  const Edges expect[3] = {
      {{"id:News2", "id:News3", 1}},
      {{"kw:keyword1", "kw:keyword4", 1}, {"kw:keyword1", "kw:keyword5", 1}},
      {{"kw:keyword4", "kw:keyword5", 1}}};
  for (int k = 0; k < 3; ++k) {
    const auto g = ParseGraph(ReadFile(dir / ("work/" + std::string(kGraphFiles[k]))));
    Edges got;
    for (const auto& e : g.Edges()) got.emplace_back(e.a, e.b, e.weight);
    r.Check(got == expect[k], std::string(kGraphFiles[k]) + " edges differ");
  }
  return r;
}

Outcome PairOracle() {
  Outcome r;
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> len(0, 12), item(0, 9), nkw(0, 3), kw(0, 11);
  auto counts = [](const PairMultiset& m) {
    testing::PairCounts out;
    for (const auto& [a, b, c] : m.Sorted()) out[{a, b}] = c;
    return out;
  };
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> history;
    for (int i = len(rng); i > 0; --i) history.push_back("n" + std::to_string(item(rng)));
    KeywordMap keywords;
    for (int i = 0; i < 10; ++i) {
      std::vector<std::string> ks;
      for (int k = nkw(rng); k > 0; --k) {
        const std::string t = "k" + std::to_string(kw(rng));
        if (std::find(ks.begin(), ks.end(), t) == ks.end()) ks.push_back(t);
      }
      if (!ks.empty()) keywords["n" + std::to_string(i)] = ks;
    }
    const int window = 2 + trial % 3;
    const auto got = ExtractPairs(history, {window}, keywords);
    const auto ref = testing::BruteForcePairs(history, window, keywords);
    if (counts(got.id_id) != ref.id_id || counts(got.item_item_kw) != ref.item_item_kw ||
        counts(got.intra_kw) != ref.intra_kw) {
      ++mismatches;
    }
  }
  r.Check(mismatches == 0, std::to_string(mismatches) + " of 200 histories differ");
  return r;
}

Outcome TransitionLaw() {
  Outcome r;
  node2vec::WalkConfig cfg;
  cfg.p = 2.0;
  cfg.q = 0.5;
  auto named = [](const WeightedGraph& g, const std::vector<node2vec::WeightedNeighbor>& w) {
    std::map<std::string, double> out;
    for (const auto& n : w) out[g.node(n.node)] = n.weight;
    return out;
  };
  auto idx = [](const WeightedGraph& g, const char* s) {
    return static_cast<std::uint32_t>(g.IndexOf(s));
  };
  const WeightedGraph path({}, {{"A", "B", 1}, {"B", "C", 1}});
  r.Check(named(path, TransitionWeights(path, idx(path, "A"), idx(path, "B"), cfg)) ==
              std::map<std::string, double>{{"A", 0.5}, {"C", 2.0}},
          "path weights");
  const WeightedGraph tri({}, {{"A", "B", 1}, {"B", "C", 1}, {"A", "C", 1}});
  r.Check(named(tri, TransitionWeights(tri, idx(tri, "A"), idx(tri, "B"), cfg)) ==
              std::map<std::string, double>{{"A", 0.5}, {"C", 1.0}},
          "triangle weights");

  const WeightedGraph star({}, {{"c", "l1", 1}, {"c", "l2", 2}, {"c", "l3", 3}, {"c", "l4", 4}});
  node2vec::WalkConfig wc;
  wc.walk_length = 2;
  wc.walks_per_node = 10000;
  wc.seed = 11;
  const auto walks = node2vec::GenerateWalks(star, wc, 1);
  std::map<std::uint32_t, double> freq;
  double n = 0;
  for (const auto& w : walks) {
    if (w[0] != idx(star, "c")) continue;
    freq[w[1]] += 1;
    n += 1;
  }
  for (int leaf = 1; leaf <= 4; ++leaf) {
    const double p = leaf / 10.0;
    const double sigma = std::sqrt(n * p * (1 - p));
    const std::string name = "l" + std::to_string(leaf);
    r.Check(std::abs(freq[idx(star, name.c_str())] - n * p) <= 3 * sigma,
            name + " frequency outside 3 sigma");
  }
  return r;
}

Outcome SgnsGradient() {
  Outcome r;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 9, k = 1 + trial % 5;
    std::vector<double> flat(static_cast<std::size_t>((2 + k) * dim));
    for (auto& x : flat) x = g(rng);
    const auto views = [&](const std::vector<double>& x) {
      std::vector<std::span<const double>> ns;
      for (int i = 0; i < k; ++i) ns.emplace_back(x.data() + (2 + i) * dim, dim);
      return ns;
    };
    const auto loss = [&](const std::vector<double>& x) {
      return node2vec::PairLoss(std::span<const double>(x.data(), dim),
                                std::span<const double>(x.data() + dim, dim), views(x));
    };
    const auto grad = node2vec::PairLossGradient(std::span<const double>(flat.data(), dim),
                                                 std::span<const double>(flat.data() + dim, dim),
                                                 views(flat));
    std::vector<double> analytic(grad.center);
    analytic.insert(analytic.end(), grad.context.begin(), grad.context.end());
    for (const auto& gn : grad.negatives) analytic.insert(analytic.end(), gn.begin(), gn.end());
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double fd = testing::CentralDifference(loss, flat, i, 1e-4);
      worst = std::max(worst, testing::RelativeError(analytic[i], fd));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max relative error %.2e", worst);
  r.Check(worst < 1e-3, buf);
  if (r.pass) r.detail = buf;
  return r;
}

Outcome MetricOracle() {
  Outcome r;
  const std::vector<double> s0 = {0.9, 0.8, 0.7};
  const std::vector<int> y0 = {0, 1, 0};
  r.Check(Auc(s0, y0) == 0.5, "worked AUC");
  r.Check(Mrr(s0, y0) == 0.5, "worked MRR");
  r.Check(std::abs(NdcgAt(s0, y0, 5) - 0.6309) <= 1e-4, "worked nDCG@5");

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(2, 40), level(0, 4);
  std::normal_distribution<double> g(0.0, 1.0);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = len(rng);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = trial % 2 ? g(rng) : level(rng);
      y[i] = rng() % 3 == 0;
    }
    y[0] = 1;
    y[n - 1] = 0;
    if (std::abs(Auc(s, y) - testing::BruteAuc(s, y)) > 1e-12 ||
        Mrr(s, y) != testing::BruteMrr(s, y) ||
        NdcgAt(s, y, 5) != testing::BruteNdcg(s, y, 5) ||
        NdcgAt(s, y, 10) != testing::BruteNdcg(s, y, 10)) {
      ++bad;
    }
  }
  r.Check(bad == 0, std::to_string(bad) + " of 1000 instances differ");
  return r;
}

Outcome FusionAlgebra() {
  Outcome r;
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1.0);
  auto vec = [&](Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = g(rng);
    return v;
  };
  double worst_lin = 0.0, worst_zero = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d1 = 1 + trial % 3, d2 = 1 + trial % 4, d3 = 1 + trial % 5;
    const auto out = static_cast<Eigen::Index>(d1 + d2 + d3);
    const Eigen::Index in = 1 + trial % 11;
    ProjectionParams p = ProjectionParams::Init(static_cast<std::size_t>(out),
                                                static_cast<std::size_t>(in), rng());
    p.bias = vec(out);
    const auto a = vec(in), b = vec(in), c1 = vec(out), c2 = vec(out);
    const double s = g(rng);
    // Affine in (llm, cooc) jointly.
    const Eigen::VectorXd lhs = Fuse(s * a + b, s * c1 + c2, p);
    const Eigen::VectorXd rhs = s * Fuse(a, c1, p) + Fuse(b, c2, p) - s * p.bias;
    worst_lin = std::max(worst_lin, (lhs - rhs).cwiseAbs().maxCoeff());

    // An item with no LLM vector and absent from every graph maps to zero
    // under a bias-free projection.
    p.bias.setZero();
    const CoocEmbeddingSet cooc{EmbeddingTable(d1), EmbeddingTable(d2), EmbeddingTable(d3)};
    const auto zc = AssembleCooc("unseen", cooc, {});
    worst_zero = std::max(worst_zero, zc.cwiseAbs().maxCoeff());
    worst_zero = std::max(worst_zero,
                          Fuse(Eigen::VectorXd::Zero(in), zc, p).cwiseAbs().maxCoeff());
  }
  r.Check(worst_lin <= 1e-6, "linearity error " + FormatDouble(worst_lin));
  r.Check(worst_zero <= 1e-6, "zero fallback error " + FormatDouble(worst_zero));
  return r;
}

// ---------------------------------------------------------------------------
// Synthetic end-to-end criteria share one trained work dir.

struct SyntheticRun {
  testing::TempDir dir;
  std::string conf;
  bool ok = false;
};

double EvalAuc(const std::string& conf, const std::vector<std::string>& sets,
               std::string* failure) {
  std::vector<std::string> args = {"--config", conf, "--threads", "1"};
  for (const auto& s : sets) {
    args.push_back("--set");
    args.push_back(s);
  }
  args.push_back("evaluate");
  if (Cli(args) != 0) {
    *failure = "evaluate failed";
    return NAN;
  }
  std::string work;
  for (const auto& s : sets) {
    if (s.rfind("work_dir=", 0) == 0) work = s.substr(9);
  }
  if (work.empty()) work = (fs::path(conf).parent_path() / "work").string();
  return Json::parse(ReadFile(work + "/reports/eval.json"))["auc"].get<double>();
}

bool RunAll(const std::string& conf, const std::vector<std::string>& sets,
            const std::vector<std::string>& commands) {
  for (const auto& cmd : commands) {
    std::vector<std::string> args = {"--config", conf, "--threads", "1"};
    for (const auto& s : sets) {
      args.push_back("--set");
      args.push_back(s);
    }
    args.push_back(cmd);
    if (Cli(args) != 0) return false;
  }
  return true;
}

Outcome SyntheticLearning(SyntheticRun& run) {
  Outcome r;
  const SyntheticOptions o;
  WriteSynthetic(GenerateSynthetic(o), o, run.dir.path().string());
  run.conf = run.dir / "lecop.conf";
  run.ok = RunAll(run.conf, {}, {"stats", "prompts", "graphs", "embed-graphs", "train"});
  r.Check(run.ok, "pipeline failed");
  if (!run.ok) return r;
  std::string failure;
  const double trained = EvalAuc(run.conf, {}, &failure);

  // Random-init checkpoint: the same pipeline with zero training epochs.
  const std::string rand_work = run.dir / "work_random";
  fs::copy(run.dir / "work", rand_work, fs::copy_options::recursive);
  const std::vector<std::string> rand_sets = {"work_dir=" + rand_work, "train.epochs=0"};
  r.Check(RunAll(run.conf, rand_sets, {"train"}), "random-init train failed");
  const double random = EvalAuc(run.conf, rand_sets, &failure);
  r.Check(failure.empty(), failure);
  r.Check(trained >= 0.85, "trained AUC below 0.85");
  r.Check(std::abs(random - 0.5) <= 0.1, "random-init AUC outside 0.5 +/- 0.1");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "trained AUC %.4f, random-init AUC %.4f", trained, random);
  r.detail = r.detail.empty() ? buf : std::string(buf) + "; " + r.detail;
  return r;
}

Outcome ColdStart(SyntheticRun& run) {
  Outcome r;
  if (!run.ok) {
    r.Check(false, "synthetic pipeline unavailable");
    return r;
  }
  const PipelineConfig cfg = LoadConfig(run.conf);
  CoocEmbeddingSet cooc{LoadEmbeddings(cfg.WorkPath(kCoocEmbeddingFiles[0])),
                        LoadEmbeddings(cfg.WorkPath(kCoocEmbeddingFiles[1])),
                        LoadEmbeddings(cfg.WorkPath(kCoocEmbeddingFiles[2]))};
  const KeywordMap keywords = LoadKeywords(cfg.keywords).keywords;
  const auto cold = ParseBehaviors(run.dir / "dev/behaviors_cold.tsv").records;
  const auto train_news = ParseNews(cfg.train_news).records;
  std::unordered_set<std::string> warm;
  for (const auto& n : train_news) warm.insert(n.news_id);
  std::size_t cold_items = 0, with_keyword_segments = 0;
  const auto d0 = static_cast<Eigen::Index>(cooc.id_vecs.dim());
  const auto d1 = static_cast<Eigen::Index>(cooc.item_item_kw_vecs.dim());
  const auto d2 = static_cast<Eigen::Index>(cooc.intra_kw_vecs.dim());
  std::unordered_set<std::string> seen;
  for (const auto& imp : cold) {
    for (const auto& c : imp.candidates) {
      if (warm.count(c.news_id) || !seen.insert(c.news_id).second) continue;
      ++cold_items;
      const auto v = AssembleCooc(c.news_id, cooc, keywords);
      if (v.segment(d0, d1).squaredNorm() > 0 && v.segment(d0 + d1, d2).squaredNorm() > 0) {
        ++with_keyword_segments;
      }
    }
  }
  r.Check(cold_items > 0, "no cold items in dev");
  r.Check(with_keyword_segments == cold_items,
          std::to_string(cold_items - with_keyword_segments) +
              " cold items lack keyword segments");

  const std::string cold_dev = "dev_behaviors=" + (run.dir / "dev/behaviors_cold.tsv");
  std::string failure;
  const double full = EvalAuc(run.conf, {cold_dev}, &failure);
  const std::string abl_work = run.dir / "work_id_only";
  fs::copy(run.dir / "work", abl_work, fs::copy_options::recursive);
  const std::vector<std::string> abl = {"work_dir=" + abl_work, "fusion.keyword_segments=false"};
  r.Check(RunAll(run.conf, abl, {"train"}), "ablation train failed");
  auto abl_eval = abl;
  abl_eval.push_back(cold_dev);
  const double ablation = EvalAuc(run.conf, abl_eval, &failure);
  r.Check(failure.empty(), failure);
  r.Check(full - ablation > 0.02, "margin not above 0.02");
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%zu cold items; cold AUC %.4f vs ID-graph-only %.4f",
                cold_items, full, ablation);
  r.detail = r.detail.empty() ? buf : std::string(buf) + "; " + r.detail;
  return r;
}

std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[fs::relative(e.path(), root).string()] = ReadFile(e.path().string());
    }
  }
  return out;
}

Outcome Determinism() {
  Outcome r;
  testing::MockServer server(testing::Echo);
  SyntheticOptions o;
  o.seed = 99;
  testing::TempDir dir;
  WriteSynthetic(GenerateSynthetic(o), o, dir.path().string());
  const std::string conf = dir / "lecop.conf";
  const std::vector<std::string> fetch_sets = {"embedding.endpoint=" + server.url(),
                                               "llm_embeddings=" + (dir / "work/fetched.lec1")};
  std::vector<std::map<std::string, std::string>> snaps;
  for (int pass = 0; pass < 2; ++pass) {
    bool ok = RunAll(conf, {}, {"stats", "prompts"});
    ok = ok && RunAll(conf, fetch_sets, {"fetch-embeddings"});
    ok = ok && RunAll(conf, {}, {"graphs", "embed-graphs", "train", "evaluate"});
    r.Check(ok, "pass " + std::to_string(pass + 1) + " failed");
    if (!ok) return r;
    snaps.push_back(Snapshot(dir / "work"));
  }
  std::size_t differing = 0;
  for (const auto& [path, bytes] : snaps[0]) {
    const auto it = snaps[1].find(path);
    if (it == snaps[1].end() || it->second != bytes) {
      ++differing;
      r.Check(false, path + " differs");
    }
  }
  r.Check(snaps[0].size() == snaps[1].size(), "artifact sets differ");
  if (r.pass) r.detail = std::to_string(snaps[0].size()) + " artifacts identical";
  return r;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace lecop

int main() {
  using namespace lecop;
  SyntheticRun synthetic;
  const std::vector<Criterion> criteria = {
      {1, "two-item graph example", 1, TwoItemGraphs},
      {2, "pair extraction vs brute force", 10, PairOracle},
      {3, "node2vec transition law", 30, TransitionLaw},
      {4, "SGNS gradient check", 10, SgnsGradient},
      {5, "metric oracle equivalence", 5, MetricOracle},
      {6, "fusion algebra", 5, FusionAlgebra},
      {7, "synthetic end-to-end learning", 300, [&] { return SyntheticLearning(synthetic); }},
      {8, "cold-start keyword segments", 300, [&] { return ColdStart(synthetic); }},
      {9, "determinism with --threads 1", 300, Determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.Check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) {
      o.Check(false, "took longer than " + FormatDouble(c.limit_seconds) + " s");
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s  %s (%.2f s)%s%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                secs, o.detail.empty() ? "" : " - ", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
