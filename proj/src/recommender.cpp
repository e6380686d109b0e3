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

#include "lecop/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <unordered_map>

#include "json.hpp"
#include "lecop/common.hpp"
#include "lecop/dataset.hpp"

namespace lecop {
namespace {

void XavierFill(Eigen::MatrixXd& m, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  std::uniform_real_distribution<double> u(-limit, limit);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = u(rng);
  }
}

void SoftmaxInPlace(Eigen::Ref<Eigen::VectorXd> v) {
  const double mx = v.maxCoeff();
  v = (v.array() - mx).exp();
  v /= v.sum();
}

struct EncoderCache {
  std::vector<Eigen::MatrixXd> q, k, v, p;  // per head; p is n x n
  Eigen::MatrixXd z;                        // dim x n
  Eigen::MatrixXd t;                        // attention_dim x n
  Eigen::VectorXd w;                        // n
  Eigen::VectorXd u;                        // dim
};

void Forward(const Eigen::MatrixXd& x, const UserEncoderParams& params,
             EncoderCache& c) {
  const auto& s = params.shape;
  const Eigen::Index n = x.cols();
  const double scale = 1.0 / std::sqrt(static_cast<double>(s.head_dim));
  c.q.resize(s.heads);
  c.k.resize(s.heads);
  c.v.resize(s.heads);
  c.p.resize(s.heads);
  c.z.resize(s.dim, n);
  for (int h = 0; h < s.heads; ++h) {
    c.q[h].noalias() = params.query[h] * x;
    c.k[h].noalias() = params.key[h] * x;
    c.v[h].noalias() = params.value[h] * x;
    // Row i of p holds query i's weights over keys.
    c.p[h].noalias() = c.q[h].transpose() * c.k[h];
    c.p[h] *= scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXd row = c.p[h].row(i).transpose();
      SoftmaxInPlace(row);
      c.p[h].row(i) = row.transpose();
    }
    c.z.middleRows(h * s.head_dim, s.head_dim).noalias() =
        c.v[h] * c.p[h].transpose();
  }
  c.t = (params.attn_proj * c.z).array().tanh();
  c.w = c.t.transpose() * params.attn_query;
  SoftmaxInPlace(c.w);
  c.u.noalias() = c.z * c.w;
}

// Accumulates parameter gradients into `grad` and returns d(loss)/dx.
Eigen::MatrixXd Backward(const Eigen::MatrixXd& x, const UserEncoderParams& params,
                         const EncoderCache& c, const Eigen::VectorXd& g_u,
                         UserEncoderParams& grad) {
  const auto& s = params.shape;
  const double scale = 1.0 / std::sqrt(static_cast<double>(s.head_dim));

  // u = z w, w = softmax(t^T q_a), t = tanh(A z)
  Eigen::MatrixXd dz = g_u * c.w.transpose();
  const Eigen::VectorXd dw = c.z.transpose() * g_u;
  const Eigen::VectorXd de = c.w.array() * (dw.array() - c.w.dot(dw));
  grad.attn_query.noalias() += c.t * de;
  const Eigen::MatrixXd dpre =
      (params.attn_query * de.transpose()).array() * (1.0 - c.t.array().square());
  grad.attn_proj.noalias() += dpre * c.z.transpose();
  dz.noalias() += params.attn_proj.transpose() * dpre;

  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (int h = 0; h < s.heads; ++h) {
    const Eigen::MatrixXd d_o = dz.middleRows(h * s.head_dim, s.head_dim);
    const Eigen::MatrixXd dv = d_o * c.p[h];
    const Eigen::MatrixXd dp = d_o.transpose() * c.v[h];
    const Eigen::VectorXd rowdot = (dp.array() * c.p[h].array()).rowwise().sum();
    const Eigen::MatrixXd ds =
        (c.p[h].array() * (dp.colwise() - rowdot).array()).matrix() * scale;
    const Eigen::MatrixXd dq = c.k[h] * ds.transpose();
    const Eigen::MatrixXd dk = c.q[h] * ds;
    grad.query[h].noalias() += dq * x.transpose();
    grad.key[h].noalias() += dk * x.transpose();
    grad.value[h].noalias() += dv * x.transpose();
    dx.noalias() += params.query[h].transpose() * dq;
    dx.noalias() += params.key[h].transpose() * dk;
    dx.noalias() += params.value[h].transpose() * dv;
  }
  return dx;
}

void AddInto(RecommenderModel& dst, const RecommenderModel& src) {
  auto d = dst.Tensors();
  const auto s = src.Tensors();
  for (std::size_t t = 0; t < d.size(); ++t) {
    for (std::size_t i = 0; i < d[t].size(); ++i) d[t][i] += s[t][i];
  }
}

// Writes rows of `m` to a LEC1 file; row ids are "<prefix><row>".
void SaveRows(const Eigen::MatrixXd& m, const std::string& prefix,
              EmbeddingTable& table) {
  std::vector<double> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    table.Add(prefix + std::to_string(r), std::span<const double>(row));
  }
}

Eigen::MatrixXd LoadRows(const EmbeddingTable& table, const std::string& prefix,
                         Eigen::Index rows, Eigen::Index cols) {
  if (static_cast<Eigen::Index>(table.dim()) != cols) {
    throw DataError("checkpoint tensor " + prefix + " has wrong width");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto vec = table.Find(prefix + std::to_string(r));
    if (!vec) throw DataError("checkpoint missing row " + prefix + std::to_string(r));
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = (*vec)[static_cast<std::size_t>(c)];
  }
  return m;
}

}  // namespace

void EncoderShape::Validate() const {
  if (dim < 1 || heads < 1 || head_dim < 1 || attention_dim < 1) {
    throw UsageError("encoder dims must be positive");
  }
  if (heads * head_dim != dim) {
    throw UsageError("heads * head_dim must equal the news vector dim (" +
                     std::to_string(heads) + " * " + std::to_string(head_dim) +
                     " != " + std::to_string(dim) + ")");
  }
}

UserEncoderParams UserEncoderParams::Zeros(const EncoderShape& shape) {
  shape.Validate();
  UserEncoderParams p;
  p.shape = shape;
  for (int h = 0; h < shape.heads; ++h) {
    p.query.push_back(Eigen::MatrixXd::Zero(shape.head_dim, shape.dim));
    p.key.push_back(Eigen::MatrixXd::Zero(shape.head_dim, shape.dim));
    p.value.push_back(Eigen::MatrixXd::Zero(shape.head_dim, shape.dim));
  }
  p.attn_proj = Eigen::MatrixXd::Zero(shape.attention_dim, shape.dim);
  p.attn_query = Eigen::VectorXd::Zero(shape.attention_dim);
  return p;
}

UserEncoderParams UserEncoderParams::Init(const EncoderShape& shape,
                                          std::uint64_t seed) {
  UserEncoderParams p = Zeros(shape);
  std::mt19937_64 rng(seed);
  for (int h = 0; h < shape.heads; ++h) {
    XavierFill(p.query[h], rng);
    XavierFill(p.key[h], rng);
    XavierFill(p.value[h], rng);
  }
  XavierFill(p.attn_proj, rng);
  Eigen::MatrixXd q(shape.attention_dim, 1);
  XavierFill(q, rng);
  p.attn_query = q.col(0);
  return p;
}

RecommenderModel RecommenderModel::Init(const EncoderShape& shape,
                                        std::size_t llm_dim, std::uint64_t seed) {
  return {UserEncoderParams::Init(shape, DeriveSeed(seed, "encoder")),
          ProjectionParams::Init(static_cast<std::size_t>(shape.dim), llm_dim,
                                 DeriveSeed(seed, "projection"))};
}

RecommenderModel RecommenderModel::ZerosLike(const RecommenderModel& model) {
  RecommenderModel z;
  z.encoder = UserEncoderParams::Zeros(model.encoder.shape);
  z.projection.weight =
      Eigen::MatrixXd::Zero(model.projection.weight.rows(), model.projection.weight.cols());
  z.projection.bias = Eigen::VectorXd::Zero(model.projection.bias.size());
  return z;
}

std::vector<std::span<double>> RecommenderModel::Tensors() {
  std::vector<std::span<double>> out;
  const auto add = [&out](auto& m) {
    out.emplace_back(m.data(), static_cast<std::size_t>(m.size()));
  };
  for (auto& m : encoder.query) add(m);
  for (auto& m : encoder.key) add(m);
  for (auto& m : encoder.value) add(m);
  add(encoder.attn_proj);
  add(encoder.attn_query);
  add(projection.weight);
  add(projection.bias);
  return out;
}

std::vector<std::span<const double>> RecommenderModel::Tensors() const {
  auto spans = const_cast<RecommenderModel*>(this)->Tensors();
  return {spans.begin(), spans.end()};
}

Eigen::VectorXd EncodeUser(const Eigen::MatrixXd& clicked,
                           const UserEncoderParams& params) {
  if (clicked.rows() != params.shape.dim) {
    throw DataError("encode_user: vector length " + std::to_string(clicked.rows()) +
                    " != " + std::to_string(params.shape.dim));
  }
  if (clicked.cols() == 0) return Eigen::VectorXd::Zero(params.shape.dim);
  EncoderCache cache;
  Forward(clicked, params, cache);
  return cache.u;
}

Eigen::VectorXd PoolingWeights(const Eigen::MatrixXd& clicked,
                               const UserEncoderParams& params) {
  if (clicked.cols() == 0) return Eigen::VectorXd();
  EncoderCache cache;
  Forward(clicked, params, cache);
  return cache.w;
}

double Score(const Eigen::VectorXd& user, const Eigen::VectorXd& candidate) {
  if (user.size() != candidate.size()) {
    throw DataError("score: length mismatch " + std::to_string(user.size()) +
                    " vs " + std::to_string(candidate.size()));
  }
  return user.dot(candidate);
}

void TrainConfig::Validate() const {
  if (negatives < 1) throw UsageError("train negatives must be >= 1");
  if (batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (!(learning_rate >= 0.0)) throw UsageError("learning_rate must be >= 0");
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (max_history < 1) throw UsageError("max_history must be >= 1");
}

std::vector<std::size_t> ResolveHistory(const Impression& impression,
                                        const NewsFeatures& features,
                                        int max_history) {
  std::vector<std::size_t> out;
  for (const auto& id : impression.history) {
    const auto idx = features.IndexOf(id);
    if (idx >= 0) out.push_back(static_cast<std::size_t>(idx));
  }
  const auto keep = static_cast<std::size_t>(max_history);
  if (out.size() > keep) out.erase(out.begin(), out.end() - static_cast<std::ptrdiff_t>(keep));
  return out;
}

std::vector<TrainingGroup> BuildGroups(const std::vector<Impression>& impressions,
                                       const NewsFeatures& features,
                                       const TrainConfig& cfg,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> any_item(
      0, features.size() > 0 ? features.size() - 1 : 0);
  std::vector<TrainingGroup> groups;
  for (const auto& imp : impressions) {
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    for (const auto& c : imp.candidates) {
      const auto idx = features.IndexOf(c.news_id);
      if (idx < 0) continue;
      (c.label ? positives : negatives).push_back(static_cast<std::size_t>(idx));
    }
    if (positives.empty()) continue;
    const auto history = ResolveHistory(imp, features, cfg.max_history);
    for (const std::size_t pos : positives) {
      TrainingGroup g;
      g.history = history;
      g.candidates.push_back(pos);
      std::vector<std::size_t> pool = negatives;
      const auto k = static_cast<std::size_t>(cfg.negatives);
      if (pool.size() > k) {
        // Partial Fisher-Yates: first k entries become the sample.
        for (std::size_t i = 0; i < k; ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
          std::swap(pool[i], pool[pick(rng)]);
        }
        pool.resize(k);
      }
      g.candidates.insert(g.candidates.end(), pool.begin(), pool.end());
      while (g.candidates.size() < k + 1 && features.size() > 1) {
        const std::size_t item = any_item(rng);
        if (item != pos) g.candidates.push_back(item);
      }
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

double GroupLoss(const RecommenderModel& model, const NewsFeatures& features,
                 std::span<const TrainingGroup> groups, RecommenderModel* grad) {
  if (groups.empty()) return 0.0;
  // Fused vectors for every item touched by the batch.
  std::vector<std::size_t> items;
  for (const auto& g : groups) {
    items.insert(items.end(), g.history.begin(), g.history.end());
    items.insert(items.end(), g.candidates.begin(), g.candidates.end());
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  std::unordered_map<std::size_t, Eigen::Index> column;
  for (std::size_t i = 0; i < items.size(); ++i) {
    column.emplace(items[i], static_cast<Eigen::Index>(i));
  }
  const Eigen::MatrixXd fused = features.Fused(items, model.projection);
  const Eigen::Index dim = fused.rows();
  const double inv_groups = 1.0 / static_cast<double>(groups.size());

  Eigen::MatrixXd g_fused;
  if (grad) g_fused = Eigen::MatrixXd::Zero(dim, fused.cols());

  double total = 0.0;
  EncoderCache cache;
  for (const auto& g : groups) {
    Eigen::MatrixXd x(dim, static_cast<Eigen::Index>(g.history.size()));
    for (std::size_t i = 0; i < g.history.size(); ++i) {
      x.col(static_cast<Eigen::Index>(i)) = fused.col(column.at(g.history[i]));
    }
    Eigen::MatrixXd cand(dim, static_cast<Eigen::Index>(g.candidates.size()));
    for (std::size_t i = 0; i < g.candidates.size(); ++i) {
      cand.col(static_cast<Eigen::Index>(i)) = fused.col(column.at(g.candidates[i]));
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    if (x.cols() > 0) {
      Forward(x, model.encoder, cache);
      u = cache.u;
    }
    Eigen::VectorXd scores = cand.transpose() * u;
    const double mx = scores.maxCoeff();
    const double log_z = mx + std::log((scores.array() - mx).exp().sum());
    total += log_z - scores[0];
    if (!grad) continue;

    Eigen::VectorXd ds = (scores.array() - log_z).exp();
    ds[0] -= 1.0;
    ds *= inv_groups;
    const Eigen::VectorXd g_u = cand * ds;
    for (std::size_t i = 0; i < g.candidates.size(); ++i) {
      g_fused.col(column.at(g.candidates[i])) += ds[static_cast<Eigen::Index>(i)] * u;
    }
    if (x.cols() > 0) {
      const Eigen::MatrixXd dx = Backward(x, model.encoder, cache, g_u, grad->encoder);
      for (std::size_t i = 0; i < g.history.size(); ++i) {
        g_fused.col(column.at(g.history[i])) += dx.col(static_cast<Eigen::Index>(i));
      }
    }
  }
  if (grad) {
    // fused = W llm + b + cooc
    Eigen::MatrixXd llm(features.llm().rows(), fused.cols());
    for (std::size_t i = 0; i < items.size(); ++i) {
      llm.col(static_cast<Eigen::Index>(i)) =
          features.llm().col(static_cast<Eigen::Index>(items[i]));
    }
    grad->projection.weight.noalias() += g_fused * llm.transpose();
    grad->projection.bias += g_fused.rowwise().sum();
  }
  return total * inv_groups;
}

TrainResult Train(const std::vector<Impression>& impressions,
                  const NewsFeatures& features, RecommenderModel init,
                  const TrainConfig& cfg) {
  cfg.Validate();
  if (BuildGroups(impressions, features, cfg, cfg.seed).empty()) {
    throw DataError("training corpus has no resolvable positive examples");
  }
  TrainResult result{std::move(init), {}};
  RecommenderModel& model = result.model;
  auto params = model.Tensors();
  std::vector<std::vector<double>> m1, m2;
  for (const auto& t : params) {
    m1.emplace_back(t.size(), 0.0);
    m2.emplace_back(t.size(), 0.0);
  }
  long step = 0;
  const int threads = std::max(1, cfg.threads);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const std::uint64_t epoch_seed = DeriveSeed(cfg.seed, static_cast<std::uint64_t>(epoch));
    auto groups = BuildGroups(impressions, features, cfg, DeriveSeed(epoch_seed, "groups"));
    std::mt19937_64 shuffle_rng(DeriveSeed(epoch_seed, "shuffle"));
    std::shuffle(groups.begin(), groups.end(), shuffle_rng);

    double loss_sum = 0.0;
    const auto batch = static_cast<std::size_t>(cfg.batch_size);
    for (std::size_t begin = 0; begin < groups.size(); begin += batch) {
      const std::size_t end = std::min(groups.size(), begin + batch);
      const std::span<const TrainingGroup> all(groups.data() + begin, end - begin);
      const double weight_total = static_cast<double>(all.size());

      const int chunks = static_cast<int>(std::min<std::size_t>(all.size(), threads));
      std::vector<RecommenderModel> partial_grad;
      for (int c = 0; c < chunks; ++c) partial_grad.push_back(RecommenderModel::ZerosLike(model));
      std::vector<double> partial_loss(static_cast<std::size_t>(chunks), 0.0);
      ParallelFor(all.size(), chunks, [&](std::size_t b, std::size_t e, int c) {
        const auto part = all.subspan(b, e - b);
        // GroupLoss averages over its part; rescale to the batch mean.
        RecommenderModel g = RecommenderModel::ZerosLike(model);
        const double frac = static_cast<double>(part.size()) / weight_total;
        partial_loss[c] = GroupLoss(model, features, part, &g) * frac;
        for (auto& t : g.Tensors()) {
          for (double& v : t) v *= frac;
        }
        partial_grad[c] = std::move(g);
      });
      RecommenderModel grad = RecommenderModel::ZerosLike(model);
      double batch_loss = 0.0;
      for (int c = 0; c < chunks; ++c) {
        AddInto(grad, partial_grad[c]);
        batch_loss += partial_loss[c];
      }
      loss_sum += batch_loss * weight_total;

      ++step;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      const auto grads = grad.Tensors();
      for (std::size_t t = 0; t < params.size(); ++t) {
        for (std::size_t i = 0; i < params[t].size(); ++i) {
          const double g = grads[t][i];
          m1[t][i] = cfg.beta1 * m1[t][i] + (1.0 - cfg.beta1) * g;
          m2[t][i] = cfg.beta2 * m2[t][i] + (1.0 - cfg.beta2) * g * g;
          const double mhat = m1[t][i] / bc1;
          const double vhat = m2[t][i] / bc2;
          params[t][i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
        }
      }
    }
    result.epoch_loss.push_back(groups.empty() ? 0.0
                                               : loss_sum / static_cast<double>(groups.size()));
  }
  return result;
}

std::vector<ScoredCandidate> Predict(const Impression& impression,
                                     const RecommenderModel& model,
                                     const NewsFeatures& features,
                                     int max_history, bool strict) {
  const auto history = ResolveHistory(impression, features, max_history);
  const Eigen::Index dim = model.encoder.shape.dim;
  Eigen::VectorXd user = Eigen::VectorXd::Zero(dim);
  if (!history.empty()) {
    user = EncodeUser(features.Fused(history, model.projection), model.encoder);
  }
  std::vector<ScoredCandidate> out;
  out.reserve(impression.candidates.size());
  for (const auto& c : impression.candidates) {
    const auto idx = features.IndexOf(c.news_id);
    if (idx < 0) {
      if (strict) throw DataError("unresolvable candidate id " + c.news_id);
      out.push_back({c.news_id, 0.0});
      continue;
    }
    out.push_back({c.news_id,
                   Score(user, features.Fused(static_cast<std::size_t>(idx), model.projection))});
  }
  return out;
}

void SaveCheckpoint(const RecommenderModel& model, const std::string& dir,
                    const std::string& config_json) {
  std::filesystem::create_directories(dir);
  const auto& e = model.encoder;
  const auto& s = e.shape;
  const auto save_heads = [&](const std::vector<Eigen::MatrixXd>& heads,
                              const std::string& name) {
    EmbeddingTable t(static_cast<std::size_t>(s.dim));
    for (int h = 0; h < s.heads; ++h) SaveRows(heads[h], "h" + std::to_string(h) + "/", t);
    SaveEmbeddings(t, dir + "/" + name + ".lec1");
  };
  save_heads(e.query, "encoder_query");
  save_heads(e.key, "encoder_key");
  save_heads(e.value, "encoder_value");
  {
    EmbeddingTable t(static_cast<std::size_t>(s.dim));
    SaveRows(e.attn_proj, "", t);
    SaveEmbeddings(t, dir + "/attn_proj.lec1");
  }
  {
    EmbeddingTable t(static_cast<std::size_t>(s.attention_dim));
    SaveRows(e.attn_query.transpose(), "", t);
    SaveEmbeddings(t, dir + "/attn_query.lec1");
  }
  {
    EmbeddingTable t(static_cast<std::size_t>(model.projection.weight.cols()));
    SaveRows(model.projection.weight, "", t);
    SaveEmbeddings(t, dir + "/proj_weight.lec1");
  }
  {
    EmbeddingTable t(static_cast<std::size_t>(s.dim));
    SaveRows(model.projection.bias.transpose(), "", t);
    SaveEmbeddings(t, dir + "/proj_bias.lec1");
  }
  nlohmann::ordered_json header;
  header["format"] = "lecop-checkpoint-1";
  header["dtype"] = "float32";
  header["shape"] = {{"dim", s.dim},
                     {"heads", s.heads},
                     {"head_dim", s.head_dim},
                     {"attention_dim", s.attention_dim},
                     {"llm_dim", model.projection.weight.cols()}};
  header["tensors"] = {
      {"encoder_query", {s.heads * s.head_dim, s.dim}},
      {"encoder_key", {s.heads * s.head_dim, s.dim}},
      {"encoder_value", {s.heads * s.head_dim, s.dim}},
      {"attn_proj", {s.attention_dim, s.dim}},
      {"attn_query", {1, s.attention_dim}},
      {"proj_weight", {s.dim, model.projection.weight.cols()}},
      {"proj_bias", {1, s.dim}}};
  header["config"] = config_json.empty() ? nlohmann::ordered_json::object()
                                         : nlohmann::ordered_json::parse(config_json);
  WriteFile(dir + "/checkpoint.json", header.dump(2) + "\n");
}

RecommenderModel LoadCheckpoint(const std::string& dir) {
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(ReadFile(dir + "/checkpoint.json"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(dir + "/checkpoint.json: " + e.what());
  }
  EncoderShape s;
  Eigen::Index llm_dim = 0;
  try {
    const auto& sh = header.at("shape");
    s.dim = sh.at("dim").get<int>();
    s.heads = sh.at("heads").get<int>();
    s.head_dim = sh.at("head_dim").get<int>();
    s.attention_dim = sh.at("attention_dim").get<int>();
    llm_dim = sh.at("llm_dim").get<Eigen::Index>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(dir + "/checkpoint.json: bad shape block: " + e.what());
  }
  s.Validate();
  RecommenderModel m;
  m.encoder = UserEncoderParams::Zeros(s);
  const auto load_heads = [&](std::vector<Eigen::MatrixXd>& heads, const std::string& name) {
    const auto t = LoadEmbeddings(dir + "/" + name + ".lec1");
    for (int h = 0; h < s.heads; ++h) {
      heads[h] = LoadRows(t, "h" + std::to_string(h) + "/", s.head_dim, s.dim);
    }
  };
  load_heads(m.encoder.query, "encoder_query");
  load_heads(m.encoder.key, "encoder_key");
  load_heads(m.encoder.value, "encoder_value");
  m.encoder.attn_proj =
      LoadRows(LoadEmbeddings(dir + "/attn_proj.lec1"), "", s.attention_dim, s.dim);
  m.encoder.attn_query =
      LoadRows(LoadEmbeddings(dir + "/attn_query.lec1"), "", 1, s.attention_dim).row(0).transpose();
  m.projection.weight = LoadRows(LoadEmbeddings(dir + "/proj_weight.lec1"), "", s.dim, llm_dim);
  m.projection.bias =
      LoadRows(LoadEmbeddings(dir + "/proj_bias.lec1"), "", 1, s.dim).row(0).transpose();
  return m;
}

}  // namespace lecop
