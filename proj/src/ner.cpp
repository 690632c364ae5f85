/* Copyright 2026 The dsae Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dsae/ner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bundle.hpp"
#include "dsae/error.hpp"
#include "dsae/evaluate.hpp"
#include "dsae/rng.hpp"

namespace dsae::ner {

namespace {

bool has_digit(std::string_view w) {
  return std::any_of(w.begin(), w.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

bool all_punct(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
  });
}

}  // namespace

std::vector<TokenFeatures> featurize(const NormalizedDoc& doc,
                                     const FeatureContext& ctx) {
  const std::size_t n = doc.tokens.size();
  std::vector<std::string> pos(n);
  for (std::size_t i = 0; i < n; ++i)
    pos[i] = doc.tokens[i].pos.empty() ? normalize::fallback_pos(doc.tokens[i].surface)
                                       : doc.tokens[i].pos;

  std::vector<std::string> lex(n);
  if (ctx.lexicon != nullptr && !ctx.lexicon->empty()) {
    for (const auto& hit : corpus::match_terms(doc.normalized_text, *ctx.lexicon)) {
      bool first = true;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& t = doc.tokens[i];
        if (t.start >= hit.char_start && t.end <= hit.char_end) {
          lex[i] = std::string(to_string(hit.category)) + (first ? ":B" : ":I");
          first = false;
        }
      }
    }
  }

  numeric::Matrix dense;
  std::vector<bool> oov(n, false);
  if (ctx.vectors != nullptr) {
    dense = ctx.vectors->vectors(doc);
    oov = ctx.vectors->oov_flags(doc);
  }

  auto word_at = [&](long i) -> std::string_view {
    if (i < 0) return "<s>";
    if (i >= static_cast<long>(n)) return "</s>";
    return doc.tokens[static_cast<std::size_t>(i)].surface;
  };
  auto pos_at = [&](long i) -> std::string_view {
    if (i < 0) return "<s>";
    if (i >= static_cast<long>(n)) return "</s>";
    return pos[static_cast<std::size_t>(i)];
  };

  std::vector<TokenFeatures> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = out[i];
    const long li = static_cast<long>(i);
    const std::string& w = doc.tokens[i].surface;
    f.indicators.emplace_back("bias");
    for (long o = -2; o <= 2; ++o)
      f.indicators.push_back("w[" + std::to_string(o) + "]=" + std::string(word_at(li + o)));
    for (long o = -1; o <= 1; ++o)
      f.indicators.push_back("p[" + std::to_string(o) + "]=" + std::string(pos_at(li + o)));
    for (std::size_t k : {3, 4}) {
      if (w.size() < k) continue;
      f.indicators.push_back("pre" + std::to_string(k) + "=" + w.substr(0, k));
      f.indicators.push_back("suf" + std::to_string(k) + "=" + w.substr(w.size() - k));
    }
    if (has_digit(w)) f.indicators.emplace_back("digit");
    if (all_punct(w)) f.indicators.emplace_back("punct");
    if (!lex[i].empty()) {
      f.indicators.push_back("lex=" + lex[i].substr(0, lex[i].size() - 2));
      f.indicators.push_back("lex=" + lex[i]);
    }
    if (ctx.vectors != nullptr) {
      const auto row = dense.row(i);
      f.dense.assign(row.begin(), row.end());
      f.oov = oov[i];
    }
  }
  return out;
}

std::uint32_t FeatureRegistry::add(const std::string& name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  if (frozen_) throw InvalidArgument("feature registry is frozen");
  const auto id = static_cast<std::uint32_t>(names_.size());
  index_.emplace(name, id);
  names_.push_back(name);
  return id;
}

std::optional<std::uint32_t> FeatureRegistry::find(const std::string& name) const {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  return std::nullopt;
}

EncodedSeq encode(std::span<const TokenFeatures> features,
                  const FeatureRegistry& registry, std::size_t dense_dim) {
  EncodedSeq seq;
  seq.active.resize(features.size());
  seq.dense = Matrix(features.size(), dense_dim);
  for (std::size_t i = 0; i < features.size(); ++i) {
    for (const auto& name : features[i].indicators)
      if (auto id = registry.find(name)) seq.active[i].push_back(*id);
    const auto& d = features[i].dense;
    if (!d.empty() && d.size() + 1 != dense_dim)
      throw ConfigError("embedding dimension " + std::to_string(d.size()) +
                        " does not match the model's " + std::to_string(dense_dim - 1));
    std::copy(d.begin(), d.end(), seq.dense.row(i).begin());
    seq.dense(i, dense_dim - 1) = features[i].oov ? 1.0 : 0.0;
  }
  return seq;
}

// ---------------------------------------------------------------------------

ViterbiResult viterbi(const Matrix& unary, std::span<const double> transitions) {
  const std::size_t L = unary.rows, K = unary.cols;
  ViterbiResult r;
  if (L == 0) return r;
  std::vector<double> delta(unary.row(0).begin(), unary.row(0).end()), next(K);
  std::vector<std::size_t> back(L * K, 0);
  for (std::size_t t = 1; t < L; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      std::size_t best = 0;
      double best_v = delta[0] + transitions[k];
      for (std::size_t p = 1; p < K; ++p) {
        const double v = delta[p] + transitions[p * K + k];
        if (v > best_v) {
          best_v = v;
          best = p;
        }
      }
      next[k] = best_v + unary(t, k);
      back[t * K + k] = best;
    }
    delta.swap(next);
  }
  std::size_t k = 0;
  for (std::size_t j = 1; j < K; ++j)
    if (delta[j] > delta[k]) k = j;
  r.score = delta[k];
  r.path.assign(L, 0);
  for (std::size_t t = L; t-- > 0;) {
    r.path[t] = static_cast<int>(k);
    if (t > 0) k = back[t * K + k];
  }
  return r;
}

double path_score(const Matrix& unary, std::span<const double> transitions,
                  std::span<const int> path) {
  if (path.size() != unary.rows) throw InvalidArgument("path length differs from scores");
  if (path.empty()) return 0.0;
  const std::size_t K = unary.cols;
  double s = unary(0, static_cast<std::size_t>(path[0]));
  for (std::size_t t = 1; t < path.size(); ++t) {
    const auto p = static_cast<std::size_t>(path[t - 1]);
    const auto k = static_cast<std::size_t>(path[t]);
    s = s + transitions[p * K + k] + unary(t, k);
  }
  return s;
}

namespace {

Matrix forward_table(const Matrix& unary, std::span<const double> transitions) {
  const std::size_t L = unary.rows, K = unary.cols;
  Matrix alpha(L, K);
  if (L == 0) return alpha;
  std::copy(unary.row(0).begin(), unary.row(0).end(), alpha.row(0).begin());
  std::vector<double> tmp(K);
  for (std::size_t t = 1; t < L; ++t)
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t p = 0; p < K; ++p) tmp[p] = alpha(t - 1, p) + transitions[p * K + k];
      alpha(t, k) = numeric::logsumexp(tmp) + unary(t, k);
    }
  return alpha;
}

}  // namespace

double log_partition(const Matrix& unary, std::span<const double> transitions) {
  if (unary.rows == 0) return 0.0;
  const Matrix alpha = forward_table(unary, transitions);
  return numeric::logsumexp(alpha.row(unary.rows - 1));
}

Marginals marginals(const Matrix& unary, std::span<const double> transitions) {
  const std::size_t L = unary.rows, K = unary.cols;
  Marginals m;
  m.node = Matrix(L, K);
  m.edge.assign(K * K, 0.0);
  if (L == 0) return m;
  const Matrix alpha = forward_table(unary, transitions);
  m.log_z = numeric::logsumexp(alpha.row(L - 1));
  Matrix beta(L, K);
  std::vector<double> tmp(K);
  for (std::size_t t = L - 1; t-- > 0;)
    for (std::size_t p = 0; p < K; ++p) {
      for (std::size_t k = 0; k < K; ++k)
        tmp[k] = transitions[p * K + k] + unary(t + 1, k) + beta(t + 1, k);
      beta(t, p) = numeric::logsumexp(tmp);
    }
  for (std::size_t t = 0; t < L; ++t)
    for (std::size_t k = 0; k < K; ++k)
      m.node(t, k) = std::exp(alpha(t, k) + beta(t, k) - m.log_z);
  for (std::size_t t = 1; t < L; ++t)
    for (std::size_t p = 0; p < K; ++p)
      for (std::size_t k = 0; k < K; ++k)
        m.edge[p * K + k] += std::exp(alpha(t - 1, p) + transitions[p * K + k] +
                                      unary(t, k) + beta(t, k) - m.log_z);
  return m;
}

double chain_nll(const Matrix& unary, std::span<const double> transitions,
                 std::span<const int> gold, Matrix* unary_grad,
                 std::span<double> transition_grad) {
  const std::size_t L = unary.rows, K = unary.cols;
  if (gold.size() != L) throw InvalidArgument("gold length differs from scores");
  for (int g : gold)
    if (g < 0 || static_cast<std::size_t>(g) >= K) throw InvalidArgument("gold label out of range");
  if (L == 0) return 0.0;
  const bool need_grad = unary_grad != nullptr || !transition_grad.empty();
  if (!need_grad) return log_partition(unary, transitions) - path_score(unary, transitions, gold);
  const Marginals m = marginals(unary, transitions);
  const double value = m.log_z - path_score(unary, transitions, gold);
  if (unary_grad != nullptr) {
    for (std::size_t t = 0; t < L; ++t)
      for (std::size_t k = 0; k < K; ++k) (*unary_grad)(t, k) += m.node(t, k);
    for (std::size_t t = 0; t < L; ++t)
      (*unary_grad)(t, static_cast<std::size_t>(gold[t])) -= 1.0;
  }
  if (!transition_grad.empty()) {
    for (std::size_t i = 0; i < K * K; ++i) transition_grad[i] += m.edge[i];
    for (std::size_t t = 1; t < L; ++t)
      transition_grad[static_cast<std::size_t>(gold[t - 1]) * K +
                      static_cast<std::size_t>(gold[t])] -= 1.0;
  }
  return value;
}

// ---------------------------------------------------------------------------

Matrix linear_scores(std::span<const double> weights, std::size_t num_labels,
                     std::size_t num_sparse, const EncodedSeq& seq) {
  const std::size_t K = num_labels;
  Matrix s(seq.size(), K);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    auto row = s.row(t);
    for (std::uint32_t f : seq.active[t]) {
      const double* w = weights.data() + static_cast<std::size_t>(f) * K;
      for (std::size_t k = 0; k < K; ++k) row[k] += w[k];
    }
    for (std::size_t j = 0; j < seq.dense.cols; ++j) {
      const double x = seq.dense(t, j);
      if (x == 0.0) continue;
      const double* w = weights.data() + (num_sparse + j) * K;
      for (std::size_t k = 0; k < K; ++k) row[k] += x * w[k];
    }
  }
  return s;
}

namespace {

void linear_backward(std::span<double> grad, std::size_t K, std::size_t num_sparse,
                     const EncodedSeq& seq, const Matrix& g) {
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto row = g.row(t);
    for (std::uint32_t f : seq.active[t]) {
      double* w = grad.data() + static_cast<std::size_t>(f) * K;
      for (std::size_t k = 0; k < K; ++k) w[k] += row[k];
    }
    for (std::size_t j = 0; j < seq.dense.cols; ++j) {
      const double x = seq.dense(t, j);
      if (x == 0.0) continue;
      double* w = grad.data() + (num_sparse + j) * K;
      for (std::size_t k = 0; k < K; ++k) w[k] += x * row[k];
    }
  }
}

std::vector<int> to_ints(std::span<const BioLabel> labels) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = static_cast<int>(labels[i]);
  return out;
}

std::vector<BioLabel> to_bio_labels(std::span<const int> path) {
  std::vector<BioLabel> out(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) out[i] = static_cast<BioLabel>(path[i]);
  return out;
}

std::size_t context_dim(const FeatureContext& ctx) {
  return ctx.vectors != nullptr ? ctx.vectors->dim() : 0;
}

struct Prepared {
  FeatureRegistry registry;
  std::vector<EncodedSeq> seqs;
  std::vector<std::vector<int>> gold;
};

Prepared prepare(std::span<const NerExample> train, const FeatureContext& ctx) {
  if (train.empty()) throw InvalidArgument("empty training set");
  Prepared p;
  std::vector<std::vector<TokenFeatures>> feats;
  feats.reserve(train.size());
  for (const auto& ex : train) {
    if (ex.labels.size() != ex.doc.tokens.size())
      throw InvalidArgument("labels do not match tokens in " + ex.doc.doc_id);
    feats.push_back(featurize(ex.doc, ctx));
    for (const auto& tf : feats.back())
      for (const auto& name : tf.indicators) p.registry.add(name);
  }
  p.registry.freeze();
  const std::size_t dense_dim = context_dim(ctx) + 1;
  for (std::size_t i = 0; i < train.size(); ++i) {
    p.seqs.push_back(encode(feats[i], p.registry, dense_dim));
    p.gold.push_back(to_ints(train[i].labels));
  }
  return p;
}

}  // namespace

double crf_neg_log_likelihood(const CrfModel& model, const EncodedSeq& seq,
                              std::span<const int> gold, std::span<double> grad) {
  const std::size_t K = model.num_labels, S = model.registry.size();
  const Matrix unary = linear_scores(model.unary(), K, S, seq);
  if (grad.empty()) return chain_nll(unary, model.transitions(), gold, nullptr, {});
  Matrix g(seq.size(), K);
  const double v = chain_nll(unary, model.transitions(), gold, &g,
                             grad.subspan(model.unary_size(), K * K));
  linear_backward(grad, K, S, seq, g);
  return v;
}

CrfTrainResult crf_train(std::span<const NerExample> train,
                         const FeatureContext& ctx, const CrfConfig& config) {
  Prepared prep = prepare(train, ctx);
  CrfTrainResult res;
  CrfModel& model = res.model;
  model.registry = std::move(prep.registry);
  model.embedding_dim = context_dim(ctx);
  model.config = config;
  model.weights.assign(model.unary_size() + model.num_labels * model.num_labels, 0.0);

  const double c2 = config.c2;
  numeric::Objective objective = [&](std::span<const double> x, std::span<double> g) {
    std::copy(x.begin(), x.end(), model.weights.begin());
    std::fill(g.begin(), g.end(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < prep.seqs.size(); ++i)
      total += crf_neg_log_likelihood(model, prep.seqs[i], prep.gold[i], g);
    if (c2 > 0.0) {
      double sq = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sq += x[i] * x[i];
        g[i] += c2 * x[i];
      }
      total += 0.5 * c2 * sq;
    }
    return total;
  };
  numeric::LbfgsConfig lc;
  lc.memory = config.memory;
  lc.max_iterations = config.max_iterations;
  lc.gradient_tolerance = config.tolerance;
  lc.l1 = config.c1;
  auto r = numeric::lbfgs_minimize(objective, model.weights, lc);
  model.weights = std::move(r.x);
  res.converged = r.converged;
  res.iterations = r.iterations;
  res.history = std::move(r.history);
  return res;
}

std::vector<BioLabel> crf_decode(const CrfModel& model, const NormalizedDoc& doc,
                                 const FeatureContext& ctx) {
  const auto seq = encode(featurize(doc, ctx), model.registry, model.dense_dim());
  const Matrix unary =
      linear_scores(model.unary(), model.num_labels, model.registry.size(), seq);
  return to_bio_labels(viterbi(unary, model.transitions()).path);
}

// ---------------------------------------------------------------------------

SvmModel svm_train(std::span<const NerExample> train, const FeatureContext& ctx,
                   const SvmConfig& config) {
  Prepared prep = prepare(train, ctx);
  SvmModel model;
  model.registry = std::move(prep.registry);
  model.embedding_dim = context_dim(ctx);
  model.config = config;
  const std::size_t K = model.num_labels, S = model.registry.size();
  const std::size_t D = model.dense_dim();
  std::vector<double> v((S + D) * K, 0.0);
  model.bias.assign(K, 0.0);
  double scale = 1.0;

  std::vector<std::pair<std::size_t, std::size_t>> samples;
  for (std::size_t i = 0; i < prep.seqs.size(); ++i)
    for (std::size_t t = 0; t < prep.seqs[i].size(); ++t) samples.emplace_back(i, t);
  if (samples.empty()) throw InvalidArgument("training set has no tokens");

  Rng rng(config.seed);
  std::vector<double> score(K);
  long long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(samples);
    for (const auto& [i, t] : samples) {
      ++step;
      const double eta = config.lr / (1.0 + config.lr * config.l2 * static_cast<double>(step));
      scale *= 1.0 - eta * config.l2;
      if (scale < 1e-9) {
        for (double& x : v) x *= scale;
        scale = 1.0;
      }
      const auto& seq = prep.seqs[i];
      std::fill(score.begin(), score.end(), 0.0);
      for (std::uint32_t f : seq.active[t])
        for (std::size_t k = 0; k < K; ++k) score[k] += v[f * K + k];
      for (std::size_t j = 0; j < D; ++j) {
        const double x = seq.dense(t, j);
        if (x == 0.0) continue;
        for (std::size_t k = 0; k < K; ++k) score[k] += x * v[(S + j) * K + k];
      }
      const int gold = prep.gold[i][t];
      for (std::size_t k = 0; k < K; ++k) {
        const double y = static_cast<int>(k) == gold ? 1.0 : -1.0;
        if (y * (scale * score[k] + model.bias[k]) >= 1.0) continue;
        const double u = eta * y / scale;
        for (std::uint32_t f : seq.active[t]) v[f * K + k] += u;
        for (std::size_t j = 0; j < D; ++j) v[(S + j) * K + k] += u * seq.dense(t, j);
        model.bias[k] += eta * y;
      }
    }
  }
  model.weights.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) model.weights[i] = scale * v[i];
  return model;
}

std::vector<int> svm_predict(const SvmModel& model, const EncodedSeq& seq) {
  const Matrix s = linear_scores(model.weights, model.num_labels, model.registry.size(), seq);
  std::vector<int> out(seq.size(), 0);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    double best = s(t, 0) + model.bias[0];
    for (std::size_t k = 1; k < model.num_labels; ++k) {
      const double v = s(t, k) + model.bias[k];
      if (v > best) {
        best = v;
        out[t] = static_cast<int>(k);
      }
    }
  }
  return out;
}

std::vector<BioLabel> svm_decode(const SvmModel& model, const NormalizedDoc& doc,
                                 const FeatureContext& ctx) {
  const auto seq = encode(featurize(doc, ctx), model.registry, model.dense_dim());
  return to_bio_labels(svm_predict(model, seq));
}

// ---------------------------------------------------------------------------
// BiLSTM-CRF

namespace {

struct Layout {
  std::size_t d, H, K;
  std::size_t wx[2], wh[2], b[2], pw, pb, tr;
};

Layout layout(const LstmCrfModel& m) {
  Layout l{};
  l.d = m.input_dim;
  l.H = m.hidden;
  l.K = m.num_labels;
  const auto& p = m.params;
  l.wx[0] = p.slice_info("fw.Wx").offset;
  l.wh[0] = p.slice_info("fw.Wh").offset;
  l.b[0] = p.slice_info("fw.b").offset;
  l.wx[1] = p.slice_info("bw.Wx").offset;
  l.wh[1] = p.slice_info("bw.Wh").offset;
  l.b[1] = p.slice_info("bw.b").offset;
  l.pw = p.slice_info("proj.W").offset;
  l.pb = p.slice_info("proj.b").offset;
  l.tr = p.slice_info("trans").offset;
  return l;
}

struct DirCache {
  Matrix gates;  // activated i, f, g, o per position
  Matrix c;
  Matrix tc;  // tanh(c)
  Matrix h;
};

// Position visited at processing step s.
std::size_t at(std::size_t s, std::size_t L, int dir) { return dir == 0 ? s : L - 1 - s; }

void dir_forward(const double* w, const Layout& l, int dir, const Matrix& x,
                 DirCache& c) {
  const std::size_t L = x.rows, H = l.H, G = 4 * H;
  c.gates = Matrix(L, G);
  c.c = Matrix(L, H);
  c.tc = Matrix(L, H);
  c.h = Matrix(L, H);
  const double* wx = w + l.wx[dir];
  const double* wh = w + l.wh[dir];
  const double* b = w + l.b[dir];
  std::vector<double> z(G);
  for (std::size_t s = 0; s < L; ++s) {
    const std::size_t t = at(s, L, dir);
    std::copy(b, b + G, z.begin());
    for (std::size_t j = 0; j < l.d; ++j) {
      const double xv = x(t, j);
      if (xv == 0.0) continue;
      const double* row = wx + j * G;
      for (std::size_t q = 0; q < G; ++q) z[q] += xv * row[q];
    }
    if (s > 0) {
      const std::size_t tp = at(s - 1, L, dir);
      for (std::size_t j = 0; j < H; ++j) {
        const double hv = c.h(tp, j);
        const double* row = wh + j * G;
        for (std::size_t q = 0; q < G; ++q) z[q] += hv * row[q];
      }
    }
    auto g = c.gates.row(t);
    for (std::size_t q = 0; q < H; ++q) {
      g[q] = numeric::sigmoid(z[q]);
      g[H + q] = numeric::sigmoid(z[H + q]);
      g[2 * H + q] = std::tanh(z[2 * H + q]);
      g[3 * H + q] = numeric::sigmoid(z[3 * H + q]);
    }
    for (std::size_t q = 0; q < H; ++q) {
      const double cprev = s > 0 ? c.c(at(s - 1, L, dir), q) : 0.0;
      const double cv = g[H + q] * cprev + g[q] * g[2 * H + q];
      c.c(t, q) = cv;
      c.tc(t, q) = std::tanh(cv);
      c.h(t, q) = g[3 * H + q] * c.tc(t, q);
    }
  }
}

// dh: L x H gradient w.r.t. this direction's outputs.
void dir_backward(const double* w, double* grad, const Layout& l, int dir,
                  const Matrix& x, const DirCache& c, const Matrix& dh) {
  const std::size_t L = x.rows, H = l.H, G = 4 * H;
  const double* wh = w + l.wh[dir];
  double* gwx = grad + l.wx[dir];
  double* gwh = grad + l.wh[dir];
  double* gb = grad + l.b[dir];
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), dz(G);
  for (std::size_t s = L; s-- > 0;) {
    const std::size_t t = at(s, L, dir);
    const auto g = c.gates.row(t);
    for (std::size_t q = 0; q < H; ++q) {
      const double i = g[q], f = g[H + q], gg = g[2 * H + q], o = g[3 * H + q];
      const double tc = c.tc(t, q);
      const double dhq = dh(t, q) + dh_next[q];
      const double dc = dc_next[q] + dhq * o * (1.0 - tc * tc);
      const double cprev = s > 0 ? c.c(at(s - 1, L, dir), q) : 0.0;
      dz[q] = dc * gg * i * (1.0 - i);
      dz[H + q] = dc * cprev * f * (1.0 - f);
      dz[2 * H + q] = dc * i * (1.0 - gg * gg);
      dz[3 * H + q] = dhq * tc * o * (1.0 - o);
      dc_next[q] = dc * f;
    }
    for (std::size_t q = 0; q < G; ++q) gb[q] += dz[q];
    for (std::size_t j = 0; j < l.d; ++j) {
      const double xv = x(t, j);
      if (xv == 0.0) continue;
      double* row = gwx + j * G;
      for (std::size_t q = 0; q < G; ++q) row[q] += xv * dz[q];
    }
    if (s > 0) {
      const std::size_t tp = at(s - 1, L, dir);
      for (std::size_t j = 0; j < H; ++j) {
        const double hv = c.h(tp, j);
        double* row = gwh + j * G;
        const double* wrow = wh + j * G;
        double acc = 0.0;
        for (std::size_t q = 0; q < G; ++q) {
          row[q] += hv * dz[q];
          acc += wrow[q] * dz[q];
        }
        dh_next[j] = acc;
      }
    } else {
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
    }
  }
}

Matrix project(const double* w, const Layout& l, const DirCache& f, const DirCache& b) {
  const std::size_t L = f.h.rows, H = l.H, K = l.K;
  Matrix s(L, K);
  const double* pw = w + l.pw;
  const double* pb = w + l.pb;
  for (std::size_t t = 0; t < L; ++t) {
    auto row = s.row(t);
    for (std::size_t k = 0; k < K; ++k) row[k] = pb[k];
    for (std::size_t j = 0; j < 2 * H; ++j) {
      const double hv = j < H ? f.h(t, j) : b.h(t, j - H);
      const double* prow = pw + j * K;
      for (std::size_t k = 0; k < K; ++k) row[k] += hv * prow[k];
    }
  }
  return s;
}

void check_input(const LstmCrfModel& m, const Matrix& x) {
  if (x.cols != m.input_dim)
    throw ConfigError("input dimension " + std::to_string(x.cols) +
                      " does not match the model's " + std::to_string(m.input_dim));
}

}  // namespace

LstmCrfModel lstm_crf_init(std::size_t input_dim, const LstmCrfConfig& config,
                           std::size_t num_labels) {
  LstmCrfModel m;
  m.input_dim = input_dim;
  m.hidden = config.hidden;
  m.num_labels = num_labels;
  m.config = config;
  const std::size_t H = config.hidden, G = 4 * H, K = num_labels;
  for (const char* dir : {"fw", "bw"}) {
    m.params.add_slice(std::string(dir) + ".Wx", input_dim * G);
    m.params.add_slice(std::string(dir) + ".Wh", H * G);
    m.params.add_slice(std::string(dir) + ".b", G);
  }
  m.params.add_slice("proj.W", 2 * H * K);
  m.params.add_slice("proj.b", K);
  m.params.add_slice("trans", K * K);

  Rng rng(config.seed);
  for (const char* dir : {"fw", "bw"}) {
    auto wx = m.params.slice(std::string(dir) + ".Wx");
    const double limit = std::sqrt(6.0 / static_cast<double>(input_dim + G));
    for (double& v : wx) v = rng.uniform(-limit, limit);

    auto wh = m.params.slice(std::string(dir) + ".Wh");
    for (std::size_t gate = 0; gate < 4; ++gate) {
      // Modified Gram-Schmidt on a Gaussian H x H block.
      std::vector<std::vector<double>> q(H, std::vector<double>(H));
      for (auto& row : q)
        for (double& v : row) v = rng.normal();
      for (std::size_t i = 0; i < H; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          const double proj = numeric::dot(q[i], q[j]);
          for (std::size_t k = 0; k < H; ++k) q[i][k] -= proj * q[j][k];
        }
        const double norm = std::sqrt(numeric::dot(q[i], q[i]));
        for (double& v : q[i]) v /= norm;
      }
      for (std::size_t j = 0; j < H; ++j)
        for (std::size_t k = 0; k < H; ++k) wh[j * G + gate * H + k] = q[j][k];
    }
    auto b = m.params.slice(std::string(dir) + ".b");
    for (std::size_t k = 0; k < H; ++k) b[H + k] = 1.0;
  }
  auto pw = m.params.slice("proj.W");
  const double limit = std::sqrt(6.0 / static_cast<double>(2 * H + K));
  for (double& v : pw) v = rng.uniform(-limit, limit);
  return m;
}

Matrix lstm_states(const LstmCrfModel& model, const Matrix& inputs) {
  check_input(model, inputs);
  const Layout l = layout(model);
  DirCache f, b;
  dir_forward(model.params.values().data(), l, 0, inputs, f);
  dir_forward(model.params.values().data(), l, 1, inputs, b);
  Matrix s(inputs.rows, 2 * l.H);
  for (std::size_t t = 0; t < inputs.rows; ++t)
    for (std::size_t j = 0; j < l.H; ++j) {
      s(t, j) = f.h(t, j);
      s(t, l.H + j) = b.h(t, j);
    }
  return s;
}

Matrix lstm_crf_scores(const LstmCrfModel& model, const Matrix& inputs) {
  check_input(model, inputs);
  const Layout l = layout(model);
  const double* w = model.params.values().data();
  DirCache f, b;
  dir_forward(w, l, 0, inputs, f);
  dir_forward(w, l, 1, inputs, b);
  return project(w, l, f, b);
}

double lstm_crf_nll(const LstmCrfModel& model, const Matrix& inputs,
                    std::span<const int> gold, std::span<double> grad) {
  check_input(model, inputs);
  const Layout l = layout(model);
  const double* w = model.params.values().data();
  const std::size_t L = inputs.rows, H = l.H, K = l.K;
  if (L == 0) return 0.0;
  DirCache f, b;
  dir_forward(w, l, 0, inputs, f);
  dir_forward(w, l, 1, inputs, b);
  const Matrix scores = project(w, l, f, b);
  const std::span<const double> trans(w + l.tr, K * K);
  if (grad.empty()) return chain_nll(scores, trans, gold, nullptr, {});

  Matrix g(L, K);
  const double value = chain_nll(scores, trans, gold, &g, grad.subspan(l.tr, K * K));
  double* pw = grad.data() + l.pw;
  double* pb = grad.data() + l.pb;
  Matrix dhf(L, H), dhb(L, H);
  const double* wp = w + l.pw;
  for (std::size_t t = 0; t < L; ++t) {
    const auto row = g.row(t);
    for (std::size_t k = 0; k < K; ++k) pb[k] += row[k];
    for (std::size_t j = 0; j < 2 * H; ++j) {
      const double hv = j < H ? f.h(t, j) : b.h(t, j - H);
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        pw[j * K + k] += hv * row[k];
        acc += wp[j * K + k] * row[k];
      }
      if (j < H)
        dhf(t, j) = acc;
      else
        dhb(t, j - H) = acc;
    }
  }
  dir_backward(w, grad.data(), l, 0, inputs, f, dhf);
  dir_backward(w, grad.data(), l, 1, inputs, b, dhb);
  return value;
}

std::vector<BioLabel> lstm_crf_decode(const LstmCrfModel& model, const Matrix& inputs) {
  const Matrix s = lstm_crf_scores(model, inputs);
  const auto trans = model.params.slice("trans");
  return to_bio_labels(viterbi(s, trans).path);
}

namespace {

double entity_f1(const LstmCrfModel& model, std::span<const NerExample> docs,
                 const std::vector<Matrix>& inputs) {
  evaluate::EvalCounts total;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto pred = lstm_crf_decode(model, inputs[i]);
    const auto ps = annotation::from_bio(docs[i].doc, pred);
    const auto gs = annotation::from_bio(docs[i].doc, docs[i].labels);
    total += evaluate::align_spans(gs, ps);
  }
  return evaluate::metrics(total).f1;
}

}  // namespace

LstmTrainResult lstm_crf_train(std::span<const NerExample> train,
                               std::span<const NerExample> dev,
                               const embeddings::TokenVectors& vectors,
                               const LstmCrfConfig& config) {
  if (train.empty()) throw InvalidArgument("empty training set");
  if (config.batch_size == 0) throw ConfigError("batch_size must be positive");
  LstmTrainResult res;
  res.model = lstm_crf_init(vectors.dim(), config);
  LstmCrfModel& model = res.model;

  std::vector<Matrix> tx, dx;
  std::vector<std::vector<int>> tg;
  for (const auto& ex : train) {
    if (ex.labels.size() != ex.doc.tokens.size())
      throw InvalidArgument("labels do not match tokens in " + ex.doc.doc_id);
    tx.push_back(vectors.vectors(ex.doc));
    tg.push_back(to_ints(ex.labels));
  }
  for (const auto& ex : dev) dx.push_back(vectors.vectors(ex.doc));

  auto adam = numeric::make_adam(model.params.size(), config.lr, config.weight_decay);
  Rng rng(config.seed ^ 0xA5A5A5A5ULL);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(model.params.size());
  numeric::ParamVector best = model.params;
  res.best_dev_f1 = -1.0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_no) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      double loss = 0.0;
      for (std::size_t i = start; i < end; ++i)
        loss += lstm_crf_nll(model, tx[order[i]], tg[order[i]], grad);
      if (!std::isfinite(loss))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_no));
      epoch_loss += loss;
      const double inv = 1.0 / static_cast<double>(end - start);
      double norm = 0.0;
      for (double& g : grad) {
        g *= inv;
        norm += g * g;
      }
      norm = std::sqrt(norm);
      if (config.clip_norm > 0.0 && norm > config.clip_norm) {
        const double s = config.clip_norm / norm;
        for (double& g : grad) g *= s;
      }
      numeric::adam_step(model.params, grad, adam);
    }
    res.epoch_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    if (dev.empty()) {
      res.best_epoch = epoch;
      continue;
    }
    const double f1 = entity_f1(model, dev, dx);
    if (f1 > res.best_dev_f1) {
      res.best_dev_f1 = f1;
      res.best_epoch = epoch;
      best = model.params;
    }
  }
  if (!dev.empty()) model.params = std::move(best);
  if (res.best_dev_f1 < 0.0) res.best_dev_f1 = 0.0;
  return res;
}

// ---------------------------------------------------------------------------

std::string model_type(const NerModel& model) {
  switch (model.index()) {
    case 0: return "svm";
    case 1: return "crf";
    default: return "lstm-crf";
  }
}

void check_dims(const NerModel& model, const FeatureContext& ctx) {
  const std::size_t have = context_dim(ctx);
  std::size_t want = 0;
  if (const auto* s = std::get_if<SvmModel>(&model)) want = s->embedding_dim;
  if (const auto* c = std::get_if<CrfModel>(&model)) want = c->embedding_dim;
  if (const auto* l = std::get_if<LstmCrfModel>(&model)) {
    want = l->input_dim;
    if (ctx.vectors == nullptr) throw ConfigError("lstm-crf model needs token vectors");
  }
  if (want != have)
    throw ConfigError("model expects embedding dimension " + std::to_string(want) +
                      ", embeddings provide " + std::to_string(have));
}

std::vector<BioLabel> decode(const NerModel& model, const NormalizedDoc& doc,
                             const FeatureContext& ctx) {
  check_dims(model, ctx);
  if (const auto* s = std::get_if<SvmModel>(&model)) return svm_decode(*s, doc, ctx);
  if (const auto* c = std::get_if<CrfModel>(&model)) return crf_decode(*c, doc, ctx);
  const auto& l = std::get<LstmCrfModel>(model);
  return lstm_crf_decode(l, ctx.vectors->vectors(doc));
}

std::vector<EntitySpan> predict_entities(const NerModel& model,
                                         const NormalizedDoc& doc,
                                         const FeatureContext& ctx) {
  const auto labels = decode(model, doc, ctx);
  return annotation::from_bio(doc, labels);
}

NerExample make_example(const annotation::AnnotatedDoc& doc,
                        std::vector<std::string>* warnings) {
  return {doc.doc, annotation::to_bio(doc.doc, doc.entities, warnings)};
}

// ---------------------------------------------------------------------------
// Bundles

namespace {

using bundle::json;

json label_alphabet() {
  json a = json::array();
  for (const char* n : annotation::kBioNames) a.push_back(n);
  return a;
}

void check_alphabet(const json& j) {
  if (bundle::field(j, "label_alphabet") != label_alphabet())
    throw ParseError("model bundle has an unexpected label alphabet");
}

FeatureRegistry registry_from(const json& j) {
  FeatureRegistry r;
  for (const auto& n : j) r.add(n.get<std::string>());
  r.freeze();
  return r;
}

json linear_weights(std::span<const double> w, const FeatureRegistry& reg,
                    std::size_t dense, std::size_t K) {
  return bundle::matrix(w.first((reg.size() + dense) * K), reg.size() + dense, K);
}

}  // namespace

std::string to_json(const NerModel& model) {
  json j;
  j["version"] = bundle::kBundleVersion;
  j["label_alphabet"] = label_alphabet();
  j["model_type"] = model_type(model);
  if (const auto* s = std::get_if<SvmModel>(&model)) {
    j["feature_registry"] = s->registry.names();
    j["hyperparameters"] = {{"embedding_dim", s->embedding_dim},
                            {"epochs", s->config.epochs},
                            {"lr", s->config.lr},
                            {"l2", s->config.l2},
                            {"seed", s->config.seed}};
    j["weights"] = {{"unary", linear_weights(s->weights, s->registry, s->dense_dim(), s->num_labels)},
                    {"bias", bundle::vector(s->bias)}};
  } else if (const auto* c = std::get_if<CrfModel>(&model)) {
    j["feature_registry"] = c->registry.names();
    j["hyperparameters"] = {{"embedding_dim", c->embedding_dim},
                            {"c1", c->config.c1},
                            {"c2", c->config.c2},
                            {"max_iterations", c->config.max_iterations},
                            {"tolerance", c->config.tolerance},
                            {"memory", c->config.memory}};
    j["weights"] = {{"unary", linear_weights(c->weights, c->registry, c->dense_dim(), c->num_labels)},
                    {"transitions", bundle::matrix(c->transitions(), c->num_labels, c->num_labels)}};
  } else {
    const auto& l = std::get<LstmCrfModel>(model);
    j["feature_registry"] = json::array();
    j["hyperparameters"] = {{"input_dim", l.input_dim},
                            {"hidden", l.hidden},
                            {"epochs", l.config.epochs},
                            {"batch_size", l.config.batch_size},
                            {"lr", l.config.lr},
                            {"weight_decay", l.config.weight_decay},
                            {"clip_norm", l.config.clip_norm},
                            {"seed", l.config.seed}};
    const std::size_t H = l.hidden, G = 4 * H, K = l.num_labels;
    json w;
    for (const char* dir : {"fw", "bw"}) {
      const std::string d(dir);
      w[d + ".Wx"] = bundle::matrix(l.params.slice(d + ".Wx"), l.input_dim, G);
      w[d + ".Wh"] = bundle::matrix(l.params.slice(d + ".Wh"), H, G);
      w[d + ".b"] = bundle::vector(l.params.slice(d + ".b"));
    }
    w["proj.W"] = bundle::matrix(l.params.slice("proj.W"), 2 * H, K);
    w["proj.b"] = bundle::vector(l.params.slice("proj.b"));
    w["trans"] = bundle::matrix(l.params.slice("trans"), K, K);
    j["weights"] = std::move(w);
  }
  return j.dump();
}

NerModel ner_model_from_json(std::string_view text) {
  const json j = bundle::parse(text);
  try {
    check_alphabet(j);
    const auto type = bundle::field(j, "model_type").get<std::string>();
    const json& hp = bundle::field(j, "hyperparameters");
    const json& w = bundle::field(j, "weights");
    const std::size_t K = annotation::kNumBioLabels;
    if (type == "svm") {
      SvmModel m;
      m.registry = registry_from(bundle::field(j, "feature_registry"));
      m.embedding_dim = hp.at("embedding_dim").get<std::size_t>();
      m.config.epochs = hp.at("epochs").get<int>();
      m.config.lr = hp.at("lr").get<double>();
      m.config.l2 = hp.at("l2").get<double>();
      m.config.seed = hp.at("seed").get<std::uint64_t>();
      m.weights = bundle::flatten(w.at("unary"), (m.registry.size() + m.dense_dim()) * K, "unary");
      m.bias = bundle::flatten(w.at("bias"), K, "bias");
      return m;
    }
    if (type == "crf") {
      CrfModel m;
      m.registry = registry_from(bundle::field(j, "feature_registry"));
      m.embedding_dim = hp.at("embedding_dim").get<std::size_t>();
      m.config.c1 = hp.at("c1").get<double>();
      m.config.c2 = hp.at("c2").get<double>();
      m.config.max_iterations = hp.at("max_iterations").get<int>();
      m.config.tolerance = hp.at("tolerance").get<double>();
      m.config.memory = hp.at("memory").get<int>();
      m.weights = bundle::flatten(w.at("unary"), m.unary_size(), "unary");
      const auto t = bundle::flatten(w.at("transitions"), K * K, "transitions");
      m.weights.insert(m.weights.end(), t.begin(), t.end());
      return m;
    }
    if (type == "lstm-crf") {
      LstmCrfConfig cfg;
      cfg.hidden = hp.at("hidden").get<std::size_t>();
      cfg.epochs = hp.at("epochs").get<int>();
      cfg.batch_size = hp.at("batch_size").get<std::size_t>();
      cfg.lr = hp.at("lr").get<double>();
      cfg.weight_decay = hp.at("weight_decay").get<double>();
      cfg.clip_norm = hp.at("clip_norm").get<double>();
      cfg.seed = hp.at("seed").get<std::uint64_t>();
      LstmCrfModel m = lstm_crf_init(hp.at("input_dim").get<std::size_t>(), cfg);
      for (const auto& s : m.params.slices()) {
        const auto v = bundle::flatten(w.at(s.name), s.size, s.name);
        std::copy(v.begin(), v.end(), m.params.values().begin() + static_cast<std::ptrdiff_t>(s.offset));
      }
      return m;
    }
    throw ParseError("unknown NER model_type '" + type + "'");
  } catch (const bundle::json::exception& e) {
    throw ParseError(std::string("model bundle: ") + e.what());
  }
}

}  // namespace dsae::ner
