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

#include "dsae/relation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bundle.hpp"
#include "dsae/error.hpp"

namespace dsae::relation {

long relative_position(long i, long start, long end) {
  if (i < start) return i - start;
  if (i >= end) return i - (end - 1);
  return 0;
}

EncodedInstance encode_instance(const RelationInstance& instance,
                                const NormalizedDoc& doc,
                                const Matrix& doc_vectors,
                                const EncodeConfig& config) {
  const long L = static_cast<long>(doc.tokens.size());
  const auto& h = instance.head;
  const auto& t = instance.tail;
  for (const auto* s : {&h, &t})
    if (s->token_start >= s->token_end || static_cast<long>(s->token_end) > L)
      throw InvalidArgument("entity span outside document " + doc.doc_id);
  if (h.same_span(t) ||
      (h.token_start == t.token_start && h.token_end == t.token_end))
    throw InvalidArgument("head and tail are the same span in " + doc.doc_id);
  if (doc_vectors.rows != doc.tokens.size())
    throw InvalidArgument("token vectors do not cover document " + doc.doc_id);
  const long M = static_cast<long>(config.max_len);
  const long budget = M - (config.use_markers ? 2 * 2 : 0);
  if (budget < 1) throw ConfigError("max_len too small for entity markers");

  const long hs = static_cast<long>(h.token_start), he = static_cast<long>(h.token_end);
  const long ts = static_cast<long>(t.token_start), te = static_cast<long>(t.token_end);
  long start = 0, stop = L;
  if (L > budget) {
    const long a = std::min(hs, ts), b = std::max(he, te);
    if (b - a >= budget) {
      start = a;
    } else {
      start = std::clamp(a - (budget - (b - a)) / 2, 0L, L - budget);
    }
    stop = start + budget;
  }

  EncodedInstance e;
  const std::size_t d = doc_vectors.cols;
  std::vector<std::vector<double>> rows;
  auto clamp_pos = [&](long r) { return static_cast<int>(std::clamp(r, -M, M) + M); };
  auto emit = [&](int kind, long anchor) {
    e.kind.push_back(kind);
    e.token.push_back(kind == kToken ? anchor : -1);
    e.pos_head.push_back(clamp_pos(relative_position(anchor, hs, he)));
    e.pos_tail.push_back(clamp_pos(relative_position(anchor, ts, te)));
  };
  for (long i = start; i < stop; ++i) {
    if (config.use_markers) {
      if (i == hs) emit(kHeadOpen, i);
      if (i == ts) emit(kTailOpen, i);
    }
    emit(kToken, i);
    if (config.use_markers) {
      if (i == he - 1) emit(kHeadClose, i);
      if (i == te - 1) emit(kTailClose, i);
    }
  }
  if (config.pad_to_max_len)
    while (e.kind.size() < config.max_len) {
      e.kind.push_back(kPad);
      e.token.push_back(-1);
      e.pos_head.push_back(0);
      e.pos_tail.push_back(0);
    }
  e.words = Matrix(e.kind.size(), d);
  for (std::size_t r = 0; r < e.kind.size(); ++r)
    if (e.kind[r] == kToken) {
      const auto src = doc_vectors.row(static_cast<std::size_t>(e.token[r]));
      std::copy(src.begin(), src.end(), e.words.row(r).begin());
    }
  return e;
}

CnnModel cnn_init(std::size_t word_dim, const CnnConfig& config) {
  if (config.kernel == 0 || config.kernel % 2 == 0)
    throw ConfigError("kernel width must be odd");
  if (config.filters == 0) throw ConfigError("filters must be positive");
  if (config.dropout < 0.0 || config.dropout >= 1.0)
    throw ConfigError("dropout must lie in [0, 1)");
  CnnModel m;
  m.word_dim = word_dim;
  m.config = config;
  const std::size_t P = 2 * config.encode.max_len + 1, p = config.pos_dim;
  const std::size_t in = m.input_dim(), F = config.filters, C = kNumRelationLabels;
  m.params.add_slice("markers", kNumMarkers * word_dim);
  m.params.add_slice("pos_head", P * p);
  m.params.add_slice("pos_tail", P * p);
  m.params.add_slice("conv.W", config.kernel * in * F);
  m.params.add_slice("conv.b", F);
  m.params.add_slice("out.W", F * C);
  m.params.add_slice("out.b", C);

  Rng rng(config.seed);
  auto fill = [&](const char* name, double limit) {
    for (double& v : m.params.slice(name)) v = rng.uniform(-limit, limit);
  };
  if (word_dim > 0) fill("markers", std::sqrt(3.0 / static_cast<double>(word_dim)));
  if (p > 0) {
    fill("pos_head", std::sqrt(3.0 / static_cast<double>(p)));
    fill("pos_tail", std::sqrt(3.0 / static_cast<double>(p)));
  }
  fill("conv.W", std::sqrt(6.0 / static_cast<double>(config.kernel * in + F)));
  fill("out.W", std::sqrt(6.0 / static_cast<double>(F + C)));
  return m;
}

namespace {

struct Offsets {
  std::size_t markers, pos_head, pos_tail, conv_w, conv_b, out_w, out_b;
};

Offsets offsets(const CnnModel& m) {
  const auto& p = m.params;
  return {p.slice_info("markers").offset, p.slice_info("pos_head").offset,
          p.slice_info("pos_tail").offset, p.slice_info("conv.W").offset,
          p.slice_info("conv.b").offset,   p.slice_info("out.W").offset,
          p.slice_info("out.b").offset};
}

void check_encoded(const CnnModel& m, const EncodedInstance& x) {
  if (x.words.cols != m.word_dim)
    throw ConfigError("word vectors of dimension " + std::to_string(x.words.cols) +
                      " given to a model of dimension " + std::to_string(m.word_dim));
  if (x.size() == 0) throw InvalidArgument("empty encoded instance");
  const int P = static_cast<int>(2 * m.config.encode.max_len + 1);
  for (std::size_t r = 0; r < x.size(); ++r)
    if (x.pos_head[r] < 0 || x.pos_head[r] >= P || x.pos_tail[r] < 0 || x.pos_tail[r] >= P)
      throw InvalidArgument("relative position outside the embedding table");
}

}  // namespace

Probabilities cnn_forward(const CnnModel& model, const EncodedInstance& x,
                          bool train_mode, Rng* rng, CnnCache* cache) {
  check_encoded(model, x);
  const Offsets o = offsets(model);
  const double* w = model.params.values().data();
  const std::size_t n = x.size(), d = model.word_dim, p = model.config.pos_dim;
  const std::size_t in = model.input_dim(), F = model.config.filters;
  const std::size_t k = model.config.kernel, pad = (k - 1) / 2;
  const std::size_t C = kNumRelationLabels;
  const bool positions = model.config.encode.use_positions;

  CnnCache local;
  CnnCache& c = cache != nullptr ? *cache : local;
  c.inputs = Matrix(n, in);
  for (std::size_t r = 0; r < n; ++r) {
    if (x.kind[r] == kPad) continue;
    auto row = c.inputs.row(r);
    if (x.kind[r] == kToken) {
      std::copy(x.words.row(r).begin(), x.words.row(r).end(), row.begin());
    } else {
      const double* mk = w + o.markers + static_cast<std::size_t>(x.kind[r]) * d;
      std::copy(mk, mk + d, row.begin());
    }
    if (positions) {
      const double* ph = w + o.pos_head + static_cast<std::size_t>(x.pos_head[r]) * p;
      const double* pt = w + o.pos_tail + static_cast<std::size_t>(x.pos_tail[r]) * p;
      std::copy(ph, ph + p, row.begin() + static_cast<std::ptrdiff_t>(d));
      std::copy(pt, pt + p, row.begin() + static_cast<std::ptrdiff_t>(d + p));
    }
  }

  c.conv = Matrix(n, F);
  const double* cw = w + o.conv_w;
  const double* cb = w + o.conv_b;
  for (std::size_t t = 0; t < n; ++t) {
    auto z = c.conv.row(t);
    std::copy(cb, cb + F, z.begin());
    for (std::size_t q = 0; q < k; ++q) {
      if (t + q < pad || t + q - pad >= n) continue;
      const auto src = c.inputs.row(t + q - pad);
      for (std::size_t ch = 0; ch < in; ++ch) {
        const double v = src[ch];
        if (v == 0.0) continue;
        const double* wr = cw + (q * in + ch) * F;
        for (std::size_t f = 0; f < F; ++f) z[f] += v * wr[f];
      }
    }
    for (double& v : z) v = v > 0.0 ? v : 0.0;
  }

  // Max over non-padding rows; the first maximal row wins.
  c.argmax.assign(F, n);
  c.pooled.assign(F, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (x.kind[t] == kPad) continue;
    const auto z = c.conv.row(t);
    for (std::size_t f = 0; f < F; ++f)
      if (c.argmax[f] == n || z[f] > c.pooled[f]) {
        c.pooled[f] = z[f];
        c.argmax[f] = t;
      }
  }
  c.mask.assign(F, 1.0);
  const double rate = model.config.dropout;
  if (train_mode && rate > 0.0) {
    if (rng == nullptr) throw InvalidArgument("training-mode dropout needs an Rng");
    for (std::size_t f = 0; f < F; ++f) c.mask[f] = rng->bernoulli(rate) ? 0.0 : 1.0 / (1.0 - rate);
  }
  for (std::size_t f = 0; f < F; ++f) c.pooled[f] *= c.mask[f];

  std::array<double, kNumRelationLabels> logits{};
  const double* ow = w + o.out_w;
  const double* ob = w + o.out_b;
  for (std::size_t j = 0; j < C; ++j) logits[j] = ob[j];
  for (std::size_t f = 0; f < F; ++f) {
    const double v = c.pooled[f];
    if (v == 0.0) continue;
    for (std::size_t j = 0; j < C; ++j) logits[j] += v * ow[f * C + j];
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (std::size_t j = 0; j < C; ++j) {
    c.probs[j] = std::exp(logits[j] - mx);
    z += c.probs[j];
  }
  for (double& v : c.probs) v /= z;
  return c.probs;
}

double cnn_loss(const CnnModel& model, const EncodedInstance& x, int label,
                double weight, std::span<double> grad, bool train_mode, Rng* rng) {
  if (label < 0 || label >= kNumRelationLabels) throw InvalidArgument("label out of range");
  CnnCache c;
  const Probabilities probs = cnn_forward(model, x, train_mode, rng, &c);
  const double loss = -weight * std::log(probs[static_cast<std::size_t>(label)]);
  if (grad.empty()) return loss;

  const Offsets o = offsets(model);
  const double* w = model.params.values().data();
  double* g = grad.data();
  const std::size_t n = x.size(), d = model.word_dim, p = model.config.pos_dim;
  const std::size_t in = model.input_dim(), F = model.config.filters;
  const std::size_t k = model.config.kernel, pad = (k - 1) / 2;
  const std::size_t C = kNumRelationLabels;

  std::array<double, kNumRelationLabels> dl{};
  for (std::size_t j = 0; j < C; ++j)
    dl[j] = weight * (probs[j] - (static_cast<int>(j) == label ? 1.0 : 0.0));
  for (std::size_t j = 0; j < C; ++j) g[o.out_b + j] += dl[j];
  const double* ow = w + o.out_w;
  const double* cw = w + o.conv_w;
  Matrix din(n, in);
  for (std::size_t f = 0; f < F; ++f) {
    double dp = 0.0;
    for (std::size_t j = 0; j < C; ++j) {
      g[o.out_w + f * C + j] += c.pooled[f] * dl[j];
      dp += ow[f * C + j] * dl[j];
    }
    const std::size_t t = c.argmax[f];
    if (t >= n || c.conv(t, f) <= 0.0) continue;
    const double gz = dp * c.mask[f];
    if (gz == 0.0) continue;
    g[o.conv_b + f] += gz;
    for (std::size_t q = 0; q < k; ++q) {
      if (t + q < pad || t + q - pad >= n) continue;
      const std::size_t r = t + q - pad;
      const auto src = c.inputs.row(r);
      auto dst = din.row(r);
      for (std::size_t ch = 0; ch < in; ++ch) {
        const std::size_t idx = (q * in + ch) * F + f;
        g[o.conv_w + idx] += src[ch] * gz;
        dst[ch] += cw[idx] * gz;
      }
    }
  }
  const bool positions = model.config.encode.use_positions;
  for (std::size_t r = 0; r < n; ++r) {
    if (x.kind[r] == kPad) continue;
    const auto row = din.row(r);
    if (x.kind[r] >= 0) {
      double* mk = g + o.markers + static_cast<std::size_t>(x.kind[r]) * d;
      for (std::size_t ch = 0; ch < d; ++ch) mk[ch] += row[ch];
    }
    if (positions) {
      double* ph = g + o.pos_head + static_cast<std::size_t>(x.pos_head[r]) * p;
      double* pt = g + o.pos_tail + static_cast<std::size_t>(x.pos_tail[r]) * p;
      for (std::size_t j = 0; j < p; ++j) {
        ph[j] += row[d + j];
        pt[j] += row[d + p + j];
      }
    }
  }
  return loss;
}

std::array<double, kNumRelationLabels> class_weights(std::span<const int> labels) {
  std::array<double, kNumRelationLabels> counts{}, w{};
  for (int l : labels) counts[static_cast<std::size_t>(l)] += 1.0;
  std::size_t present = 0;
  for (double c : counts) present += c > 0.0 ? 1 : 0;
  const double n = static_cast<double>(labels.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j] = counts[j] > 0.0 ? n / (static_cast<double>(present) * counts[j]) : 0.0;
  return w;
}

std::vector<LabeledInstance> encode_corpus(
    std::span<const annotation::AnnotatedDoc> docs,
    const embeddings::TokenVectors& vectors, const EncodeConfig& config) {
  std::vector<LabeledInstance> out;
  for (const auto& doc : docs) {
    const auto inst = annotation::generate_relation_instances(doc);
    if (inst.empty()) continue;
    const Matrix v = vectors.vectors(doc.doc);
    for (const auto& r : inst)
      out.push_back({doc.doc.doc_id, encode_instance(r, doc.doc, v, config), r.label});
  }
  return out;
}

RelationLabel argmax_label(const Probabilities& p) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < p.size(); ++j)
    if (p[j] > p[best]) best = j;
  return static_cast<RelationLabel>(best);
}

double macro_f1(std::span<const int> gold, std::span<const int> predicted) {
  if (gold.size() != predicted.size()) throw InvalidArgument("label sequences differ in length");
  double sum = 0.0;
  for (int c = 0; c < kNumRelationLabels; ++c) {
    long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (predicted[i] == c && gold[i] == c) ++tp;
      else if (predicted[i] == c) ++fp;
      else if (gold[i] == c) ++fn;
    }
    const double den = 2.0 * tp + fp + fn;
    sum += den > 0.0 ? 2.0 * tp / den : 0.0;
  }
  return sum / kNumRelationLabels;
}

CnnTrainResult cnn_train(std::span<const LabeledInstance> train,
                         std::span<const LabeledInstance> dev,
                         std::size_t word_dim, const CnnConfig& config) {
  if (train.empty()) throw InvalidArgument("empty relation training set");
  if (config.batch_size == 0) throw ConfigError("batch_size must be positive");
  CnnTrainResult res;
  res.model = cnn_init(word_dim, config);
  CnnModel& model = res.model;

  std::vector<int> labels;
  for (const auto& li : train) labels.push_back(static_cast<int>(li.label));
  std::array<double, kNumRelationLabels> weights{1.0, 1.0, 1.0};
  if (config.class_weights) weights = class_weights(labels);
  for (int c = 0; c < kNumRelationLabels; ++c)
    if (std::find(labels.begin(), labels.end(), c) == labels.end())
      res.warnings.push_back("no training instances labelled " +
                             std::string(to_string(static_cast<RelationLabel>(c))));

  std::vector<int> dev_gold;
  for (const auto& li : dev) dev_gold.push_back(static_cast<int>(li.label));

  auto adam = numeric::make_adam(model.params.size(), config.lr, config.weight_decay);
  Rng rng(config.seed ^ 0x5DEECE66DULL);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(model.params.size());
  numeric::ParamVector best = model.params;
  res.best_dev_macro_f1 = -1.0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_no) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      std::fill(grad.begin(), grad.end(), 0.0);
      double loss = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const auto& li = train[order[i]];
        const int y = static_cast<int>(li.label);
        loss += cnn_loss(model, li.x, y, weights[static_cast<std::size_t>(y)], grad, true, &rng);
      }
      if (!std::isfinite(loss))
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_no));
      epoch_loss += loss;
      const double inv = 1.0 / static_cast<double>(end - start);
      for (double& g : grad) g *= inv;
      numeric::adam_step(model.params, grad, adam);
    }
    res.epoch_loss.push_back(epoch_loss / static_cast<double>(order.size()));
    if (dev.empty()) {
      res.best_epoch = epoch;
      continue;
    }
    std::vector<int> pred;
    pred.reserve(dev.size());
    for (const auto& li : dev)
      pred.push_back(static_cast<int>(argmax_label(cnn_forward(model, li.x, false))));
    const double f1 = macro_f1(dev_gold, pred);
    if (f1 > res.best_dev_macro_f1) {
      res.best_dev_macro_f1 = f1;
      res.best_epoch = epoch;
      best = model.params;
    }
  }
  if (!dev.empty()) model.params = std::move(best);
  if (res.best_dev_macro_f1 < 0.0) res.best_dev_macro_f1 = 0.0;
  return res;
}

std::vector<ScoredPair> score_pairs(const NormalizedDoc& doc,
                                    std::span<const EntitySpan> entities,
                                    const CnnModel& model,
                                    const Matrix& doc_vectors) {
  std::vector<ScoredPair> out;
  for (const auto& h : entities) {
    if (h.type != EntityType::Supplement) continue;
    for (const auto& t : entities) {
      if (t.type == EntityType::Supplement) continue;
      ScoredPair sp;
      sp.instance = {doc.doc_id, h, t, RelationLabel::NoRelation};
      const auto x = encode_instance(sp.instance, doc, doc_vectors, model.config.encode);
      sp.probs = cnn_forward(model, x, false);
      sp.instance.label = argmax_label(sp.probs);
      out.push_back(std::move(sp));
    }
  }
  return out;
}

std::vector<RelationInstance> classify_pairs(const NormalizedDoc& doc,
                                             std::span<const EntitySpan> entities,
                                             const CnnModel& model,
                                             const Matrix& doc_vectors) {
  std::vector<RelationInstance> out;
  for (auto& sp : score_pairs(doc, entities, model, doc_vectors))
    if (sp.instance.label != RelationLabel::NoRelation) out.push_back(std::move(sp.instance));
  return out;
}

namespace {

using bundle::json;

json label_alphabet() {
  json a = json::array();
  for (int c = 0; c < kNumRelationLabels; ++c)
    a.push_back(std::string(to_string(static_cast<RelationLabel>(c))));
  return a;
}

std::pair<std::size_t, std::size_t> slice_shape(const CnnModel& m, const std::string& name) {
  const std::size_t P = 2 * m.config.encode.max_len + 1, p = m.config.pos_dim;
  const std::size_t F = m.config.filters, C = kNumRelationLabels;
  if (name == "markers") return {kNumMarkers, m.word_dim};
  if (name == "pos_head" || name == "pos_tail") return {P, p};
  if (name == "conv.W") return {m.config.kernel * m.input_dim(), F};
  if (name == "out.W") return {F, C};
  return {1, m.params.slice_info(name).size};
}

}  // namespace

std::string to_json(const CnnModel& m) {
  const auto& c = m.config;
  json j;
  j["model_type"] = "cnn_re";
  j["version"] = bundle::kBundleVersion;
  j["label_alphabet"] = label_alphabet();
  j["feature_registry"] = json::array();
  j["hyperparameters"] = {{"word_dim", m.word_dim},
                          {"max_len", c.encode.max_len},
                          {"use_markers", c.encode.use_markers},
                          {"use_positions", c.encode.use_positions},
                          {"pad_to_max_len", c.encode.pad_to_max_len},
                          {"pos_dim", c.pos_dim},
                          {"filters", c.filters},
                          {"kernel", c.kernel},
                          {"dropout", c.dropout},
                          {"lr", c.lr},
                          {"weight_decay", c.weight_decay},
                          {"epochs", c.epochs},
                          {"batch_size", c.batch_size},
                          {"class_weights", c.class_weights},
                          {"seed", c.seed}};
  json w;
  for (const auto& s : m.params.slices()) {
    const auto [rows, cols] = slice_shape(m, s.name);
    const auto v = m.params.slice(s.name);
    w[s.name] = rows == 1 ? bundle::vector(v) : bundle::matrix(v, rows, cols);
  }
  j["weights"] = std::move(w);
  return j.dump();
}

CnnModel cnn_model_from_json(std::string_view text) {
  const json j = bundle::parse(text);
  try {
    if (bundle::field(j, "model_type").get<std::string>() != "cnn_re")
      throw ParseError("model bundle is not a cnn_re model");
    if (bundle::field(j, "label_alphabet") != label_alphabet())
      throw ParseError("model bundle has an unexpected label alphabet");
    const json& hp = bundle::field(j, "hyperparameters");
    CnnConfig c;
    c.encode.max_len = hp.at("max_len").get<std::size_t>();
    c.encode.use_markers = hp.at("use_markers").get<bool>();
    c.encode.use_positions = hp.at("use_positions").get<bool>();
    c.encode.pad_to_max_len = hp.at("pad_to_max_len").get<bool>();
    c.pos_dim = hp.at("pos_dim").get<std::size_t>();
    c.filters = hp.at("filters").get<std::size_t>();
    c.kernel = hp.at("kernel").get<std::size_t>();
    c.dropout = hp.at("dropout").get<double>();
    c.lr = hp.at("lr").get<double>();
    c.weight_decay = hp.at("weight_decay").get<double>();
    c.epochs = hp.at("epochs").get<int>();
    c.batch_size = hp.at("batch_size").get<std::size_t>();
    c.class_weights = hp.at("class_weights").get<bool>();
    c.seed = hp.at("seed").get<std::uint64_t>();
    CnnModel m = cnn_init(hp.at("word_dim").get<std::size_t>(), c);
    const json& w = bundle::field(j, "weights");
    for (const auto& s : m.params.slices()) {
      const auto v = bundle::flatten(w.at(s.name), s.size, s.name);
      std::copy(v.begin(), v.end(), m.params.values().begin() + static_cast<std::ptrdiff_t>(s.offset));
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model bundle: ") + e.what());
  }
}

std::string scored_pair_json(const ScoredPair& pair, const NormalizedDoc& doc) {
  auto span_json = [&](const EntitySpan& s) {
    return json{{"type", std::string(to_string(s.type))},
                {"start", s.char_start},
                {"end", s.char_end},
                {"text", doc.normalized_text.substr(s.char_start, s.char_end - s.char_start)}};
  };
  json j{{"doc_id", pair.instance.doc_id},
         {"head_span", span_json(pair.instance.head)},
         {"tail_span", span_json(pair.instance.tail)},
         {"label", std::string(to_string(pair.instance.label))},
         {"probabilities", std::vector<double>(pair.probs.begin(), pair.probs.end())}};
  return j.dump();
}

}  // namespace dsae::relation
