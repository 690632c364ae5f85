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

#ifndef DSAE_RELATION_HPP_
#define DSAE_RELATION_HPP_

// Relation classification for (Supplement, Symptom/BodyOrgan) pairs: entity
// markers plus relative-position embeddings feeding a one-layer CNN with
// max-pooling and a softmax over [NoRelation, Indication, AdverseEvent].

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsae/annotation.hpp"
#include "dsae/embeddings.hpp"
#include "dsae/numeric.hpp"
#include "dsae/rng.hpp"

namespace dsae::relation {

using annotation::EntitySpan;
using annotation::RelationInstance;
using normalize::NormalizedDoc;
using numeric::Matrix;

using Probabilities = std::array<double, kNumRelationLabels>;

enum Marker : int {
  kPad = -2,
  kToken = -1,
  kHeadOpen = 0,
  kHeadClose = 1,
  kTailOpen = 2,
  kTailClose = 3,
};
inline constexpr int kNumMarkers = 4;

struct EncodeConfig {
  std::size_t max_len = 64;
  bool use_markers = true;
  bool use_positions = true;
  bool pad_to_max_len = false;
};

// One row per emitted item. `kind` is a Marker value; for kToken rows
// `token` is the index in the document and `words` holds its vector.
struct EncodedInstance {
  std::vector<int> kind;
  std::vector<long> token;
  std::vector<int> pos_head;  // shifted into [0, 2 * max_len]
  std::vector<int> pos_tail;
  Matrix words;               // rows x d, zero for marker and pad rows
  std::size_t size() const { return kind.size(); }
};

// Signed distance from token i to the nearest token of [start, end).
long relative_position(long i, long start, long end);

// Throws InvalidArgument when a span lies outside the document, is empty,
// or head and tail are the same span.
EncodedInstance encode_instance(const RelationInstance& instance,
                                const NormalizedDoc& doc,
                                const Matrix& doc_vectors,
                                const EncodeConfig& config = {});

struct CnnConfig {
  EncodeConfig encode;
  std::size_t pos_dim = 5;
  std::size_t filters = 256;
  std::size_t kernel = 3;  // odd, same padding
  double dropout = 0.2;
  double lr = 1e-4;
  double weight_decay = 1e-5;
  int epochs = 40;
  std::size_t batch_size = 32;
  bool class_weights = true;
  std::uint64_t seed = 0;
};

// Slices: markers (4 x d), pos_head and pos_tail ((2 max_len + 1) x p),
// conv.W (kernel * in x F, input-major), conv.b (F), out.W (F x 3), out.b (3),
// where in = d + 2p.
struct CnnModel {
  std::size_t word_dim = 0;
  CnnConfig config;
  numeric::ParamVector params;

  std::size_t input_dim() const { return word_dim + 2 * config.pos_dim; }
};

CnnModel cnn_init(std::size_t word_dim, const CnnConfig& config);

struct CnnCache {
  Matrix inputs;                      // rows x in
  Matrix conv;                        // rows x F, after ReLU
  std::vector<std::size_t> argmax;    // per filter
  std::vector<double> pooled;         // after dropout
  std::vector<double> mask;           // dropout scale per filter
  Probabilities probs{};
};

// `rng` is used only when train_mode is true and dropout > 0.
Probabilities cnn_forward(const CnnModel& model, const EncodedInstance& x,
                          bool train_mode, Rng* rng = nullptr,
                          CnnCache* cache = nullptr);

// Weighted cross-entropy of one instance (weight * -log p[label]); the
// gradient is accumulated into `grad` when non-empty.
double cnn_loss(const CnnModel& model, const EncodedInstance& x, int label,
                double weight, std::span<double> grad, bool train_mode = false,
                Rng* rng = nullptr);

// N / (C * n_c) over the observed labels; absent labels get weight 0.
std::array<double, kNumRelationLabels> class_weights(std::span<const int> labels);

struct LabeledInstance {
  std::string doc_id;
  EncodedInstance x;
  RelationLabel label = RelationLabel::NoRelation;
};

// Every candidate pair of each document, labelled from its gold relations.
std::vector<LabeledInstance> encode_corpus(
    std::span<const annotation::AnnotatedDoc> docs,
    const embeddings::TokenVectors& vectors, const EncodeConfig& config);

struct CnnTrainResult {
  CnnModel model;
  int best_epoch = 0;
  double best_dev_macro_f1 = 0.0;
  std::vector<double> epoch_loss;
  std::vector<std::string> warnings;
};

// Adam on batch-mean weighted cross-entropy; the best dev macro-F1 epoch is
// kept (last epoch when dev is empty).
CnnTrainResult cnn_train(std::span<const LabeledInstance> train,
                         std::span<const LabeledInstance> dev,
                         std::size_t word_dim, const CnnConfig& config);

// Argmax with ties resolved toward the lower label index (NoRelation first).
RelationLabel argmax_label(const Probabilities& p);

// Macro F1 over the three classes of instance-level predictions.
double macro_f1(std::span<const int> gold, std::span<const int> predicted);

struct ScoredPair {
  RelationInstance instance;  // label = predicted label
  Probabilities probs{};
};

// All (Supplement, Symptom/BodyOrgan) pairs of `entities`, in entity order.
std::vector<ScoredPair> score_pairs(const NormalizedDoc& doc,
                                    std::span<const EntitySpan> entities,
                                    const CnnModel& model,
                                    const Matrix& doc_vectors);

// score_pairs without the NoRelation predictions.
std::vector<RelationInstance> classify_pairs(const NormalizedDoc& doc,
                                             std::span<const EntitySpan> entities,
                                             const CnnModel& model,
                                             const Matrix& doc_vectors);

std::string to_json(const CnnModel& model);
CnnModel cnn_model_from_json(std::string_view json);

// {doc_id, head_span, tail_span, label, probabilities}
std::string scored_pair_json(const ScoredPair& pair, const NormalizedDoc& doc);

}  // namespace dsae::relation

#endif  // DSAE_RELATION_HPP_
