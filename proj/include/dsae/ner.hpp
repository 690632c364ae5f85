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

#ifndef DSAE_NER_HPP_
#define DSAE_NER_HPP_

// Concept extraction over BIO labels: token featurisation, a one-vs-rest
// linear SVM, a linear-chain CRF trained by L-BFGS with elastic net, and a
// bidirectional LSTM-CRF trained by Adam. All three decode into EntitySpans.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dsae/annotation.hpp"
#include "dsae/corpus.hpp"
#include "dsae/embeddings.hpp"
#include "dsae/numeric.hpp"

namespace dsae::ner {

using annotation::BioLabel;
using annotation::EntitySpan;
using normalize::NormalizedDoc;
using numeric::Matrix;

// ---------------------------------------------------------------------------
// Features

struct FeatureContext {
  const embeddings::TokenVectors* vectors = nullptr;  // optional dense part
  const corpus::Lexicon* lexicon = nullptr;            // optional, any category
};

struct TokenFeatures {
  std::vector<std::string> indicators;
  std::vector<double> dense;  // embedding row (zeros when OOV)
  bool oov = false;
};

// Indicators: w[-2..2] with <s>/</s> sentinels, p[-1..1] POS tags,
// pre3/pre4/suf3/suf4, digit, punct, lexicon category with B/I position,
// and a constant bias. Tokens without a POS tag use fallback_pos.
std::vector<TokenFeatures> featurize(const NormalizedDoc& doc,
                                     const FeatureContext& ctx);

// Indicator-name to column index. Frozen after training; unknown names are
// ignored at inference.
class FeatureRegistry {
 public:
  std::uint32_t add(const std::string& name);
  std::optional<std::uint32_t> find(const std::string& name) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

// Registry-resolved features of one sequence. Dense columns are the
// embedding followed by the OOV flag.
struct EncodedSeq {
  std::vector<std::vector<std::uint32_t>> active;
  Matrix dense;
  std::size_t size() const { return active.size(); }
};

EncodedSeq encode(std::span<const TokenFeatures> features,
                  const FeatureRegistry& registry, std::size_t dense_dim);

struct NerExample {
  NormalizedDoc doc;
  std::vector<BioLabel> labels;
};

// ---------------------------------------------------------------------------
// Linear-chain CRF primitives over L x K unary scores and a K x K row-major
// transition matrix (from-label major). Labels are plain indices.

struct ViterbiResult {
  std::vector<int> path;
  double score = 0.0;
};

// Ties go to the lowest label index, both at backpointers and at the end.
ViterbiResult viterbi(const Matrix& unary, std::span<const double> transitions);

double path_score(const Matrix& unary, std::span<const double> transitions,
                  std::span<const int> path);

double log_partition(const Matrix& unary, std::span<const double> transitions);

struct Marginals {
  double log_z = 0.0;
  Matrix node;               // L x K
  std::vector<double> edge;  // K x K, summed over positions
};

Marginals marginals(const Matrix& unary, std::span<const double> transitions);

// log Z - score(gold). Adds d/d unary into `unary_grad` (L x K) and
// d/d transitions into `transition_grad` when they are non-empty.
double chain_nll(const Matrix& unary, std::span<const double> transitions,
                 std::span<const int> gold, Matrix* unary_grad,
                 std::span<double> transition_grad);

// ---------------------------------------------------------------------------
// Linear models (CRF and SVM share the unary layout: weights[f * K + k] over
// sparse columns followed by dense columns).

Matrix linear_scores(std::span<const double> weights, std::size_t num_labels,
                     std::size_t num_sparse, const EncodedSeq& seq);

struct CrfConfig {
  double c1 = 0.1;
  double c2 = 0.1;
  int max_iterations = 200;
  double tolerance = 1e-5;
  int memory = 10;
};

struct CrfModel {
  FeatureRegistry registry;
  std::size_t embedding_dim = 0;
  std::size_t num_labels = annotation::kNumBioLabels;
  // Unary block ((|registry| + embedding_dim + 1) * K) then K x K transitions.
  std::vector<double> weights;
  CrfConfig config;

  std::size_t dense_dim() const { return embedding_dim + 1; }
  std::size_t unary_size() const {
    return (registry.size() + dense_dim()) * num_labels;
  }
  std::span<const double> unary() const { return {weights.data(), unary_size()}; }
  std::span<const double> transitions() const {
    return {weights.data() + unary_size(), num_labels * num_labels};
  }
};

// NLL of one sequence; the gradient (same layout as model.weights) is
// accumulated into `grad` when non-empty.
double crf_neg_log_likelihood(const CrfModel& model, const EncodedSeq& seq,
                              std::span<const int> gold, std::span<double> grad);

struct CrfTrainResult {
  CrfModel model;
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
};

// Registry built from the training features. Minimises the summed NLL plus
// the elastic net over every weight.
CrfTrainResult crf_train(std::span<const NerExample> train,
                         const FeatureContext& ctx, const CrfConfig& config);

std::vector<BioLabel> crf_decode(const CrfModel& model, const NormalizedDoc& doc,
                                 const FeatureContext& ctx);

struct SvmConfig {
  int epochs = 10;
  double lr = 0.1;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

struct SvmModel {
  FeatureRegistry registry;
  std::size_t embedding_dim = 0;
  std::size_t num_labels = annotation::kNumBioLabels;
  std::vector<double> weights;  // (|registry| + embedding_dim + 1) * K
  std::vector<double> bias;     // K, unregularised
  SvmConfig config;

  std::size_t dense_dim() const { return embedding_dim + 1; }
};

// One-vs-rest hinge loss by seeded SGD with L2 shrinkage.
SvmModel svm_train(std::span<const NerExample> train, const FeatureContext& ctx,
                   const SvmConfig& config);
// Per-token argmax margin, ties to the lowest label index.
std::vector<int> svm_predict(const SvmModel& model, const EncodedSeq& seq);
std::vector<BioLabel> svm_decode(const SvmModel& model, const NormalizedDoc& doc,
                                 const FeatureContext& ctx);

// ---------------------------------------------------------------------------
// BiLSTM-CRF

struct LstmCrfConfig {
  std::size_t hidden = 64;  // per direction
  int epochs = 40;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double clip_norm = 5.0;
  std::uint64_t seed = 0;
};

// Slices: fw.Wx (d x 4H), fw.Wh (H x 4H), fw.b (4H), the same for bw,
// proj.W (2H x K), proj.b (K), trans (K x K). Gate blocks are i, f, g, o.
struct LstmCrfModel {
  std::size_t input_dim = 0;
  std::size_t hidden = 64;
  std::size_t num_labels = annotation::kNumBioLabels;
  numeric::ParamVector params;
  LstmCrfConfig config;
};

// Orthogonal recurrent blocks, Glorot-uniform input and projection weights,
// forget-gate bias 1, zero transitions.
LstmCrfModel lstm_crf_init(std::size_t input_dim, const LstmCrfConfig& config,
                           std::size_t num_labels = annotation::kNumBioLabels);

// L x 2H concatenated forward/backward states.
Matrix lstm_states(const LstmCrfModel& model, const Matrix& inputs);
// L x K label scores.
Matrix lstm_crf_scores(const LstmCrfModel& model, const Matrix& inputs);

// NLL of one sequence; gradient accumulated into `grad` (params layout) when
// non-empty.
double lstm_crf_nll(const LstmCrfModel& model, const Matrix& inputs,
                    std::span<const int> gold, std::span<double> grad);

struct LstmTrainResult {
  LstmCrfModel model;
  int best_epoch = 0;
  double best_dev_f1 = 0.0;
  std::vector<double> epoch_loss;  // mean training NLL per epoch
};

// Adam on mini-batch mean NLL with global-norm clipping. The epoch with the
// best dev entity F1 is kept (last epoch when dev is empty). A non-finite
// loss raises NumericError naming the epoch and batch.
LstmTrainResult lstm_crf_train(std::span<const NerExample> train,
                               std::span<const NerExample> dev,
                               const embeddings::TokenVectors& vectors,
                               const LstmCrfConfig& config);

std::vector<BioLabel> lstm_crf_decode(const LstmCrfModel& model,
                                      const Matrix& inputs);

// ---------------------------------------------------------------------------
// Uniform access

using NerModel = std::variant<SvmModel, CrfModel, LstmCrfModel>;

std::string model_type(const NerModel& model);  // "svm", "crf", "lstm-crf"

std::vector<BioLabel> decode(const NerModel& model, const NormalizedDoc& doc,
                             const FeatureContext& ctx);

// featurize -> decode -> from_bio. Throws ConfigError when the model expects
// a different embedding dimension than ctx.vectors provides.
std::vector<EntitySpan> predict_entities(const NerModel& model,
                                         const NormalizedDoc& doc,
                                         const FeatureContext& ctx);

void check_dims(const NerModel& model, const FeatureContext& ctx);

// JSON bundle {model_type, version, label_alphabet, feature_registry,
// hyperparameters, weights}.
std::string to_json(const NerModel& model);
NerModel ner_model_from_json(std::string_view json);

// Token-level BIO labels of an annotated document (warnings from to_bio are
// appended when provided).
NerExample make_example(const annotation::AnnotatedDoc& doc,
                        std::vector<std::string>* warnings = nullptr);

}  // namespace dsae::ner

#endif  // DSAE_NER_HPP_
