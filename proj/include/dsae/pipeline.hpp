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

#ifndef DSAE_PIPELINE_HPP_
#define DSAE_PIPELINE_HPP_

// End-to-end extraction: an entity tagger feeds a relation classifier. Also
// end-to-end scoring with an FP/FN error taxonomy and the error-propagation
// comparison against relation classification on gold entities.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dsae/annotation.hpp"
#include "dsae/embeddings.hpp"
#include "dsae/evaluate.hpp"
#include "dsae/ner.hpp"
#include "dsae/relation.hpp"

namespace dsae::pipeline {

using annotation::AnnotatedDoc;
using annotation::EntitySpan;
using annotation::RelationInstance;
using normalize::NormalizedDoc;

class EntityTagger {
 public:
  virtual ~EntityTagger() = default;
  virtual std::vector<EntitySpan> predict(const NormalizedDoc& doc) const = 0;
};

class RelationClassifier {
 public:
  virtual ~RelationClassifier() = default;
  // Every (Supplement, Symptom/BodyOrgan) pair of `entities`, labelled.
  virtual std::vector<relation::ScoredPair> score(
      const NormalizedDoc& doc, std::span<const EntitySpan> entities) const = 0;
};

// Wraps a trained NER model. Throws ConfigError on an embedding-dimension
// mismatch.
class ModelTagger : public EntityTagger {
 public:
  ModelTagger(const ner::NerModel& model, ner::FeatureContext ctx);
  std::vector<EntitySpan> predict(const NormalizedDoc& doc) const override;

 private:
  const ner::NerModel* model_;
  ner::FeatureContext ctx_;
};

// Replays the gold entities of the given documents.
class OracleTagger : public EntityTagger {
 public:
  explicit OracleTagger(std::span<const AnnotatedDoc> docs);
  std::vector<EntitySpan> predict(const NormalizedDoc& doc) const override;

 private:
  std::map<std::string, std::vector<EntitySpan>> gold_;
};

// Drops each entity of the wrapped tagger independently with probability
// `rate`, seeded per document so results do not depend on call order.
class DropoutTagger : public EntityTagger {
 public:
  DropoutTagger(const EntityTagger& inner, double rate, std::uint64_t seed);
  std::vector<EntitySpan> predict(const NormalizedDoc& doc) const override;

 private:
  const EntityTagger* inner_;
  double rate_;
  std::uint64_t seed_;
};

// Wraps a trained CNN. Throws ConfigError on a word-dimension mismatch.
class CnnClassifier : public RelationClassifier {
 public:
  CnnClassifier(const relation::CnnModel& model,
                const embeddings::TokenVectors& vectors);
  std::vector<relation::ScoredPair> score(
      const NormalizedDoc& doc, std::span<const EntitySpan> entities) const override;

 private:
  const relation::CnnModel* model_;
  const embeddings::TokenVectors* vectors_;
};

// Gold label of each pair (NoRelation when unannotated), one-hot.
class OracleClassifier : public RelationClassifier {
 public:
  explicit OracleClassifier(std::span<const AnnotatedDoc> docs);
  std::vector<relation::ScoredPair> score(
      const NormalizedDoc& doc, std::span<const EntitySpan> entities) const override;

 private:
  std::map<std::string, std::vector<RelationInstance>> gold_;
};

// Every pair gets the same label.
class ConstantClassifier : public RelationClassifier {
 public:
  explicit ConstantClassifier(RelationLabel label) : label_(label) {}
  std::vector<relation::ScoredPair> score(
      const NormalizedDoc& doc, std::span<const EntitySpan> entities) const override;

 private:
  RelationLabel label_;
};

struct PipelineOutput {
  std::string doc_id;
  std::string text;  // normalized text the offsets refer to
  std::vector<EntitySpan> entities;
  std::vector<RelationInstance> relations;  // Indication / AdverseEvent only
  std::vector<relation::ScoredPair> scored;  // every candidate pair
};

PipelineOutput run_pipeline(const NormalizedDoc& doc, const EntityTagger& tagger,
                            const RelationClassifier& classifier);

// One JSON Lines record {doc_id, text, entities, relations, probabilities}.
std::string output_json(const PipelineOutput& out);
PipelineOutput output_from_json(std::string_view line);

struct ErrorBreakdown {
  long fp_spurious_relation = 0;
  long fp_wrong_entities = 0;
  long fn_mislabeled = 0;
  long fn_missed_label = 0;
  long fn_missed_entity = 0;

  long fp() const { return fp_spurious_relation + fp_wrong_entities; }
  long fn() const { return fn_mislabeled + fn_missed_label + fn_missed_entity; }
};

struct PipelineEval {
  std::map<RelationLabel, evaluate::LabelScore> scores;
  std::map<RelationLabel, ErrorBreakdown> errors;
  evaluate::EvalCounts entities;
  std::vector<PipelineOutput> outputs;  // in input order
};

// FP of label L: both endpoints match gold entities -> spurious relation,
// otherwise wrong entities. FN of label L: an endpoint missing from the
// predicted entities -> missed entity; else a different predicted label on
// the pair -> mislabeled; else missed label.
PipelineEval evaluate_pipeline(std::span<const AnnotatedDoc> gold,
                               const EntityTagger& tagger,
                               const RelationClassifier& classifier);

struct PropagationRow {
  RelationLabel label = RelationLabel::Indication;
  evaluate::LabelScore standalone;  // classifier on gold entities
  evaluate::LabelScore end_to_end;
  bool holds = false;  // end-to-end F1 <= standalone F1 + epsilon
};

struct PropagationReport {
  double epsilon = 0.01;
  std::vector<PropagationRow> rows;
  bool all_hold() const;
};

PropagationReport error_propagation_check(std::span<const AnnotatedDoc> gold,
                                          const EntityTagger& tagger,
                                          const RelationClassifier& classifier,
                                          double epsilon = 0.01);

}  // namespace dsae::pipeline

#endif  // DSAE_PIPELINE_HPP_
