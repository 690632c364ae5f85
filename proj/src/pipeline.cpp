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

#include "dsae/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "bundle.hpp"
#include "dsae/error.hpp"
#include "dsae/rng.hpp"

namespace dsae::pipeline {

ModelTagger::ModelTagger(const ner::NerModel& model, ner::FeatureContext ctx)
    : model_(&model), ctx_(ctx) {
  ner::check_dims(model, ctx);
}

std::vector<EntitySpan> ModelTagger::predict(const NormalizedDoc& doc) const {
  return ner::predict_entities(*model_, doc, ctx_);
}

OracleTagger::OracleTagger(std::span<const AnnotatedDoc> docs) {
  for (const auto& d : docs) gold_[d.doc.doc_id] = d.entities;
}

std::vector<EntitySpan> OracleTagger::predict(const NormalizedDoc& doc) const {
  auto it = gold_.find(doc.doc_id);
  return it == gold_.end() ? std::vector<EntitySpan>{} : it->second;
}

DropoutTagger::DropoutTagger(const EntityTagger& inner, double rate, std::uint64_t seed)
    : inner_(&inner), rate_(rate), seed_(seed) {
  if (rate < 0.0 || rate > 1.0) throw InvalidArgument("dropout rate must lie in [0, 1]");
}

std::vector<EntitySpan> DropoutTagger::predict(const NormalizedDoc& doc) const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : doc.doc_id) h = (h ^ c) * 1099511628211ULL;
  Rng rng(seed_ ^ h);
  std::vector<EntitySpan> out;
  for (auto& e : inner_->predict(doc))
    if (!rng.bernoulli(rate_)) out.push_back(std::move(e));
  return out;
}

CnnClassifier::CnnClassifier(const relation::CnnModel& model,
                             const embeddings::TokenVectors& vectors)
    : model_(&model), vectors_(&vectors) {
  if (vectors.dim() != model.word_dim)
    throw ConfigError("relation model expects word dimension " +
                      std::to_string(model.word_dim) + ", embeddings provide " +
                      std::to_string(vectors.dim()));
}

std::vector<relation::ScoredPair> CnnClassifier::score(
    const NormalizedDoc& doc, std::span<const EntitySpan> entities) const {
  const bool any = std::any_of(entities.begin(), entities.end(), [](const EntitySpan& e) {
    return e.type == EntityType::Supplement;
  });
  if (!any) return {};
  return relation::score_pairs(doc, entities, *model_, vectors_->vectors(doc));
}

namespace {

std::vector<relation::ScoredPair> label_pairs(
    const NormalizedDoc& doc, std::span<const EntitySpan> entities,
    const std::function<RelationLabel(const EntitySpan&, const EntitySpan&)>& label_of) {
  std::vector<relation::ScoredPair> out;
  for (const auto& h : entities) {
    if (h.type != EntityType::Supplement) continue;
    for (const auto& t : entities) {
      if (t.type == EntityType::Supplement) continue;
      relation::ScoredPair sp;
      sp.instance = {doc.doc_id, h, t, label_of(h, t)};
      sp.probs[static_cast<std::size_t>(sp.instance.label)] = 1.0;
      out.push_back(std::move(sp));
    }
  }
  return out;
}

}  // namespace

OracleClassifier::OracleClassifier(std::span<const AnnotatedDoc> docs) {
  for (const auto& d : docs) gold_[d.doc.doc_id] = d.relations;
}

std::vector<relation::ScoredPair> OracleClassifier::score(
    const NormalizedDoc& doc, std::span<const EntitySpan> entities) const {
  auto it = gold_.find(doc.doc_id);
  return label_pairs(doc, entities, [&](const EntitySpan& h, const EntitySpan& t) {
    if (it != gold_.end())
      for (const auto& r : it->second)
        if (r.head.same_span(h) && r.tail.same_span(t)) return r.label;
    return RelationLabel::NoRelation;
  });
}

std::vector<relation::ScoredPair> ConstantClassifier::score(
    const NormalizedDoc& doc, std::span<const EntitySpan> entities) const {
  return label_pairs(doc, entities, [&](const EntitySpan&, const EntitySpan&) { return label_; });
}

PipelineOutput run_pipeline(const NormalizedDoc& doc, const EntityTagger& tagger,
                            const RelationClassifier& classifier) {
  PipelineOutput out;
  out.doc_id = doc.doc_id;
  out.text = doc.normalized_text;
  out.entities = tagger.predict(doc);
  out.scored = classifier.score(doc, out.entities);
  for (const auto& sp : out.scored)
    if (sp.instance.label != RelationLabel::NoRelation) out.relations.push_back(sp.instance);
  return out;
}

namespace {

using bundle::json;

json entity_json(const EntitySpan& e, const std::string& text) {
  return json{{"id", e.id},
              {"type", std::string(to_string(e.type))},
              {"start", e.char_start},
              {"end", e.char_end},
              {"token_start", e.token_start},
              {"token_end", e.token_end},
              {"deficiency", e.deficiency},
              {"text", text.substr(e.char_start, e.char_end - e.char_start)}};
}

std::size_t entity_index(const std::vector<EntitySpan>& entities, const EntitySpan& e) {
  for (std::size_t i = 0; i < entities.size(); ++i)
    if (entities[i].same_span(e)) return i;
  throw InvalidArgument("relation endpoint is not a predicted entity");
}

}  // namespace

std::string output_json(const PipelineOutput& out) {
  json ents = json::array();
  for (const auto& e : out.entities) ents.push_back(entity_json(e, out.text));
  json rels = json::array();
  for (const auto& r : out.relations)
    rels.push_back({{"head", entity_index(out.entities, r.head)},
                    {"tail", entity_index(out.entities, r.tail)},
                    {"label", std::string(to_string(r.label))}});
  json probs = json::array();
  for (const auto& sp : out.scored)
    probs.push_back({{"head", entity_index(out.entities, sp.instance.head)},
                     {"tail", entity_index(out.entities, sp.instance.tail)},
                     {"values", std::vector<double>(sp.probs.begin(), sp.probs.end())}});
  json j{{"doc_id", out.doc_id},
         {"text", out.text},
         {"entities", std::move(ents)},
         {"relations", std::move(rels)},
         {"probabilities", std::move(probs)}};
  return j.dump();
}

PipelineOutput output_from_json(std::string_view line) {
  const json j = bundle::parse(line);
  try {
    PipelineOutput out;
    out.doc_id = j.at("doc_id").get<std::string>();
    out.text = j.at("text").get<std::string>();
    for (const auto& e : j.at("entities")) {
      EntitySpan s;
      s.id = e.at("id").get<std::string>();
      const auto type = parse_entity_type(e.at("type").get<std::string>());
      if (!type) throw ParseError("unknown entity type in pipeline output");
      s.type = *type;
      s.char_start = e.at("start").get<std::size_t>();
      s.char_end = e.at("end").get<std::size_t>();
      s.token_start = e.value("token_start", std::size_t{0});
      s.token_end = e.value("token_end", std::size_t{0});
      s.deficiency = e.value("deficiency", false);
      if (s.char_start >= s.char_end || s.char_end > out.text.size())
        throw ParseError("entity offsets outside the text of " + out.doc_id);
      out.entities.push_back(std::move(s));
    }
    auto endpoint = [&](const json& r, const char* key) -> const EntitySpan& {
      const auto i = r.at(key).get<std::size_t>();
      if (i >= out.entities.size()) throw ParseError("relation endpoint out of range");
      return out.entities[i];
    };
    for (const auto& r : j.at("relations")) {
      const auto label = parse_relation_label(r.at("label").get<std::string>());
      if (!label) throw ParseError("unknown relation label in pipeline output");
      out.relations.push_back({out.doc_id, endpoint(r, "head"), endpoint(r, "tail"), *label});
    }
    if (auto it = j.find("probabilities"); it != j.end())
      for (const auto& p : *it) {
        relation::ScoredPair sp;
        const auto v = bundle::flatten(p.at("values"), kNumRelationLabels, "probabilities");
        std::copy(v.begin(), v.end(), sp.probs.begin());
        sp.instance = {out.doc_id, endpoint(p, "head"), endpoint(p, "tail"),
                       relation::argmax_label(sp.probs)};
        out.scored.push_back(std::move(sp));
      }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("pipeline output: ") + e.what());
  }
}

namespace {

using SpanKey = std::tuple<int, std::size_t, std::size_t>;
using PairKey = std::pair<SpanKey, SpanKey>;

SpanKey span_key(const EntitySpan& e) {
  return {static_cast<int>(e.type), e.char_start, e.char_end};
}

PairKey pair_key(const RelationInstance& r) { return {span_key(r.head), span_key(r.tail)}; }

}  // namespace

PipelineEval evaluate_pipeline(std::span<const AnnotatedDoc> gold,
                               const EntityTagger& tagger,
                               const RelationClassifier& classifier) {
  PipelineEval ev;
  std::vector<RelationInstance> all_gold, all_pred;
  const RelationLabel labels[] = {RelationLabel::Indication, RelationLabel::AdverseEvent};
  for (RelationLabel l : labels) ev.errors[l] = {};

  for (const auto& doc : gold) {
    PipelineOutput out = run_pipeline(doc.doc, tagger, classifier);
    ev.entities += evaluate::align_spans(doc.entities, out.entities);
    all_gold.insert(all_gold.end(), doc.relations.begin(), doc.relations.end());
    all_pred.insert(all_pred.end(), out.relations.begin(), out.relations.end());

    std::set<SpanKey> gold_ents, pred_ents;
    for (const auto& e : doc.entities) gold_ents.insert(span_key(e));
    for (const auto& e : out.entities) pred_ents.insert(span_key(e));
    std::map<PairKey, std::set<RelationLabel>> pred_labels;
    for (const auto& r : out.relations) pred_labels[pair_key(r)].insert(r.label);

    for (RelationLabel l : labels) {
      std::set<PairKey> g, p;
      for (const auto& r : doc.relations)
        if (r.label == l) g.insert(pair_key(r));
      for (const auto& r : out.relations)
        if (r.label == l) p.insert(pair_key(r));
      auto& err = ev.errors[l];
      for (const auto& k : p) {
        if (g.count(k)) continue;
        if (gold_ents.count(k.first) && gold_ents.count(k.second))
          ++err.fp_spurious_relation;
        else
          ++err.fp_wrong_entities;
      }
      for (const auto& k : g) {
        if (p.count(k)) continue;
        if (!pred_ents.count(k.first) || !pred_ents.count(k.second)) {
          ++err.fn_missed_entity;
          continue;
        }
        auto it = pred_labels.find(k);
        if (it != pred_labels.end() && !it->second.empty())
          ++err.fn_mislabeled;
        else
          ++err.fn_missed_label;
      }
    }
    ev.outputs.push_back(std::move(out));
  }
  ev.scores = evaluate::relation_metrics(all_gold, all_pred);
  return ev;
}

bool PropagationReport::all_hold() const {
  return std::all_of(rows.begin(), rows.end(), [](const PropagationRow& r) { return r.holds; });
}

PropagationReport error_propagation_check(std::span<const AnnotatedDoc> gold,
                                          const EntityTagger& tagger,
                                          const RelationClassifier& classifier,
                                          double epsilon) {
  const OracleTagger oracle(gold);
  const PipelineEval standalone = evaluate_pipeline(gold, oracle, classifier);
  const PipelineEval e2e = evaluate_pipeline(gold, tagger, classifier);
  PropagationReport rep;
  rep.epsilon = epsilon;
  for (RelationLabel l : {RelationLabel::Indication, RelationLabel::AdverseEvent}) {
    PropagationRow row;
    row.label = l;
    row.standalone = standalone.scores.at(l);
    row.end_to_end = e2e.scores.at(l);
    row.holds = row.end_to_end.m.f1 <= row.standalone.m.f1 + epsilon;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace dsae::pipeline
