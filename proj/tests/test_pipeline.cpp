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

#include <string>
#include <vector>

#include "doctest.h"
#include "dsae/pipeline.hpp"
#include "dsae/rng.hpp"

using namespace dsae;
using namespace dsae::pipeline;

namespace {

EntitySpan token_span(const NormalizedDoc& d, EntityType type, std::size_t ts, std::size_t te,
                      const std::string& id) {
  EntitySpan e;
  e.id = id;
  e.type = type;
  e.token_start = ts;
  e.token_end = te;
  e.char_start = d.tokens[ts].start;
  e.char_end = d.tokens[te - 1].end;
  return e;
}

// Ten-token documents with random entities and random gold relations.
std::vector<AnnotatedDoc> random_docs(Rng& rng, std::size_t n) {
  std::vector<AnnotatedDoc> out;
  for (std::size_t k = 0; k < n; ++k) {
    AnnotatedDoc a;
    std::string text;
    for (int i = 0; i < 10; ++i) text += (i ? " t" : "t") + std::to_string(i);
    a.doc = normalize::normalize("doc" + std::to_string(k), text);
    std::size_t i = 0;
    while (i < 10) {
      if (rng.bernoulli(0.45)) {
        const std::size_t len = 1 + rng.below(std::min<std::size_t>(2, 10 - i));
        a.entities.push_back(token_span(a.doc, kEntityTypes[rng.below(3)], i, i + len,
                                        "T" + std::to_string(a.entities.size() + 1)));
        i += len;
      } else {
        ++i;
      }
    }
    for (const auto& h : a.entities)
      for (const auto& t : a.entities) {
        if (h.type != EntityType::Supplement || t.type == EntityType::Supplement) continue;
        const auto roll = rng.below(3);
        if (roll == 0) continue;
        RelationInstance r;
        r.doc_id = a.doc.doc_id;
        r.head = h;
        r.tail = t;
        r.label = roll == 1 ? RelationLabel::Indication : RelationLabel::AdverseEvent;
        a.relations.push_back(r);
      }
    out.push_back(a);
  }
  return out;
}

std::size_t gold_count(const std::vector<AnnotatedDoc>& docs, RelationLabel l) {
  std::size_t n = 0;
  for (const auto& d : docs)
    for (const auto& r : d.relations) n += r.label == l;
  return n;
}

// Gold entities with every other one shifted by a token, plus one spurious.
class NoisyTagger : public EntityTagger {
 public:
  explicit NoisyTagger(std::span<const AnnotatedDoc> docs) : oracle_(docs) {}
  std::vector<EntitySpan> predict(const NormalizedDoc& doc) const override {
    auto ents = oracle_.predict(doc);
    for (std::size_t i = 0; i < ents.size(); i += 2)
      if (ents[i].token_end < doc.tokens.size() && ents[i].token_end - ents[i].token_start == 1) {
        ents[i].token_end += 1;
        ents[i].char_end = doc.tokens[ents[i].token_end - 1].end;
      }
    return ents;
  }

 private:
  OracleTagger oracle_;
};

}  // namespace

TEST_CASE("oracle components score perfectly") {
  Rng rng(1);
  const auto docs = random_docs(rng, 30);
  OracleTagger tagger(docs);
  OracleClassifier classifier(docs);
  const auto ev = evaluate_pipeline(docs, tagger, classifier);
  for (auto l : {RelationLabel::Indication, RelationLabel::AdverseEvent}) {
    CHECK(ev.scores.at(l).m.f1 == 1.0);
    CHECK(ev.errors.at(l).fp() == 0);
    CHECK(ev.errors.at(l).fn() == 0);
  }
  CHECK(ev.entities.mis == 0);
  CHECK(ev.entities.spu == 0);
  CHECK(ev.outputs.size() == docs.size());
  const auto prop = error_propagation_check(docs, tagger, classifier);
  CHECK(prop.all_hold());
}

TEST_CASE("constant classifier errors are mislabels and spurious relations") {
  Rng rng(2);
  const auto docs = random_docs(rng, 20);
  OracleTagger tagger(docs);
  ConstantClassifier always(RelationLabel::Indication);
  const auto ev = evaluate_pipeline(docs, tagger, always);
  const auto& ae = ev.errors.at(RelationLabel::AdverseEvent);
  CHECK(ae.fn_mislabeled == static_cast<long>(gold_count(docs, RelationLabel::AdverseEvent)));
  CHECK(ae.fn_missed_entity == 0);
  CHECK(ae.fp() == 0);
  const auto& ind = ev.errors.at(RelationLabel::Indication);
  CHECK(ind.fp_wrong_entities == 0);
  CHECK(ind.fp_spurious_relation == ev.scores.at(RelationLabel::Indication).fp);
  CHECK(ev.scores.at(RelationLabel::Indication).fn == 0);
}

TEST_CASE("error taxonomy reconciles with the tallies") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto docs = random_docs(rng, 15);
    OracleTagger oracle(docs);
    NoisyTagger noisy(docs);
    DropoutTagger dropped(noisy, 0.3, static_cast<std::uint64_t>(trial));
    ConstantClassifier ae(RelationLabel::AdverseEvent);
    OracleClassifier gold(docs);
    for (const RelationClassifier* c : {static_cast<const RelationClassifier*>(&ae),
                                        static_cast<const RelationClassifier*>(&gold)}) {
      const auto ev = evaluate_pipeline(docs, dropped, *c);
      for (auto l : {RelationLabel::Indication, RelationLabel::AdverseEvent}) {
        const auto& s = ev.scores.at(l);
        const auto& e = ev.errors.at(l);
        CHECK(s.fp == e.fp());
        CHECK(s.fn == e.fn());
        CHECK(s.tp + s.fn == static_cast<long>(gold_count(docs, l)));
      }
    }
  }
}

TEST_CASE("dropout tagger") {
  Rng rng(4);
  const auto docs = random_docs(rng, 10);
  OracleTagger oracle(docs);
  DropoutTagger none(oracle, 0.0, 1), all(oracle, 1.0, 1), half(oracle, 0.5, 9);
  for (const auto& d : docs) {
    CHECK(none.predict(d.doc).size() == d.entities.size());
    CHECK(all.predict(d.doc).empty());
  }
  // Per-document seeding: order of calls does not matter.
  const auto last_first = half.predict(docs.back().doc);
  for (const auto& d : docs) half.predict(d.doc);
  const auto again = half.predict(docs.back().doc);
  REQUIRE(again.size() == last_first.size());
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].same_span(last_first[i]));

  OracleClassifier classifier(docs);
  const auto ev = evaluate_pipeline(docs, all, classifier);
  for (auto l : {RelationLabel::Indication, RelationLabel::AdverseEvent})
    CHECK(ev.errors.at(l).fn_missed_entity == static_cast<long>(gold_count(docs, l)));
}

TEST_CASE("pipeline output JSON round trip") {
  Rng rng(5);
  const auto docs = random_docs(rng, 5);
  OracleTagger tagger(docs);
  OracleClassifier classifier(docs);
  for (const auto& d : docs) {
    const auto out = run_pipeline(d.doc, tagger, classifier);
    CHECK(out.relations.size() == d.relations.size());
    const auto line = output_json(out);
    CHECK(line.find('\n') == std::string::npos);
    const auto back = output_from_json(line);
    CHECK(back.doc_id == out.doc_id);
    CHECK(back.text == out.text);
    REQUIRE(back.entities.size() == out.entities.size());
    for (std::size_t i = 0; i < out.entities.size(); ++i)
      CHECK(back.entities[i].same_span(out.entities[i]));
    REQUIRE(back.relations.size() == out.relations.size());
    for (std::size_t i = 0; i < out.relations.size(); ++i) {
      CHECK(back.relations[i].label == out.relations[i].label);
      CHECK(back.relations[i].head.same_span(out.relations[i].head));
    }
    CHECK(output_json(back) == line);
  }
}
