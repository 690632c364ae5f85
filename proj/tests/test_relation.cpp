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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "dsae/error.hpp"
#include "dsae/relation.hpp"

using namespace dsae;
using namespace dsae::relation;
using annotation::AnnotatedDoc;

namespace {

EntitySpan span_of(const NormalizedDoc& d, EntityType type, std::size_t ts, std::size_t te,
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

Matrix random_rows(Rng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (auto& v : m.data) v = rng.uniform(-1.0, 1.0);
  return m;
}

CnnConfig small_config() {
  CnnConfig c;
  c.encode.max_len = 12;
  c.pos_dim = 2;
  c.filters = 5;
  c.dropout = 0.0;
  return c;
}

// "<supp> <cue> <target>" documents whose cue decides the label.
std::vector<AnnotatedDoc> cue_docs() {
  const char* supps[] = {"zinc", "biotin", "kava", "iron", "niacin"};
  const char* targets[] = {"cough", "acne", "rash", "skin", "nausea"};
  struct Cue {
    const char* words;
    RelationLabel label;
  };
  const Cue cues[] = {{"really cured my", RelationLabel::Indication},
                      {"gave me bad", RelationLabel::AdverseEvent},
                      {"and also some", RelationLabel::NoRelation}};
  std::vector<AnnotatedDoc> out;
  for (int i = 0; i < 12; ++i) {
    const auto& cue = cues[i % 3];
    AnnotatedDoc a;
    a.doc = normalize::normalize("d" + std::to_string(i),
                                 std::string(supps[i % 5]) + " " + cue.words + " " +
                                     targets[(i * 2) % 5]);
    a.entities = {span_of(a.doc, EntityType::Supplement, 0, 1, "T1"),
                  span_of(a.doc, EntityType::Symptom, 4, 5, "T2")};
    if (cue.label != RelationLabel::NoRelation) {
      annotation::RelationInstance r;
      r.doc_id = a.doc.doc_id;
      r.head = a.entities[0];
      r.tail = a.entities[1];
      r.label = cue.label;
      a.relations.push_back(r);
    }
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("relative_position") {
  CHECK(relative_position(0, 3, 5) == -3);
  CHECK(relative_position(3, 3, 5) == 0);
  CHECK(relative_position(4, 3, 5) == 0);
  CHECK(relative_position(7, 3, 5) == 3);
}

TEST_CASE("encode_instance places markers around both arguments") {
  const auto d = normalize::normalize("d", "fish oil gave me a headache");
  RelationInstance r;
  r.head = span_of(d, EntityType::Supplement, 0, 2, "T1");
  r.tail = span_of(d, EntityType::Symptom, 5, 6, "T2");
  Rng rng(1);
  const auto vecs = random_rows(rng, 6, 3);
  const auto e = encode_instance(r, d, vecs);
  CHECK(e.kind == std::vector<int>{kHeadOpen, kToken, kToken, kHeadClose, kToken, kToken,
                                   kToken, kTailOpen, kToken, kTailClose});
  CHECK(e.token[1] == 0);
  CHECK(e.token[8] == 5);
  CHECK(e.words(8, 2) == vecs(5, 2));
  CHECK(e.words(0, 0) == 0.0);
  // Positions are offset by max_len.
  CHECK(e.pos_head[4] == 64 + 1);
  CHECK(e.pos_tail[4] == 64 - 3);

  EncodeConfig plain;
  plain.use_markers = false;
  CHECK(encode_instance(r, d, vecs, plain).size() == 6);

  EncodeConfig tight;
  tight.max_len = 6;
  const auto cut = encode_instance(r, d, vecs, tight);
  CHECK(cut.size() <= 6 + 4);

  RelationInstance same = r;
  same.tail = same.head;
  same.tail.type = EntityType::Symptom;
  CHECK_THROWS_AS(encode_instance(same, d, vecs), InvalidArgument);
  RelationInstance outside = r;
  outside.tail.token_end = 9;
  CHECK_THROWS_AS(encode_instance(outside, d, vecs), InvalidArgument);
}

TEST_CASE("CNN outputs and gradient") {
  Rng rng(6);
  const auto d = normalize::normalize("d", "kava made my head spin badly today");
  RelationInstance r;
  r.head = span_of(d, EntityType::Supplement, 0, 1, "T1");
  r.tail = span_of(d, EntityType::Symptom, 3, 5, "T2");
  const auto vecs = random_rows(rng, d.tokens.size(), 3);
  auto cfg = small_config();

  auto zero = cnn_init(3, cfg);
  for (auto& v : zero.params.values()) v = 0.0;
  const auto x = encode_instance(r, d, vecs, cfg.encode);
  for (double p : cnn_forward(zero, x, false)) CHECK(p == doctest::Approx(1.0 / 3.0));
  CHECK(argmax_label({1.0 / 3, 1.0 / 3, 1.0 / 3}) == RelationLabel::NoRelation);

  auto model = cnn_init(3, cfg);
  for (const char* s : {"conv.b", "out.b"})
    for (auto& v : model.params.slice(s)) v = rng.uniform(-0.5, 0.5);
  const auto p = cnn_forward(model, x, false);
  CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));

  // Padding to max_len does not change the output.
  auto padded_cfg = cfg.encode;
  padded_cfg.pad_to_max_len = true;
  const auto xp = encode_instance(r, d, vecs, padded_cfg);
  CHECK(xp.size() == cfg.encode.max_len);
  const auto pp = cnn_forward(model, xp, false);
  for (int k = 0; k < 3; ++k) CHECK(pp[k] == doctest::Approx(p[k]).epsilon(1e-12));

  numeric::Objective f = [&](std::span<const double> w, std::span<double> g) {
    CnnModel m = model;
    m.params.values().assign(w.begin(), w.end());
    std::fill(g.begin(), g.end(), 0.0);
    return cnn_loss(m, x, 2, 1.7, g);
  };
  CHECK(numeric::grad_check(f, model.params.values()) < 1e-6);
}

TEST_CASE("class weights") {
  const std::vector<int> labels = {0, 0, 0, 0, 0, 0, 1, 1, 2};
  const auto w = class_weights(labels);
  CHECK(w[0] == doctest::Approx(9.0 / (3 * 6)));
  CHECK(w[1] == doctest::Approx(9.0 / (3 * 2)));
  CHECK(w[2] == doctest::Approx(9.0 / (3 * 1)));
  const auto partial = class_weights(std::vector<int>{0, 0, 1});
  CHECK(partial[2] == 0.0);
  CHECK(partial[0] == doctest::Approx(3.0 / 4.0));
  // Weighted counts are equal across present classes.
  CHECK(w[0] * 6 == doctest::Approx(w[2] * 1));
}

TEST_CASE("macro F1") {
  CHECK(macro_f1(std::vector<int>{0, 1, 2}, std::vector<int>{0, 1, 2}) == doctest::Approx(1.0));
  // Class 0: P=1/2 R=1 F=2/3; class 1: P=1 R=1/2 F=2/3; class 2: F=1.
  CHECK(macro_f1(std::vector<int>{0, 1, 1, 2}, std::vector<int>{0, 0, 1, 2}) ==
        doctest::Approx((2.0 / 3 + 2.0 / 3 + 1.0) / 3));
}

TEST_CASE("CNN fits cue-determined relations") {
  const auto docs = cue_docs();
  embeddings::EmbeddingTable table(6);
  Rng rng(12);
  for (const auto& a : docs)
    for (const auto& t : a.doc.tokens) {
      std::vector<double> v(6);
      for (auto& x : v) x = rng.uniform(-1.0, 1.0);
      table.add(t.surface, v);
    }
  embeddings::StaticVectors sv(table);
  auto cfg = small_config();
  cfg.filters = 16;
  cfg.lr = 0.02;
  cfg.epochs = 80;
  cfg.batch_size = 4;
  const auto inst = encode_corpus(docs, sv, cfg.encode);
  REQUIRE(inst.size() == 12);
  const auto res = cnn_train(inst, inst, 6, cfg);
  CHECK(res.best_dev_macro_f1 == doctest::Approx(1.0));
  CHECK(res.warnings.empty());
  for (const auto& li : inst)
    CHECK(argmax_label(cnn_forward(res.model, li.x, false)) == li.label);

  const auto js = to_json(res.model);
  const auto back = cnn_model_from_json(js);
  CHECK(to_json(back) == js);
  CHECK(back.params.values() == res.model.params.values());

  const auto rel = classify_pairs(docs[0].doc, docs[0].entities, back, sv.vectors(docs[0].doc));
  REQUIRE(rel.size() == 1);
  CHECK(rel[0].label == RelationLabel::Indication);
  CHECK(classify_pairs(docs[2].doc, docs[2].entities, back, sv.vectors(docs[2].doc)).empty());

  // Same seed reproduces the same weights.
  CHECK(cnn_train(inst, inst, 6, cfg).model.params.values() == res.model.params.values());

  // A training set without one class is reported.
  std::vector<LabeledInstance> no_ae;
  for (const auto& li : inst)
    if (li.label != RelationLabel::AdverseEvent) no_ae.push_back(li);
  cfg.epochs = 1;
  const auto warned = cnn_train(no_ae, {}, 6, cfg);
  REQUIRE(warned.warnings.size() == 1);
  CHECK(warned.warnings[0].find("AdverseEvent") != std::string::npos);
}

TEST_CASE("cnn_init rejects even kernels") {
  auto cfg = small_config();
  cfg.kernel = 4;
  CHECK_THROWS(cnn_init(3, cfg));
}
