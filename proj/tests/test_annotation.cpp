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

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "dsae/annotation.hpp"
#include "dsae/error.hpp"
#include "dsae/rng.hpp"

using namespace dsae;
using namespace dsae::annotation;

namespace {

const char* kText = "fish oil gave me a headache in my stomach";

NormalizedDoc doc_of(const std::string& text) { return normalize::normalize("d1", text); }

std::size_t error_line(const std::string& ann, const NormalizedDoc& d) {
  try {
    parse_standoff(ann, d);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse_standoff reads entities, relations and attributes") {
  const auto d = doc_of(kText);
  const std::string ann =
      "T1\tSupplement 0 8\tfish oil\n"
      "T2\tSymptom 19 27\theadache\n"
      "T3\tBodyOrgan 34 41\tstomach\n"
      "# note line\n"
      "R1\tAdverseEvent Arg1:T1 Arg2:T2\n"
      "A1\tDeficiency T1\n";
  const auto a = parse_standoff(ann, d);
  REQUIRE(a.entities.size() == 3);
  CHECK(a.entities[0].token_start == 0);
  CHECK(a.entities[0].token_end == 2);
  CHECK(a.entities[0].deficiency);
  CHECK(a.entities[2].type == EntityType::BodyOrgan);
  REQUIRE(a.relations.size() == 1);
  CHECK(a.relations[0].label == RelationLabel::AdverseEvent);
  CHECK(a.relations[0].tail.id == "T2");

  const auto again = parse_standoff(write_standoff(a), d);
  REQUIRE(again.entities.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(again.entities[i].same_span(a.entities[i]));
  CHECK(again.entities[0].deficiency);
  CHECK(again.relations.size() == 1);
}

TEST_CASE("parse_standoff reports the offending line") {
  const auto d = doc_of(kText);
  const std::string t1 = "T1\tSupplement 0 8\tfish oil\n";
  CHECK(error_line(t1 + "T2\tSymptom 19 27\theadachx\n", d) == 2);  // text mismatch
  CHECK(error_line(t1 + "T2\tSymptom 20 27\teadache\n", d) == 2);   // not on a token boundary
  CHECK(error_line(t1 + "T2\tMood 19 27\theadache\n", d) == 2);
  CHECK(error_line(t1 + "T2\tSymptom 19 99\theadache\n", d) == 2);
  CHECK(error_line(t1 + "T1\tSymptom 19 27\theadache\n", d) == 2);  // duplicate id
  CHECK(error_line(t1 + "T2\tSupplement 5 8\toil\n", d) == 2);      // same-type overlap
  CHECK(error_line(t1 + "R1\tIndication Arg1:T1 Arg2:T9\n", d) == 2);
  CHECK(error_line(t1 + "T2\tSymptom 19 27\theadache\nR1\tIndication Arg1:T2 Arg2:T1\n", d) == 3);
  CHECK(error_line(t1 + "T2\tSymptom 19 27\theadache\nA1\tDeficiency T2\n", d) == 3);
  CHECK(error_line(t1 + "E1\tSomething T1\n", d) == 2);
  CHECK(error_line(t1, d) == 0);
}

TEST_CASE("to_bio and from_bio on a worked example") {
  const auto d = doc_of(kText);
  const auto a = parse_standoff(
      "T1\tSupplement 0 8\tfish oil\nT2\tSymptom 19 27\theadache\nT3\tBodyOrgan 34 41\tstomach\n", d);
  const auto bio = to_bio(d, a.entities);
  std::vector<std::string> names;
  for (auto l : bio) names.emplace_back(to_string(l));
  CHECK(names == std::vector<std::string>{"B-SUPP", "I-SUPP", "O", "O", "O", "B-SYMP", "O",
                                          "O", "B-ORG"});
  const auto back = from_bio(d, bio);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i].same_span(a.entities[i]));
}

TEST_CASE("to_bio resolves cross-type overlap by priority") {
  const auto d = doc_of("vitamin d deficiency");
  EntitySpan supp{"T1", EntityType::Supplement, 0, 9, 0, 2};
  EntitySpan symp{"T2", EntityType::Symptom, 8, 20, 1, 3};
  std::vector<std::string> warnings;
  const auto bio = to_bio(d, std::vector<EntitySpan>{symp, supp}, &warnings);
  CHECK(bio == std::vector<BioLabel>{BioLabel::BSupp, BioLabel::ISupp, BioLabel::O});
  CHECK(warnings.size() == 1);
}

TEST_CASE("from_bio repairs orphan inside labels") {
  const auto d = doc_of("a b c d e");
  const std::vector<BioLabel> labels = {BioLabel::O, BioLabel::ISupp, BioLabel::ISupp,
                                        BioLabel::BSymp, BioLabel::IOrg};
  CHECK_FALSE(valid_bio(labels));
  const auto spans = from_bio(d, labels);
  REQUIRE(spans.size() == 3);
  CHECK(spans[0].type == EntityType::Supplement);
  CHECK(spans[0].token_start == 1);
  CHECK(spans[0].token_end == 3);
  CHECK(spans[1].type == EntityType::Symptom);
  CHECK(spans[1].token_end == 4);
  CHECK(spans[2].type == EntityType::BodyOrgan);
  CHECK(spans[2].char_start == 8);
  CHECK(valid_bio(to_bio(d, spans)));
}

TEST_CASE("BIO round trip over random layouts") {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(15);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) text += (i ? " w" : "w") + std::to_string(i);
    const auto d = doc_of(text);
    REQUIRE(d.tokens.size() == n);
    std::vector<EntitySpan> spans;
    std::size_t i = 0;
    while (i < n) {
      if (rng.bernoulli(0.4)) {
        const std::size_t len = 1 + rng.below(std::min<std::size_t>(3, n - i));
        EntitySpan e;
        e.id = "T" + std::to_string(spans.size() + 1);
        e.type = kEntityTypes[rng.below(3)];
        e.token_start = i;
        e.token_end = i + len;
        e.char_start = d.tokens[i].start;
        e.char_end = d.tokens[i + len - 1].end;
        spans.push_back(e);
        i += len;
      } else {
        ++i;
      }
    }
    const auto bio = to_bio(d, spans);
    CHECK(bio.size() == n);
    CHECK(valid_bio(bio));
    const auto back = from_bio(d, bio);
    REQUIRE(back.size() == spans.size());
    for (std::size_t k = 0; k < spans.size(); ++k) {
      CHECK(back[k].same_span(spans[k]));
      CHECK(back[k].token_start == spans[k].token_start);
      CHECK(back[k].token_end == spans[k].token_end);
    }
  }
}

TEST_CASE("relation instances cover every supplement-target pair") {
  const auto d = doc_of("zinc and fish oil cured my cough and sore throat");
  const auto a = parse_standoff(
      "T1\tSupplement 0 4\tzinc\n"
      "T2\tSupplement 9 17\tfish oil\n"
      "T3\tSymptom 27 32\tcough\n"
      "T4\tBodyOrgan 42 48\tthroat\n"
      "T5\tSymptom 37 48\tsore throat\n"
      "R1\tIndication Arg1:T1 Arg2:T3\n",
      d);
  const auto inst = generate_relation_instances(a);
  CHECK(inst.size() == 6);
  std::size_t positive = 0;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& r : inst) {
    CHECK(r.head.type == EntityType::Supplement);
    CHECK(r.tail.type != EntityType::Supplement);
    pairs.emplace(r.head.id, r.tail.id);
    if (r.label != RelationLabel::NoRelation) {
      ++positive;
      CHECK(r.head.id == "T1");
      CHECK(r.tail.id == "T3");
      CHECK(r.label == RelationLabel::Indication);
    }
  }
  CHECK(positive == 1);
  CHECK(pairs.size() == 6);
}

TEST_CASE("split_dataset sizes and partition") {
  const auto s = split_dataset(2000, 0);
  CHECK(s.train.size() == 1400);
  CHECK(s.dev.size() == 200);
  CHECK(s.test.size() == 400);

  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.below(300);
    const std::uint64_t seed = rng.next_u64();
    const auto a = split_dataset(n, seed);
    CHECK(a.train.size() == n * 7 / 10);
    CHECK(a.dev.size() == n / 10);
    std::vector<std::size_t> all = a.train;
    all.insert(all.end(), a.dev.begin(), a.dev.end());
    all.insert(all.end(), a.test.begin(), a.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < n; ++i) CHECK(all[i] == i);
    const auto b = split_dataset(n, seed);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
  }
  CHECK(split_dataset(100, 1).train != split_dataset(100, 2).train);
  CHECK_THROWS_AS(split_dataset(2, 0), InvalidArgument);

  const auto small = split_dataset(3, 0);
  const auto manifest = split_manifest({"a", "b", "c"}, small);
  CHECK(std::count(manifest.begin(), manifest.end(), '\n') == 3);
}
