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
#include <string>
#include <vector>

#include "doctest.h"
#include "dsae/error.hpp"
#include "dsae/signals.hpp"

using namespace dsae;
using namespace dsae::signals;
using pipeline::PipelineOutput;

namespace {

// Output for "<supp> <rest...>" where the event is the last word.
PipelineOutput output(const std::string& id, const std::string& supp, const std::string& event,
                      RelationLabel label, bool deficiency = false) {
  PipelineOutput o;
  o.doc_id = id;
  o.text = supp + " caused " + event;
  annotation::RelationInstance r;
  r.doc_id = id;
  r.head.type = EntityType::Supplement;
  r.head.char_start = 0;
  r.head.char_end = supp.size();
  r.head.deficiency = deficiency;
  r.tail.type = EntityType::Symptom;
  r.tail.char_start = supp.size() + 8;
  r.tail.char_end = o.text.size();
  r.label = label;
  o.relations.push_back(r);
  return o;
}

corpus::Lexicon ds_lexicon() {
  corpus::Lexicon lex;
  lex.add("vitamin d", "vitamin d", EntityType::Supplement);
  lex.add("vit d", "vitamin d", EntityType::Supplement);
  lex.add("fish oil", "fish oil", EntityType::Supplement);
  return lex;
}

}  // namespace

TEST_CASE("aggregate merges variants and counts documents once") {
  const auto AE = RelationLabel::AdverseEvent;
  std::vector<PipelineOutput> outs = {
      output("d3", "vit d", "nausea", AE),
      output("d1", "vitamin d", "nausea", AE),
      output("d2", "fish oil", "nausea", AE),
      output("d4", "vitamin d", "fatigue", RelationLabel::Indication, true),
      output("d5", "kratom", "nausea", AE),
  };
  // A second mention of the same pair in d1 does not add support.
  outs[1].relations.push_back(outs[1].relations[0]);
  const auto agg = aggregate(outs, ds_lexicon(), 3);
  REQUIRE(agg.records.size() == 4);
  CHECK(agg.unmatched_surfaces == std::set<std::string>{"kratom"});
  const auto& fish = agg.records[0];
  CHECK(fish.supplement == "fish oil");
  const auto& kratom = agg.records[1];
  CHECK(kratom.supplement == "kratom");
  const auto& vd = agg.records[2];
  CHECK(vd.supplement == "vitamin d");
  CHECK_FALSE(vd.deficiency);
  CHECK(vd.event == "nausea");
  CHECK(vd.frequency == 2);
  CHECK(vd.example_doc_ids == std::vector<std::string>{"d1", "d3"});
  CHECK(agg.records[3].deficiency);
  CHECK(agg.records[3].relation == RelationLabel::Indication);
  CHECK(agg.support[2] == std::vector<std::string>{"d1", "d3"});

  const auto limited = aggregate(outs, ds_lexicon(), 1);
  CHECK(limited.records[2].example_doc_ids == std::vector<std::string>{"d1"});
}

TEST_CASE("top_k ordering and filter") {
  std::vector<SignalRecord> recs(4);
  recs[0] = {"b", false, "x", RelationLabel::AdverseEvent, 2, {}, KbStatus::Unknown};
  recs[1] = {"a", false, "y", RelationLabel::Indication, 5, {}, KbStatus::Unknown};
  recs[2] = {"a", false, "x", RelationLabel::AdverseEvent, 2, {}, KbStatus::Unknown};
  recs[3] = {"c", false, "z", RelationLabel::AdverseEvent, 1, {}, KbStatus::Unknown};
  const auto all = top_k(recs, 10);
  REQUIRE(all.size() == 4);
  CHECK(all[0].supplement == "a");
  CHECK(all[0].frequency == 5);
  CHECK(all[1].supplement == "a");
  CHECK(all[1].event == "x");
  CHECK(all[2].supplement == "b");
  CHECK(top_k(recs, 2).size() == 2);
  const auto ae = top_k(recs, 10, RelationLabel::AdverseEvent);
  CHECK(ae.size() == 3);
  for (const auto& r : ae) CHECK(r.relation == RelationLabel::AdverseEvent);
}

TEST_CASE("knowledge base lookup is relation aware") {
  const auto kb = parse_kb(
      "supplement,event,relation\n"
      "\"Vitamin D\",nausea,AdverseEvent\n"
      "fish oil,\"joint pain\",Indication\n");
  CHECK(kb.size() == 2);
  CHECK(kb.contains("vitamin d", "nausea", RelationLabel::AdverseEvent));
  CHECK_FALSE(kb.contains("vitamin d", "nausea", RelationLabel::Indication));

  std::vector<SignalRecord> recs = {
      {"vitamin d", true, "nausea", RelationLabel::AdverseEvent, 3, {}, KbStatus::Unknown},
      {"vitamin d", false, "nausea", RelationLabel::Indication, 2, {}, KbStatus::Unknown},
      {"fish oil", false, "joint pain", RelationLabel::Indication, 1, {}, KbStatus::Unknown},
  };
  const auto cmp = compare_kb(recs, kb);
  CHECK(cmp[0].in_kb == KbStatus::Yes);  // deficiency flag ignored
  CHECK(cmp[1].in_kb == KbStatus::No);
  CHECK(cmp[2].in_kb == KbStatus::Yes);
  for (std::size_t i = 0; i < 3; ++i) CHECK(cmp[i].frequency == recs[i].frequency);
  CHECK_THROWS_AS(parse_kb("a,b\n"), ParseError);
}

TEST_CASE("sample_examples") {
  const std::map<std::string, std::string> index = {{"a", "one"}, {"b", "two"}, {"c", "three"}};
  const std::vector<std::string> ids = {"c", "a", "b"};
  CHECK(sample_examples(ids, index, 2) == std::vector<std::string>{"one", "two"});
  CHECK(sample_examples(ids, index, 10).size() == 3);
  const std::vector<std::string> missing = {"zz"};
  CHECK_THROWS_AS(sample_examples(missing, index), InvalidArgument);
}

TEST_CASE("reports render and parse back") {
  std::vector<SignalRecord> recs = {
      {"vitamin d", true, "upset|stomach", RelationLabel::AdverseEvent, 3, {"d1", "d2"},
       KbStatus::Yes},
      {"fish oil", false, "joint pain", RelationLabel::Indication, 1, {"d9"}, KbStatus::Unknown},
  };
  const auto tsv = render_report(recs, ReportFormat::Tsv);
  CHECK(parse_report_tsv(tsv) == recs);
  const auto md = render_report(recs, ReportFormat::Markdown);
  CHECK(md.find("upset\\|stomach") != std::string::npos);
  CHECK(md.find("d1;d2") != std::string::npos);
  CHECK(std::count(md.begin(), md.end(), '\n') == 4);  // header, rule, two rows
}
