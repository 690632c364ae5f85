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

#ifndef DSAE_SIGNALS_HPP_
#define DSAE_SIGNALS_HPP_

// Corpus-level tallies of extracted (supplement, event) relations, ranking,
// knowledge-base lookup and TSV / Markdown reports.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "dsae/corpus.hpp"
#include "dsae/pipeline.hpp"
#include "dsae/types.hpp"

namespace dsae::signals {

enum class KbStatus { Unknown, Yes, No };

std::string_view to_string(KbStatus s);

struct SignalRecord {
  std::string supplement;  // canonical form
  bool deficiency = false;
  std::string event;  // case-folded surface
  RelationLabel relation = RelationLabel::AdverseEvent;
  std::size_t frequency = 0;  // distinct supporting documents
  std::vector<std::string> example_doc_ids;  // first n supporters by id
  KbStatus in_kb = KbStatus::Unknown;

  bool operator==(const SignalRecord&) const = default;
};

struct Aggregation {
  std::vector<SignalRecord> records;  // ordered by (supplement, deficiency, event, relation)
  std::set<std::string> unmatched_surfaces;  // supplement surfaces not in the lexicon
  // Every supporting doc id per record, parallel to `records`.
  std::vector<std::vector<std::string>> support;
};

// One record per distinct (canonical supplement, deficiency, event, relation),
// counted once per document.
Aggregation aggregate(std::span<const pipeline::PipelineOutput> outputs,
                      const corpus::Lexicon& ds_lexicon, std::size_t n_examples = 3);

// Descending frequency, then (supplement, event), then deficiency and
// relation. `relation` restricts the output to one label.
std::vector<SignalRecord> top_k(std::span<const SignalRecord> records,
                                std::size_t k = 200,
                                std::optional<RelationLabel> relation = std::nullopt);

class KnowledgeBase {
 public:
  void add(std::string_view supplement, std::string_view event, RelationLabel relation);
  bool contains(std::string_view supplement, std::string_view event,
                RelationLabel relation) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::set<std::tuple<std::string, std::string, int>> entries_;
};

// CSV with the header supplement,event,relation. Fields may be double-quoted.
KnowledgeBase parse_kb(std::string_view csv);
KnowledgeBase load_kb(const std::string& path);

// Sets in_kb from (supplement, event, relation) membership. The deficiency
// flag is not part of the lookup. Frequencies and order are unchanged.
std::vector<SignalRecord> compare_kb(std::span<const SignalRecord> records,
                                     const KnowledgeBase& kb);

// Texts of the first n supporting documents in ascending id order. Throws
// InvalidArgument for an id missing from `corpus_index`.
std::vector<std::string> sample_examples(
    std::span<const std::string> supporting_ids,
    const std::map<std::string, std::string>& corpus_index, std::size_t n = 3);

enum class ReportFormat { Tsv, Markdown };

// Columns: supplement, deficiency, event, relation, frequency, in_kb,
// examples (doc ids joined by ';').
std::string render_report(std::span<const SignalRecord> records, ReportFormat format);
void emit_report(std::span<const SignalRecord> records, ReportFormat format,
                 const std::string& path);
std::vector<SignalRecord> parse_report_tsv(std::string_view tsv);

}  // namespace dsae::signals

#endif  // DSAE_SIGNALS_HPP_
