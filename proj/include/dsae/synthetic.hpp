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

#ifndef DSAE_SYNTHETIC_HPP_
#define DSAE_SYNTHETIC_HPP_

// Seeded template generator for supplement tweets with planted entities and
// Indication / AdverseEvent / NoRelation cue patterns, plus matching word
// vectors and (deliberately incomplete) lexicons.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dsae/annotation.hpp"
#include "dsae/corpus.hpp"
#include "dsae/embeddings.hpp"

namespace dsae::synthetic {

struct SynthConfig {
  std::size_t n_docs = 1000;
  std::uint64_t seed = 7;
  std::size_t embedding_dim = 32;
  double embedding_noise = 0.6;     // per-word noise norm around its role centroid
  double lexicon_coverage = 0.6;    // fraction of entity surfaces in the lexicons
  double indication_share = 0.75;   // of relation-bearing clauses
  double second_clause = 0.35;      // docs with a second, unrelated clause
  double two_relations = 0.12;      // docs with two relation clauses
  double no_relation_doc = 0.15;    // docs whose only pair is a co-occurrence
  double deficiency_rate = 0.05;    // supplement mentions phrased as a deficiency
  double typo_rate = 0.08;          // per entity word; misspellings have no vector
  double ambiguous_clause = 0.25;   // entity words used in a non-entity sense
};

struct SynthCorpus {
  std::vector<corpus::Tweet> tweets;
  std::vector<annotation::AnnotatedDoc> docs;  // parallel to tweets
  embeddings::EmbeddingTable embeddings;
  corpus::Lexicon ds_lexicon;     // Supplement entries, with canonical forms
  corpus::Lexicon event_lexicon;  // Symptom and BodyOrgan entries
};

SynthCorpus generate(const SynthConfig& config = {});

// Supplement + event lexicon merged (for NER lexicon features).
corpus::Lexicon combined_lexicon(const SynthCorpus& corpus);

}  // namespace dsae::synthetic

#endif  // DSAE_SYNTHETIC_HPP_
