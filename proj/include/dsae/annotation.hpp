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

#ifndef DSAE_ANNOTATION_HPP_
#define DSAE_ANNOTATION_HPP_

// Standoff annotations over normalized text, BIO conversion, relation
// candidate enumeration and the seeded 70/10/20 split.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsae/normalize.hpp"
#include "dsae/types.hpp"

namespace dsae::annotation {

using normalize::NormalizedDoc;

struct EntitySpan {
  std::string id;
  EntityType type = EntityType::Supplement;
  std::size_t char_start = 0;  // into normalized_text
  std::size_t char_end = 0;
  std::size_t token_start = 0;  // half-open token range
  std::size_t token_end = 0;
  bool deficiency = false;  // Supplement only

  // Same type and offsets (ids and flags ignored).
  bool same_span(const EntitySpan& o) const {
    return type == o.type && char_start == o.char_start && char_end == o.char_end;
  }
};

struct RelationInstance {
  std::string doc_id;
  EntitySpan head;  // Supplement
  EntitySpan tail;  // Symptom or BodyOrgan
  RelationLabel label = RelationLabel::NoRelation;
};

struct AnnotatedDoc {
  NormalizedDoc doc;
  std::vector<EntitySpan> entities;
  std::vector<RelationInstance> relations;  // gold, never NoRelation
};

enum class BioLabel : int { O = 0, BSupp, ISupp, BSymp, ISymp, BOrg, IOrg };
inline constexpr int kNumBioLabels = 7;
inline constexpr std::array<const char*, 7> kBioNames = {
    "O", "B-SUPP", "I-SUPP", "B-SYMP", "I-SYMP", "B-ORG", "I-ORG"};

BioLabel begin_label(EntityType t);
BioLabel inside_label(EntityType t);
bool is_begin(BioLabel l);
bool is_inside(BioLabel l);
EntityType label_type(BioLabel l);  // for non-O labels
std::string_view to_string(BioLabel l);
bool parse_bio(std::string_view s, BioLabel& out);

// Token range covering [char_start, char_end), or false when the offsets do
// not fall exactly on token boundaries.
bool token_range(const NormalizedDoc& doc, std::size_t char_start,
                 std::size_t char_end, std::size_t& token_start,
                 std::size_t& token_end);

// Parses T / R / A lines (plus '#' note lines, which are ignored). Throws
// ParseError with the 1-based line number on any inconsistency.
AnnotatedDoc parse_standoff(std::string_view ann_text, const NormalizedDoc& doc);

// Inverse of parse_standoff (entities, relations, deficiency attributes).
std::string write_standoff(const AnnotatedDoc& doc);

// Cross-type overlaps are resolved Supplement > Symptom > BodyOrgan; each
// dropped entity appends a message to `warnings` when provided.
std::vector<BioLabel> to_bio(const NormalizedDoc& doc,
                             std::span<const EntitySpan> entities,
                             std::vector<std::string>* warnings = nullptr);

// Maximal B-I runs; an I-X that does not continue an X entity opens one.
std::vector<EntitySpan> from_bio(const NormalizedDoc& doc,
                                 std::span<const BioLabel> labels);

// True when no I-X follows O or a label of another type.
bool valid_bio(std::span<const BioLabel> labels);

// One instance per (Supplement, Symptom-or-BodyOrgan) pair in entity order.
std::vector<RelationInstance> generate_relation_instances(const AnnotatedDoc& doc);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> dev;
  std::vector<std::size_t> test;
};

// Seeded shuffle, then sizes floor(0.7n), floor(0.1n) and the remainder.
Split split_dataset(std::size_t n, std::uint64_t seed);

// TSV doc_id<TAB>split.
std::string split_manifest(const std::vector<std::string>& doc_ids,
                           const Split& split);

}  // namespace dsae::annotation

#endif  // DSAE_ANNOTATION_HPP_
