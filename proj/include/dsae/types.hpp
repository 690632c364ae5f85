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

#ifndef DSAE_TYPES_HPP_
#define DSAE_TYPES_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace dsae {

enum class EntityType { Supplement = 0, Symptom = 1, BodyOrgan = 2 };
inline constexpr int kNumEntityTypes = 3;
inline constexpr std::array<EntityType, 3> kEntityTypes = {
    EntityType::Supplement, EntityType::Symptom, EntityType::BodyOrgan};

std::string_view to_string(EntityType t);
std::optional<EntityType> parse_entity_type(std::string_view s);

// Label order is fixed: it is the class index of the relation classifier.
enum class RelationLabel { NoRelation = 0, Indication = 1, AdverseEvent = 2 };
inline constexpr int kNumRelationLabels = 3;

std::string_view to_string(RelationLabel l);
// Accepts the canonical names plus "AE", "indication", "none".
std::optional<RelationLabel> parse_relation_label(std::string_view s);

// ASCII lower-casing; bytes >= 0x80 are left untouched so offsets survive.
std::string ascii_lower(std::string_view s);
std::string trim(std::string_view s);

}  // namespace dsae

#endif  // DSAE_TYPES_HPP_
