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

#include "dsae/types.hpp"

#include <cctype>

namespace dsae {

std::string_view to_string(EntityType t) {
  switch (t) {
    case EntityType::Supplement: return "Supplement";
    case EntityType::Symptom: return "Symptom";
    case EntityType::BodyOrgan: return "BodyOrgan";
  }
  return "?";
}

std::optional<EntityType> parse_entity_type(std::string_view s) {
  const std::string l = ascii_lower(s);
  if (l == "supplement") return EntityType::Supplement;
  if (l == "symptom") return EntityType::Symptom;
  if (l == "bodyorgan" || l == "organ" || l == "body_organ")
    return EntityType::BodyOrgan;
  return std::nullopt;
}

std::string_view to_string(RelationLabel l) {
  switch (l) {
    case RelationLabel::NoRelation: return "NoRelation";
    case RelationLabel::Indication: return "Indication";
    case RelationLabel::AdverseEvent: return "AdverseEvent";
  }
  return "?";
}

std::optional<RelationLabel> parse_relation_label(std::string_view s) {
  const std::string l = ascii_lower(s);
  if (l == "norelation" || l == "none" || l == "no relation")
    return RelationLabel::NoRelation;
  if (l == "indication") return RelationLabel::Indication;
  if (l == "adverseevent" || l == "ae" || l == "adverse_event")
    return RelationLabel::AdverseEvent;
  return std::nullopt;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace dsae
