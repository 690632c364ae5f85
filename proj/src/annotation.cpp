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

#include "dsae/annotation.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dsae/error.hpp"
#include "dsae/io.hpp"
#include "dsae/rng.hpp"

namespace dsae::annotation {

BioLabel begin_label(EntityType t) {
  return static_cast<BioLabel>(1 + 2 * static_cast<int>(t));
}
BioLabel inside_label(EntityType t) {
  return static_cast<BioLabel>(2 + 2 * static_cast<int>(t));
}
bool is_begin(BioLabel l) {
  const int v = static_cast<int>(l);
  return v > 0 && v % 2 == 1;
}
bool is_inside(BioLabel l) {
  const int v = static_cast<int>(l);
  return v > 0 && v % 2 == 0;
}
EntityType label_type(BioLabel l) {
  return static_cast<EntityType>((static_cast<int>(l) - 1) / 2);
}
std::string_view to_string(BioLabel l) { return kBioNames[static_cast<int>(l)]; }
bool parse_bio(std::string_view s, BioLabel& out) {
  for (int i = 0; i < kNumBioLabels; ++i)
    if (s == kBioNames[i]) {
      out = static_cast<BioLabel>(i);
      return true;
    }
  return false;
}

bool token_range(const NormalizedDoc& doc, std::size_t char_start,
                 std::size_t char_end, std::size_t& token_start,
                 std::size_t& token_end) {
  if (char_start >= char_end) return false;
  bool have_start = false;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (!have_start && doc.tokens[i].start == char_start) {
      token_start = i;
      have_start = true;
    }
    if (have_start && doc.tokens[i].end == char_end) {
      token_end = i + 1;
      return true;
    }
    if (doc.tokens[i].start >= char_end) break;
  }
  return false;
}

namespace {

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  out = v;
  return true;
}

bool overlaps(const EntitySpan& a, const EntitySpan& b) {
  return a.char_start < b.char_end && b.char_start < a.char_end;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

AnnotatedDoc parse_standoff(std::string_view ann_text, const NormalizedDoc& doc) {
  AnnotatedDoc out;
  out.doc = doc;
  std::map<std::string, std::size_t> index;
  std::vector<std::size_t> entity_lines;
  const auto lines = io::split_lines(ann_text);

  // Entities first so relations may reference later T lines.
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (line.empty() || line[0] != 'T') continue;
    auto cols = io::split(line, '\t');
    if (cols.size() != 3) throw ParseError("malformed T line", lineno);
    auto fields = split_ws(cols[1]);
    if (fields.size() != 3)
      throw ParseError("expected '<Type> <start> <end>' (discontinuous spans unsupported)",
                       lineno);
    auto type = parse_entity_type(fields[0]);
    if (!type) throw ParseError("unknown entity type '" + std::string(fields[0]) + "'", lineno);
    EntitySpan e;
    e.id = std::string(cols[0]);
    e.type = *type;
    if (!parse_size(fields[1], e.char_start) || !parse_size(fields[2], e.char_end) ||
        e.char_start >= e.char_end)
      throw ParseError("bad offsets", lineno);
    if (e.char_end > doc.normalized_text.size())
      throw ParseError("span beyond the end of the text", lineno);
    if (doc.normalized_text.substr(e.char_start, e.char_end - e.char_start) != cols[2])
      throw ParseError("span text '" + std::string(cols[2]) + "' does not match '" +
                           doc.normalized_text.substr(e.char_start,
                                                      e.char_end - e.char_start) +
                           "'",
                       lineno);
    if (!token_range(doc, e.char_start, e.char_end, e.token_start, e.token_end))
      throw ParseError("span not aligned to token boundaries", lineno);
    if (index.count(e.id)) throw ParseError("duplicate id " + e.id, lineno);
    for (std::size_t k = 0; k < out.entities.size(); ++k) {
      const auto& o = out.entities[k];
      if (o.same_span(e))
        throw ParseError("duplicate span of " + o.id, lineno);
      if (o.type == e.type && overlaps(o, e))
        throw ParseError("overlaps same-type entity " + o.id + " (line " +
                             std::to_string(entity_lines[k]) + ")",
                         lineno);
    }
    index[e.id] = out.entities.size();
    out.entities.push_back(std::move(e));
    entity_lines.push_back(lineno);
  }

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (line.empty() || line[0] == 'T' || line[0] == '#') continue;
    auto cols = io::split(line, '\t');
    if (cols.size() < 2) throw ParseError("malformed line", lineno);
    auto fields = split_ws(cols[1]);
    auto lookup = [&](std::string_view ref) -> EntitySpan& {
      auto it = index.find(std::string(ref));
      if (it == index.end())
        throw ParseError("dangling reference to " + std::string(ref), lineno);
      return out.entities[it->second];
    };
    if (line[0] == 'R') {
      if (fields.size() != 3 || fields[1].substr(0, 5) != "Arg1:" ||
          fields[2].substr(0, 5) != "Arg2:")
        throw ParseError("expected '<Type> Arg1:T<i> Arg2:T<j>'", lineno);
      auto label = parse_relation_label(fields[0]);
      if (!label || *label == RelationLabel::NoRelation)
        throw ParseError("unknown relation type '" + std::string(fields[0]) + "'",
                         lineno);
      const EntitySpan& head = lookup(fields[1].substr(5));
      const EntitySpan& tail = lookup(fields[2].substr(5));
      if (head.type != EntityType::Supplement)
        throw ParseError("relation head must be a Supplement", lineno);
      if (tail.type == EntityType::Supplement)
        throw ParseError("relation tail must be a Symptom or BodyOrgan", lineno);
      out.relations.push_back({doc.doc_id, head, tail, *label});
    } else if (line[0] == 'A') {
      if (fields.size() != 2 || fields[0] != "Deficiency")
        throw ParseError("expected 'Deficiency T<i>'", lineno);
      EntitySpan& target = lookup(fields[1]);
      if (target.type != EntityType::Supplement)
        throw ParseError("deficiency applies to Supplement entities only", lineno);
      target.deficiency = true;
    } else {
      throw ParseError("unsupported annotation line", lineno);
    }
  }
  // Relations captured entity copies before A lines were applied.
  for (auto& r : out.relations) {
    r.head = out.entities[index[r.head.id]];
    r.tail = out.entities[index[r.tail.id]];
  }
  return out;
}

std::string write_standoff(const AnnotatedDoc& doc) {
  std::ostringstream os;
  for (const auto& e : doc.entities)
    os << e.id << '\t' << to_string(e.type) << ' ' << e.char_start << ' '
       << e.char_end << '\t'
       << doc.doc.normalized_text.substr(e.char_start, e.char_end - e.char_start)
       << '\n';
  std::size_t r = 1;
  for (const auto& rel : doc.relations)
    os << 'R' << r++ << '\t' << to_string(rel.label) << " Arg1:" << rel.head.id
       << " Arg2:" << rel.tail.id << '\n';
  std::size_t a = 1;
  for (const auto& e : doc.entities)
    if (e.deficiency) os << 'A' << a++ << "\tDeficiency " << e.id << '\n';
  return os.str();
}

std::vector<BioLabel> to_bio(const NormalizedDoc& doc,
                             std::span<const EntitySpan> entities,
                             std::vector<std::string>* warnings) {
  std::vector<BioLabel> labels(doc.tokens.size(), BioLabel::O);
  std::vector<bool> taken(doc.tokens.size(), false);
  for (EntityType t : kEntityTypes) {
    for (const auto& e : entities) {
      if (e.type != t) continue;
      if (e.token_start >= e.token_end || e.token_end > labels.size())
        throw InvalidArgument("entity " + e.id + " has an invalid token range");
      bool clash = false;
      for (std::size_t i = e.token_start; i < e.token_end; ++i) clash = clash || taken[i];
      if (clash) {
        if (warnings)
          warnings->push_back("entity " + e.id + " (" + std::string(to_string(t)) +
                              ") overlaps a higher-priority entity and was dropped");
        continue;
      }
      for (std::size_t i = e.token_start; i < e.token_end; ++i) {
        taken[i] = true;
        labels[i] = i == e.token_start ? begin_label(t) : inside_label(t);
      }
    }
  }
  return labels;
}

std::vector<EntitySpan> from_bio(const NormalizedDoc& doc,
                                 std::span<const BioLabel> labels) {
  if (labels.size() != doc.tokens.size())
    throw InvalidArgument("label count differs from token count");
  std::vector<EntitySpan> out;
  bool open = false;
  auto close = [&](std::size_t end) {
    if (!open) return;
    EntitySpan& e = out.back();
    e.token_end = end;
    e.char_end = doc.tokens[end - 1].end;
    open = false;
  };
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const BioLabel l = labels[i];
    if (l == BioLabel::O) {
      close(i);
      continue;
    }
    const EntityType t = label_type(l);
    if (is_inside(l) && open && out.back().type == t) continue;
    close(i);
    EntitySpan e;
    e.id = "P" + std::to_string(out.size() + 1);
    e.type = t;
    e.token_start = i;
    e.char_start = doc.tokens[i].start;
    out.push_back(std::move(e));
    open = true;
  }
  close(labels.size());
  return out;
}

bool valid_bio(std::span<const BioLabel> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!is_inside(labels[i])) continue;
    if (i == 0 || labels[i - 1] == BioLabel::O ||
        label_type(labels[i - 1]) != label_type(labels[i]))
      return false;
  }
  return true;
}

std::vector<RelationInstance> generate_relation_instances(const AnnotatedDoc& doc) {
  std::vector<RelationInstance> out;
  for (const auto& h : doc.entities) {
    if (h.type != EntityType::Supplement) continue;
    for (const auto& t : doc.entities) {
      if (t.type == EntityType::Supplement) continue;
      RelationInstance r{doc.doc.doc_id, h, t, RelationLabel::NoRelation};
      for (const auto& g : doc.relations)
        if (g.head.same_span(h) && g.tail.same_span(t)) {
          r.label = g.label;
          break;
        }
      out.push_back(std::move(r));
    }
  }
  return out;
}

Split split_dataset(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw InvalidArgument("split_dataset needs at least 3 documents");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t n_train = n * 7 / 10;
  const std::size_t n_dev = n / 10;
  Split s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.dev.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
               idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev), idx.end());
  return s;
}

std::string split_manifest(const std::vector<std::string>& doc_ids,
                           const Split& split) {
  std::vector<std::pair<std::size_t, const char*>> rows;
  for (auto i : split.train) rows.emplace_back(i, "train");
  for (auto i : split.dev) rows.emplace_back(i, "dev");
  for (auto i : split.test) rows.emplace_back(i, "test");
  std::sort(rows.begin(), rows.end());
  std::ostringstream os;
  for (const auto& [i, name] : rows) os << doc_ids.at(i) << '\t' << name << '\n';
  return os.str();
}

}  // namespace dsae::annotation
