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

#include "dsae/signals.hpp"

#include <algorithm>
#include <sstream>

#include <boost/tokenizer.hpp>

#include "dsae/error.hpp"
#include "dsae/io.hpp"

namespace dsae::signals {

std::string_view to_string(KbStatus s) {
  switch (s) {
    case KbStatus::Yes: return "yes";
    case KbStatus::No: return "no";
    default: return "unknown";
  }
}

namespace {

using Key = std::tuple<std::string, bool, std::string, int>;

std::string surface(const std::string& text, const annotation::EntitySpan& e) {
  if (e.char_end > text.size() || e.char_start >= e.char_end)
    throw InvalidArgument("entity offsets outside the document text");
  return ascii_lower(trim(std::string_view(text).substr(e.char_start, e.char_end - e.char_start)));
}

}  // namespace

Aggregation aggregate(std::span<const pipeline::PipelineOutput> outputs,
                      const corpus::Lexicon& ds_lexicon, std::size_t n_examples) {
  std::map<Key, std::set<std::string>> tally;
  Aggregation agg;
  for (const auto& out : outputs)
    for (const auto& r : out.relations) {
      if (r.label == RelationLabel::NoRelation) continue;
      const std::string s = surface(out.text, r.head);
      std::string canonical = s;
      if (auto c = ds_lexicon.canonical(s))
        canonical = *c;
      else
        agg.unmatched_surfaces.insert(s);
      tally[{canonical, r.head.deficiency, surface(out.text, r.tail),
             static_cast<int>(r.label)}]
          .insert(out.doc_id);
    }
  for (const auto& [key, docs] : tally) {
    SignalRecord rec;
    rec.supplement = std::get<0>(key);
    rec.deficiency = std::get<1>(key);
    rec.event = std::get<2>(key);
    rec.relation = static_cast<RelationLabel>(std::get<3>(key));
    rec.frequency = docs.size();
    for (const auto& id : docs) {
      if (rec.example_doc_ids.size() == n_examples) break;
      rec.example_doc_ids.push_back(id);
    }
    agg.records.push_back(std::move(rec));
    agg.support.emplace_back(docs.begin(), docs.end());
  }
  return agg;
}

std::vector<SignalRecord> top_k(std::span<const SignalRecord> records, std::size_t k,
                                std::optional<RelationLabel> relation) {
  std::vector<SignalRecord> out;
  for (const auto& r : records)
    if (!relation || r.relation == *relation) out.push_back(r);
  std::stable_sort(out.begin(), out.end(), [](const SignalRecord& a, const SignalRecord& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return std::tie(a.supplement, a.event, a.deficiency, a.relation) <
           std::tie(b.supplement, b.event, b.deficiency, b.relation);
  });
  if (out.size() > k) out.resize(k);
  return out;
}

void KnowledgeBase::add(std::string_view supplement, std::string_view event,
                        RelationLabel relation) {
  if (relation == RelationLabel::NoRelation)
    throw InvalidArgument("knowledge-base entries need a relation");
  entries_.emplace(ascii_lower(trim(supplement)), ascii_lower(trim(event)),
                   static_cast<int>(relation));
}

bool KnowledgeBase::contains(std::string_view supplement, std::string_view event,
                             RelationLabel relation) const {
  return entries_.count({ascii_lower(trim(supplement)), ascii_lower(trim(event)),
                         static_cast<int>(relation)}) > 0;
}

KnowledgeBase parse_kb(std::string_view csv) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  KnowledgeBase kb;
  const auto lines = io::split_lines(csv);
  bool header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string line(lines[i]);
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      Tokenizer tok(line);
      for (const auto& f : tok) fields.push_back(trim(f));
    } catch (const boost::escaped_list_error& e) {
      throw ParseError(std::string("malformed CSV: ") + e.what(), i + 1);
    }
    if (!header) {
      if (fields.size() != 3 || ascii_lower(fields[0]) != "supplement" ||
          ascii_lower(fields[1]) != "event" || ascii_lower(fields[2]) != "relation")
        throw ParseError("knowledge base must start with the header supplement,event,relation",
                         i + 1);
      header = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError("expected 3 fields", i + 1);
    const auto rel = parse_relation_label(fields[2]);
    if (!rel || *rel == RelationLabel::NoRelation)
      throw ParseError("unknown relation '" + fields[2] + "'", i + 1);
    if (fields[0].empty() || fields[1].empty()) throw ParseError("empty field", i + 1);
    kb.add(fields[0], fields[1], *rel);
  }
  if (!header) throw ParseError("knowledge base is empty; the header is required");
  return kb;
}

KnowledgeBase load_kb(const std::string& path) { return parse_kb(io::read_file(path)); }

std::vector<SignalRecord> compare_kb(std::span<const SignalRecord> records,
                                     const KnowledgeBase& kb) {
  std::vector<SignalRecord> out(records.begin(), records.end());
  for (auto& r : out)
    r.in_kb = kb.contains(r.supplement, r.event, r.relation) ? KbStatus::Yes : KbStatus::No;
  return out;
}

std::vector<std::string> sample_examples(
    std::span<const std::string> supporting_ids,
    const std::map<std::string, std::string>& corpus_index, std::size_t n) {
  std::vector<std::string> ids(supporting_ids.begin(), supporting_ids.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::string> out;
  for (const auto& id : ids) {
    if (out.size() == n) break;
    auto it = corpus_index.find(id);
    if (it == corpus_index.end()) throw InvalidArgument("unknown document id '" + id + "'");
    out.push_back(it->second);
  }
  return out;
}

namespace {

std::string clean(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return out;
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : clean(s)) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ";" : "") + ids[i];
  return out;
}

constexpr const char* kColumns[] = {"supplement", "deficiency", "event", "relation",
                                    "frequency",  "in_kb",      "examples"};

}  // namespace

std::string render_report(std::span<const SignalRecord> records, ReportFormat format) {
  std::ostringstream os;
  const bool md = format == ReportFormat::Markdown;
  auto row = [&](const std::vector<std::string>& cells) {
    if (md) {
      os << '|';
      for (const auto& c : cells) os << ' ' << md_escape(c) << " |";
    } else {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "\t" : "") << clean(cells[i]);
    }
    os << '\n';
  };
  row(std::vector<std::string>(std::begin(kColumns), std::end(kColumns)));
  if (md) {
    os << '|';
    for (std::size_t i = 0; i < std::size(kColumns); ++i) os << " --- |";
    os << '\n';
  }
  for (const auto& r : records)
    row({r.supplement, r.deficiency ? "yes" : "no", r.event,
         std::string(dsae::to_string(r.relation)), std::to_string(r.frequency),
         std::string(to_string(r.in_kb)), join_ids(r.example_doc_ids)});
  return os.str();
}

void emit_report(std::span<const SignalRecord> records, ReportFormat format,
                 const std::string& path) {
  io::write_file_atomic(path, render_report(records, format));
}

std::vector<SignalRecord> parse_report_tsv(std::string_view tsv) {
  const auto lines = io::split_lines(tsv);
  if (lines.empty()) throw ParseError("empty report");
  const auto head = io::split(lines[0], '\t');
  if (head.size() != std::size(kColumns)) throw ParseError("unexpected report header", 1);
  for (std::size_t i = 0; i < head.size(); ++i)
    if (head[i] != kColumns[i]) throw ParseError("unexpected report header", 1);
  std::vector<SignalRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = io::split(lines[i], '\t');
    if (f.size() != std::size(kColumns)) throw ParseError("expected 7 columns", i + 1);
    SignalRecord r;
    r.supplement = std::string(f[0]);
    if (f[1] != "yes" && f[1] != "no") throw ParseError("bad deficiency value", i + 1);
    r.deficiency = f[1] == "yes";
    r.event = std::string(f[2]);
    const auto rel = parse_relation_label(f[3]);
    if (!rel) throw ParseError("bad relation value", i + 1);
    r.relation = *rel;
    try {
      r.frequency = std::stoul(std::string(f[4]));
    } catch (const std::exception&) {
      throw ParseError("bad frequency", i + 1);
    }
    if (f[5] == "yes")
      r.in_kb = KbStatus::Yes;
    else if (f[5] == "no")
      r.in_kb = KbStatus::No;
    else if (f[5] == "unknown")
      r.in_kb = KbStatus::Unknown;
    else
      throw ParseError("bad in_kb value", i + 1);
    if (!f[6].empty())
      for (auto id : io::split(f[6], ';')) r.example_doc_ids.emplace_back(id);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dsae::signals
