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

#include "dsae/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "dsae/error.hpp"
#include "dsae/io.hpp"
#include "json.hpp"

namespace dsae::corpus {

using nlohmann::json;

TweetLoad parse_tweets(std::string_view jsonl) {
  TweetLoad out;
  std::set<std::string, std::less<>> seen;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(jsonl)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto skip = [&](const std::string& why) {
      ++out.skipped;
      out.diagnostics.push_back("line " + std::to_string(lineno) + ": " + why);
    };
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      skip("not a JSON object");
      continue;
    }
    auto str_field = [&](const char* key) -> const std::string* {
      auto it = j.find(key);
      if (it == j.end() || !it->is_string()) return nullptr;
      return it->get_ptr<const std::string*>();
    };
    const std::string* id = str_field("id");
    const std::string* text = str_field("text");
    const std::string* lang = str_field("lang");
    if (!id || id->empty()) {
      skip("missing or empty id");
      continue;
    }
    if (!text || text->empty()) {
      skip("missing or empty text");
      continue;
    }
    if (!lang) {
      skip("missing lang");
      continue;
    }
    if (!seen.insert(*id).second) {
      skip("duplicate id " + *id);
      continue;
    }
    Tweet t{*id, *text, *lang, std::nullopt};
    if (const std::string* c = str_field("created_at")) t.created_at = *c;
    out.tweets.push_back(std::move(t));
  }
  return out;
}

TweetLoad load_tweets(const std::string& path) {
  return parse_tweets(io::read_file(path));
}

void Lexicon::add(std::string_view surface, std::string_view canonical,
                  EntityType category) {
  std::string s = ascii_lower(trim(surface));
  std::string c = ascii_lower(trim(canonical));
  if (c.empty()) c = s;
  if (s.empty()) throw InvalidArgument("empty lexicon term");
  auto it = entries_.find(s);
  if (it != entries_.end()) {
    if (it->second.canonical != c || it->second.category != category)
      throw InvalidArgument("conflicting lexicon entries for term '" + s + "'");
    return;
  }
  // A canonical form that is itself an entry must map to itself.
  if (auto cit = entries_.find(c); cit != entries_.end() && c != s &&
                                   cit->second.canonical != c)
    throw InvalidArgument("canonical '" + c + "' of '" + s +
                          "' is itself a variant of '" + cit->second.canonical +
                          "'");
  if (s != c && variant_targets_.count(s))
    throw InvalidArgument("term '" + s + "' is used as a canonical form but maps to '" +
                            c + "'");
  if (s != c) variant_targets_.insert(c);
  entries_.emplace(s, LexiconEntry{s, c, category});
  if (std::find(lengths_.begin(), lengths_.end(), s.size()) == lengths_.end()) {
    lengths_.push_back(s.size());
    std::sort(lengths_.begin(), lengths_.end(), std::greater<>());
  }
}

void Lexicon::merge(const Lexicon& other) {
  for (const auto& [k, e] : other.entries_) add(e.surface, e.canonical, e.category);
}

const LexiconEntry* Lexicon::find(std::string_view surface) const {
  auto it = entries_.find(surface);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> Lexicon::canonical(std::string_view surface) const {
  if (const auto* e = find(surface)) return e->canonical;
  return std::nullopt;
}

Lexicon parse_lexicon(std::string_view tsv, EntityType category) {
  Lexicon lex;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(tsv)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = io::split(line, '\t');
    if (cols.size() > 2) throw ParseError("expected at most two columns", lineno);
    try {
      lex.add(cols[0], cols.size() > 1 ? cols[1] : std::string_view{}, category);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::string& path, EntityType category) {
  try {
    return parse_lexicon(io::read_file(path), category);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace {
bool is_alnum_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}
}  // namespace

bool is_word_boundary(std::string_view text, std::size_t pos) {
  if (pos == 0 || pos >= text.size()) return true;
  return is_alnum_byte(text[pos - 1]) != is_alnum_byte(text[pos]);
}

std::vector<LexiconHit> match_terms(std::string_view text, const Lexicon& lexicon) {
  std::vector<LexiconHit> hits;
  std::size_t i = 0;
  while (i < text.size()) {
    bool matched = false;
    if (is_word_boundary(text, i)) {
      for (std::size_t len : lexicon.lengths()) {
        if (i + len > text.size()) continue;
        if (!is_word_boundary(text, i + len)) continue;
        const auto* e = lexicon.find(text.substr(i, len));
        if (!e) continue;
        hits.push_back({e->surface, e->canonical, e->category, i, i + len});
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return hits;
}

Candidate filter_candidate(const Tweet& tweet, const Lexicon& ds_lexicon,
                           const Lexicon& event_lexicon) {
  Candidate c;
  const std::string lowered = ascii_lower(tweet.text);
  c.ds_hits = match_terms(lowered, ds_lexicon);
  c.event_hits = match_terms(lowered, event_lexicon);
  c.selected = tweet.lang == "en" && !c.ds_hits.empty() && !c.event_hits.empty();
  return c;
}

}  // namespace dsae::corpus
