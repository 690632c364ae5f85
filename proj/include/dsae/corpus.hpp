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

#ifndef DSAE_CORPUS_HPP_
#define DSAE_CORPUS_HPP_

// Raw document and lexicon loading, gazetteer matching and candidate
// selection by supplement / event term co-occurrence.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dsae/types.hpp"

namespace dsae::corpus {

struct Tweet {
  std::string id;
  std::string text;
  std::string lang;
  std::optional<std::string> created_at;
};

struct TweetLoad {
  std::vector<Tweet> tweets;
  std::size_t skipped = 0;
  std::vector<std::string> diagnostics;  // one per skipped line
};

// JSON Lines, keys id, text, lang, created_at (optional). Malformed lines and
// duplicate ids are skipped with a diagnostic. Throws IoError if unreadable.
TweetLoad load_tweets(const std::string& path);
TweetLoad parse_tweets(std::string_view jsonl);

struct LexiconEntry {
  std::string surface;
  std::string canonical;
  EntityType category;
};

class Lexicon {
 public:
  // Adds an entry; lower-cases both forms. Throws InvalidArgument on an
  // empty term or a surface already mapped to a different canonical form.
  void add(std::string_view surface, std::string_view canonical,
           EntityType category);
  // Merges another lexicon (used to build the symptom + organ event lexicon).
  void merge(const Lexicon& other);

  const LexiconEntry* find(std::string_view surface) const;
  // Canonical form of `surface`, or nullopt when not an entry.
  std::optional<std::string> canonical(std::string_view surface) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const {
    return entries_;
  }
  // Distinct entry byte lengths, longest first.
  const std::vector<std::size_t>& lengths() const { return lengths_; }

 private:
  std::map<std::string, LexiconEntry, std::less<>> entries_;
  std::vector<std::size_t> lengths_;
  std::set<std::string, std::less<>> variant_targets_;
};

// TSV surface<TAB>canonical (canonical optional). Throws ParseError naming the
// term (and line) on conflicting duplicates.
Lexicon load_lexicon(const std::string& path, EntityType category);
Lexicon parse_lexicon(std::string_view tsv, EntityType category);

struct LexiconHit {
  std::string term;
  std::string canonical;
  EntityType category;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
};

// Word boundary: position 0, the end, or any transition between an
// alphanumeric byte and a non-alphanumeric one (bytes >= 0x80 count as
// alphanumeric).
bool is_word_boundary(std::string_view text, std::size_t pos);

// Leftmost-longest, non-overlapping, boundary-respecting matches. `text` is
// expected to be lower-cased already.
std::vector<LexiconHit> match_terms(std::string_view text, const Lexicon& lexicon);

struct Candidate {
  bool selected = false;
  std::vector<LexiconHit> ds_hits;
  std::vector<LexiconHit> event_hits;
};

// True iff lang == "en" and both lexicons hit the lower-cased text.
Candidate filter_candidate(const Tweet& tweet, const Lexicon& ds_lexicon,
                           const Lexicon& event_lexicon);

}  // namespace dsae::corpus

#endif  // DSAE_CORPUS_HPP_
