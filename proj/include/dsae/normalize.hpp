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

#ifndef DSAE_NORMALIZE_HPP_
#define DSAE_NORMALIZE_HPP_

// Tweet preprocessing. Rules run in a fixed order: URL removal, handle
// removal, emoji removal, contraction expansion, hashtag segmentation,
// lower-casing, tokenisation. Every surviving byte remembers where it came
// from in the original text; bytes produced by expansion or inserted as
// separators are synthetic.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dsae::normalize {

inline constexpr std::size_t kSynthetic = static_cast<std::size_t>(-1);

struct Token {
  std::string surface;
  std::size_t start = 0;  // byte offsets into normalized_text
  std::size_t end = 0;
  std::size_t orig_start = kSynthetic;  // byte offsets into original_text
  std::size_t orig_end = kSynthetic;
  std::string pos;  // empty until tagged

  bool synthetic() const { return orig_start == kSynthetic; }
};

struct NormalizedDoc {
  std::string doc_id;
  std::string original_text;
  std::string normalized_text;
  std::vector<Token> tokens;
};

class UnigramTable {
 public:
  UnigramTable() = default;
  void add(std::string_view word, double count);
  double count(std::string_view word) const;
  double total() const { return total_; }
  std::size_t size() const { return counts_.size(); }
  // log P(word); unknown words get 1 / (total * 10^len).
  double log_prob(std::string_view word) const;

  // Small built-in table of common English and supplement vocabulary.
  static const UnigramTable& builtin();

 private:
  std::map<std::string, double, std::less<>> counts_;
  double total_ = 0.0;
};

// TSV word<TAB>count; counts must be positive.
UnigramTable load_unigrams(const std::string& path);
UnigramTable parse_unigrams(std::string_view tsv);

class ContractionTable {
 public:
  void add(std::string_view contraction, std::string_view expansion);
  // Expansion for a lower-cased contraction (curly apostrophes accepted).
  const std::string* find(std::string_view contraction) const;
  std::size_t size() const { return table_.size(); }

  // The shipped list; forms ending in 's are deliberately absent.
  static const ContractionTable& builtin();

 private:
  std::map<std::string, std::string, std::less<>> table_;
};

ContractionTable load_contractions(const std::string& path);
ContractionTable parse_contractions(std::string_view tsv);

NormalizedDoc normalize(std::string_view doc_id, std::string_view text,
                        const UnigramTable& unigrams = UnigramTable::builtin(),
                        const ContractionTable& contractions =
                            ContractionTable::builtin());

// Camel-case transitions are hard split points; each chunk is then split by
// maximum likelihood under the unigram model. Returned words are substrings
// of `body` (original case).
std::vector<std::string> segment_hashtag(std::string_view body,
                                         const UnigramTable& unigrams);

// Sum of log-probabilities of the lower-cased words.
double segmentation_score(const std::vector<std::string>& words,
                          const UnigramTable& unigrams);

// Whitespace split; leading/trailing ASCII punctuation becomes one token per
// character; interior hyphens and apostrophes stay attached.
std::vector<Token> tokenize(std::string_view text);

inline constexpr const char* kPosTags[] = {"NOUN", "VERB", "ADJ", "ADV", "PRON",
                                           "DET",  "ADP",  "NUM", "PUNCT", "X"};

// Rule-based coarse tagger: closed-class lexicon then suffix rules.
std::string fallback_pos(std::string_view word);

// Per-token tags from an external TSV (doc_id, token index, tag); tokens not
// covered fall back to the rule tagger.
class PosSource {
 public:
  PosSource() = default;  // fallback only
  static PosSource from_tsv(std::string_view tsv);
  static PosSource load(const std::string& path);

  bool external() const { return !tags_.empty(); }
  // Throws ParseError naming the line for entries whose doc or token index
  // does not exist in `token_counts` (doc_id -> token count).
  void validate(const std::map<std::string, std::size_t>& token_counts) const;
  void tag(NormalizedDoc& doc) const;

 private:
  struct Entry {
    std::string tag;
    std::size_t line;
  };
  std::map<std::string, std::map<std::size_t, Entry>> tags_;
};

void pos_tag(NormalizedDoc& doc, const PosSource& source = PosSource{});

}  // namespace dsae::normalize

#endif  // DSAE_NORMALIZE_HPP_
