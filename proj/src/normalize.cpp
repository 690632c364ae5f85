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

#include "dsae/normalize.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "dsae/error.hpp"
#include "dsae/io.hpp"
#include "dsae/types.hpp"

namespace dsae::normalize {

namespace {

// Rough relative frequencies; rank r gets count 1e8 / (r + 1).
constexpr const char* kBuiltinWords[] = {
    "the", "i", "to", "a", "and", "is", "in", "it", "you", "of", "for", "on",
    "my", "that", "me", "this", "with", "be", "so", "have", "just", "not",
    "at", "but", "do", "can", "we", "are", "all", "what", "your", "get", "no",
    "love", "like", "up", "out", "good", "day", "now", "go", "one", "if",
    "know", "about", "will", "how", "today", "time", "more", "new", "got",
    "from", "was", "make", "great", "really", "health", "feel", "take",
    "best", "happy", "life", "need", "free", "daily", "sleep", "pain",
    "vitamin", "body", "oil", "skin", "hair", "sick", "fish", "water", "tea",
    "green", "stop", "better", "food", "healthy", "natural", "cold", "flu",
    "heart", "stomach", "head", "back", "tired", "weight", "loss", "diet",
    "fitness", "iron", "zinc", "sun", "c", "d", "b", "e", "k", "b12", "acid",
    "folic", "extract", "seed", "grape", "fat", "burn", "liver", "kidney",
    "stones", "stone", "protein", "power", "energy", "boost", "immune",
    "system", "support", "magnesium", "calcium", "melatonin", "biotin",
    "niacin", "turmeric", "ginseng", "echinacea", "collagen", "probiotic",
    "probiotics", "supplement", "supplements", "vitamins", "headache",
    "nausea", "acne", "anxiety", "cancer", "dream", "dreams", "growth",
    "cider", "vinegar", "apple", "wort", "st", "johns", "kava", "ginger",
    "garlic", "elderberry", "omega", "three", "3", "mood", "brain", "fog",
    "joint", "joints", "bone", "bones", "gut", "throat", "sore", "cough",
    "cramps", "insomnia", "flush", "red", "root", "valerian", "ashwagandha",
    "keto", "vegan", "detox", "cleanse", "juice", "smoothie", "morning",
    "night", "week", "tbt", "motivation", "workout", "gym", "self", "care",
    "wellness", "nutrition", "mental", "strong", "stay", "positive",
};

constexpr std::pair<const char*, const char*> kBuiltinContractions[] = {
    {"ain't", "am not"},        {"aren't", "are not"},
    {"can't", "can not"},       {"couldn't", "could not"},
    {"didn't", "did not"},      {"doesn't", "does not"},
    {"don't", "do not"},        {"hadn't", "had not"},
    {"hasn't", "has not"},      {"haven't", "have not"},
    {"isn't", "is not"},        {"mightn't", "might not"},
    {"mustn't", "must not"},    {"needn't", "need not"},
    {"shan't", "shall not"},    {"shouldn't", "should not"},
    {"wasn't", "was not"},      {"weren't", "were not"},
    {"won't", "will not"},      {"wouldn't", "would not"},
    {"i'm", "i am"},            {"you're", "you are"},
    {"we're", "we are"},        {"they're", "they are"},
    {"who're", "who are"},      {"what're", "what are"},
    {"there're", "there are"},  {"i've", "i have"},
    {"you've", "you have"},     {"we've", "we have"},
    {"they've", "they have"},   {"who've", "who have"},
    {"could've", "could have"}, {"should've", "should have"},
    {"would've", "would have"}, {"might've", "might have"},
    {"must've", "must have"},   {"i'll", "i will"},
    {"you'll", "you will"},     {"he'll", "he will"},
    {"she'll", "she will"},     {"it'll", "it will"},
    {"we'll", "we will"},       {"they'll", "they will"},
    {"that'll", "that will"},   {"there'll", "there will"},
    {"who'll", "who will"},     {"what'll", "what will"},
    {"i'd", "i would"},         {"you'd", "you would"},
    {"he'd", "he would"},       {"she'd", "she would"},
    {"it'd", "it would"},       {"we'd", "we would"},
    {"they'd", "they would"},   {"that'd", "that would"},
    {"how'd", "how did"},       {"why'd", "why did"},
    {"where'd", "where did"},   {"y'all", "you all"},
    {"let's", "let us"},        {"ma'am", "madam"},
    {"'cause", "because"},      {"o'clock", "of the clock"},
};

bool ascii_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool alnum_byte(char c) {
  return static_cast<unsigned char>(c) >= 0x80 || ascii_alnum(c);
}
bool ascii_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Text under transformation: each byte carries its original offset.
struct Work {
  std::string s;
  std::vector<std::size_t> o;

  void push(char c, std::size_t orig) {
    s.push_back(c);
    o.push_back(orig);
  }
  void push_synthetic(std::string_view text) {
    for (char c : text) push(c, kSynthetic);
  }
  void copy_from(const Work& w, std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) push(w.s[k], w.o[k]);
  }
};

bool starts_with_ci(std::string_view s, std::size_t i, std::string_view prefix) {
  if (i + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = s[i + k];
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[k]) return false;
  }
  return true;
}

bool at_word_start(const std::string& s, std::size_t i) {
  return i == 0 || !alnum_byte(s[i - 1]);
}

Work remove_urls(const Work& in) {
  Work out;
  const std::string& s = in.s;
  std::size_t i = 0;
  while (i < s.size()) {
    if (at_word_start(s, i) &&
        (starts_with_ci(s, i, "http://") || starts_with_ci(s, i, "https://") ||
         starts_with_ci(s, i, "www."))) {
      while (i < s.size() && !ascii_space(s[i])) ++i;
      out.push(' ', kSynthetic);
      continue;
    }
    out.push(s[i], in.o[i]);
    ++i;
  }
  return out;
}

Work remove_handles(const Work& in) {
  Work out;
  const std::string& s = in.s;
  std::size_t i = 0;
  auto handle_char = [](char c) { return ascii_alnum(c) || c == '_'; };
  while (i < s.size()) {
    if (s[i] == '@' && at_word_start(s, i) && i + 1 < s.size() &&
        handle_char(s[i + 1])) {
      ++i;
      while (i < s.size() && handle_char(s[i])) ++i;
      out.push(' ', kSynthetic);
      continue;
    }
    out.push(s[i], in.o[i]);
    ++i;
  }
  return out;
}

// Decodes one UTF-8 sequence at i; returns its length (0 when invalid).
std::size_t decode_utf8(const std::string& s, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  return len;
}

// Emoji_Presentation code points outside the U+1F300..U+1FAFF blocks.
constexpr std::pair<char32_t, char32_t> kEmojiRanges[] = {
    {0x231A, 0x231B},   {0x23E9, 0x23EC},   {0x23F0, 0x23F0},
    {0x23F3, 0x23F3},   {0x25FD, 0x25FE},   {0x2614, 0x2615},
    {0x2648, 0x2653},   {0x267F, 0x267F},   {0x2693, 0x2693},
    {0x26A1, 0x26A1},   {0x26AA, 0x26AB},   {0x26BD, 0x26BE},
    {0x26C4, 0x26C5},   {0x26CE, 0x26CE},   {0x26D4, 0x26D4},
    {0x26EA, 0x26EA},   {0x26F2, 0x26F3},   {0x26F5, 0x26F5},
    {0x26FA, 0x26FA},   {0x26FD, 0x26FD},   {0x2705, 0x2705},
    {0x270A, 0x270B},   {0x2728, 0x2728},   {0x274C, 0x274C},
    {0x274E, 0x274E},   {0x2753, 0x2755},   {0x2757, 0x2757},
    {0x2795, 0x2797},   {0x27B0, 0x27B0},   {0x27BF, 0x27BF},
    {0x2B1B, 0x2B1C},   {0x2B50, 0x2B50},   {0x2B55, 0x2B55},
    {0x1F004, 0x1F004}, {0x1F0CF, 0x1F0CF}, {0x1F18E, 0x1F18E},
    {0x1F191, 0x1F19A}, {0x1F1E6, 0x1F1FF}, {0x1F201, 0x1F201},
    {0x1F21A, 0x1F21A}, {0x1F22F, 0x1F22F}, {0x1F232, 0x1F236},
    {0x1F238, 0x1F23A}, {0x1F250, 0x1F251}, {0x1F300, 0x1FAFF},
    {0xFE00, 0xFE0F},   {0x200D, 0x200D},   {0x20E3, 0x20E3},
};

bool is_emoji(char32_t cp) {
  for (auto [lo, hi] : kEmojiRanges)
    if (cp >= lo && cp <= hi) return true;
  return false;
}

Work remove_emoji(const Work& in) {
  Work out;
  const std::string& s = in.s;
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp = 0;
    const std::size_t len = decode_utf8(s, i, cp);
    if (len == 0) {
      out.push(s[i], in.o[i]);
      ++i;
      continue;
    }
    if (len > 1 && is_emoji(cp)) {
      out.push(' ', kSynthetic);
    } else {
      out.copy_from(in, i, i + len);
    }
    i += len;
  }
  return out;
}

bool curly_apostrophe_at(const std::string& s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80 &&
         static_cast<unsigned char>(s[i + 2]) == 0x99;
}

Work expand_contractions(const Work& in, const ContractionTable& table) {
  Work out;
  const std::string& s = in.s;
  std::size_t i = 0;
  auto word_byte_len = [&](std::size_t k) -> std::size_t {
    if (std::isalpha(static_cast<unsigned char>(s[k])) || s[k] == '\'') return 1;
    if (curly_apostrophe_at(s, k)) return 3;
    return 0;
  };
  while (i < s.size()) {
    std::size_t step = word_byte_len(i);
    if (step == 0 || (i > 0 && alnum_byte(s[i - 1]))) {
      out.push(s[i], in.o[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string key;
    while (j < s.size() && (step = word_byte_len(j)) > 0) {
      key.push_back(step == 3 ? '\'' : s[j]);
      j += step;
    }
    const bool bounded = j >= s.size() || !alnum_byte(s[j]);
    const std::string* expansion = bounded ? table.find(key) : nullptr;
    if (expansion) {
      out.push_synthetic(*expansion);
    } else {
      out.copy_from(in, i, j);
    }
    i = j;
  }
  return out;
}

Work segment_hashtags(const Work& in, const UnigramTable& unigrams) {
  Work out;
  const std::string& s = in.s;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '#' && at_word_start(s, i) && i + 1 < s.size() &&
        ascii_alnum(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && ascii_alnum(s[j])) ++j;
      const std::string_view body(s.data() + i + 1, j - i - 1);
      const auto words = segment_hashtag(body, unigrams);
      std::size_t pos = i + 1;
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (w > 0) out.push(' ', kSynthetic);
        out.copy_from(in, pos, pos + words[w].size());
        pos += words[w].size();
      }
      i = j;
      continue;
    }
    out.push(s[i], in.o[i]);
    ++i;
  }
  return out;
}

std::vector<Token> tokenize_work(const Work& w) {
  std::vector<Token> tokens;
  const std::string& s = w.s;
  auto emit = [&](std::size_t b, std::size_t e) {
    Token t;
    t.surface = s.substr(b, e - b);
    t.start = b;
    t.end = e;
    bool contiguous = true;
    for (std::size_t k = b; k < e; ++k) {
      if (w.o[k] == kSynthetic || (k > b && w.o[k] != w.o[k - 1] + 1)) {
        contiguous = false;
        break;
      }
    }
    if (contiguous) {
      t.orig_start = w.o[b];
      t.orig_end = w.o[e - 1] + 1;
    }
    tokens.push_back(std::move(t));
  };
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && ascii_space(s[i])) ++i;
    if (i >= s.size()) break;
    std::size_t a = i;
    while (i < s.size() && !ascii_space(s[i])) ++i;
    std::size_t b = i;
    while (a < b && ascii_punct(s[a])) {
      emit(a, a + 1);
      ++a;
    }
    std::size_t m = b;
    while (m > a && ascii_punct(s[m - 1])) --m;
    if (m > a) emit(a, m);
    for (std::size_t k = m; k < b; ++k) emit(k, k + 1);
  }
  return tokens;
}

}  // namespace

void UnigramTable::add(std::string_view word, double count) {
  if (!(count > 0.0) || !std::isfinite(count))
    throw InvalidArgument("unigram count must be positive");
  const std::string w = ascii_lower(word);
  if (w.empty()) throw InvalidArgument("empty unigram");
  counts_[w] += count;
  total_ += count;
}

double UnigramTable::count(std::string_view word) const {
  auto it = counts_.find(word);
  return it == counts_.end() ? 0.0 : it->second;
}

double UnigramTable::log_prob(std::string_view word) const {
  const double total = total_ > 0.0 ? total_ : 1.0;
  const double c = count(word);
  if (c > 0.0) return std::log(c / total);
  return -std::log(total) - static_cast<double>(word.size()) * std::log(10.0);
}

const UnigramTable& UnigramTable::builtin() {
  static const UnigramTable table = [] {
    UnigramTable t;
    double rank = 1.0;
    for (const char* w : kBuiltinWords) {
      t.add(w, std::round(1e8 / rank));
      rank += 1.0;
    }
    return t;
  }();
  return table;
}

UnigramTable parse_unigrams(std::string_view tsv) {
  UnigramTable t;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(tsv)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = io::split(line, '\t');
    if (cols.size() != 2) throw ParseError("expected word<TAB>count", lineno);
    double c = 0.0;
    try {
      c = std::stod(std::string(cols[1]));
    } catch (const std::exception&) {
      throw ParseError("bad count", lineno);
    }
    try {
      t.add(trim(cols[0]), c);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return t;
}

UnigramTable load_unigrams(const std::string& path) {
  return parse_unigrams(io::read_file(path));
}

void ContractionTable::add(std::string_view contraction, std::string_view expansion) {
  std::string key = ascii_lower(trim(contraction));
  std::string k2;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (curly_apostrophe_at(key, i)) {
      k2.push_back('\'');
      i += 2;
    } else {
      k2.push_back(key[i]);
    }
  }
  if (k2.empty()) throw InvalidArgument("empty contraction");
  table_[k2] = ascii_lower(trim(expansion));
}

const std::string* ContractionTable::find(std::string_view contraction) const {
  auto it = table_.find(ascii_lower(contraction));
  return it == table_.end() ? nullptr : &it->second;
}

const ContractionTable& ContractionTable::builtin() {
  static const ContractionTable table = [] {
    ContractionTable t;
    for (auto [c, e] : kBuiltinContractions) t.add(c, e);
    return t;
  }();
  return table;
}

ContractionTable parse_contractions(std::string_view tsv) {
  ContractionTable t;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(tsv)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = io::split(line, '\t');
    if (cols.size() != 2)
      throw ParseError("expected contraction<TAB>expansion", lineno);
    t.add(cols[0], cols[1]);
  }
  return t;
}

ContractionTable load_contractions(const std::string& path) {
  return parse_contractions(io::read_file(path));
}

double segmentation_score(const std::vector<std::string>& words,
                          const UnigramTable& unigrams) {
  double score = 0.0;
  for (const auto& w : words) score += unigrams.log_prob(ascii_lower(w));
  return score;
}

namespace {

std::vector<std::string> segment_chunk(std::string_view chunk,
                                       const UnigramTable& unigrams) {
  const std::size_t n = chunk.size();
  const std::string lower = ascii_lower(chunk);
  std::vector<double> best(n + 1, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> back(n + 1, 0);
  best[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double s =
          best[i] + unigrams.log_prob(std::string_view(lower).substr(i, j - i));
      if (s > best[j]) {
        best[j] = s;
        back[j] = i;
      }
    }
  }
  std::vector<std::string> words;
  for (std::size_t j = n; j > 0; j = back[j])
    words.emplace_back(chunk.substr(back[j], j - back[j]));
  return {words.rbegin(), words.rend()};
}

}  // namespace

std::vector<std::string> segment_hashtag(std::string_view body,
                                         const UnigramTable& unigrams) {
  std::vector<std::string> out;
  if (body.empty()) return out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    for (auto& w : segment_chunk(body.substr(start, end - start), unigrams))
      out.push_back(std::move(w));
    start = end;
  };
  for (std::size_t p = 1; p < body.size(); ++p) {
    const char prev = body[p - 1], cur = body[p];
    const bool split =
        (is_lower(prev) && is_upper(cur)) || (is_digit(prev) && is_upper(cur)) ||
        (is_upper(prev) && is_upper(cur) && p + 1 < body.size() &&
         is_lower(body[p + 1]));
    if (split) flush(p);
  }
  flush(body.size());
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  Work w;
  for (std::size_t i = 0; i < text.size(); ++i) w.push(text[i], i);
  return tokenize_work(w);
}

NormalizedDoc normalize(std::string_view doc_id, std::string_view text,
                        const UnigramTable& unigrams,
                        const ContractionTable& contractions) {
  NormalizedDoc doc;
  doc.doc_id = std::string(doc_id);
  doc.original_text = std::string(text);
  Work w;
  for (std::size_t i = 0; i < text.size(); ++i) w.push(text[i], i);
  w = remove_urls(w);
  w = remove_handles(w);
  w = remove_emoji(w);
  w = expand_contractions(w, contractions);
  w = segment_hashtags(w, unigrams);
  for (char& c : w.s)
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  doc.tokens = tokenize_work(w);
  for (auto& t : doc.tokens) {
    if (!doc.normalized_text.empty()) doc.normalized_text.push_back(' ');
    t.start = doc.normalized_text.size();
    doc.normalized_text += t.surface;
    t.end = doc.normalized_text.size();
  }
  return doc;
}

std::string fallback_pos(std::string_view word) {
  static const std::map<std::string, std::string, std::less<>> closed = {
      {"the", "DET"},     {"a", "DET"},       {"an", "DET"},
      {"this", "DET"},    {"that", "DET"},    {"these", "DET"},
      {"those", "DET"},   {"my", "DET"},      {"your", "DET"},
      {"his", "DET"},     {"her", "DET"},     {"its", "DET"},
      {"our", "DET"},     {"their", "DET"},   {"some", "DET"},
      {"any", "DET"},     {"every", "DET"},   {"no", "DET"},
      {"each", "DET"},    {"i", "PRON"},      {"you", "PRON"},
      {"he", "PRON"},     {"she", "PRON"},    {"it", "PRON"},
      {"we", "PRON"},     {"they", "PRON"},   {"me", "PRON"},
      {"him", "PRON"},    {"us", "PRON"},     {"them", "PRON"},
      {"myself", "PRON"}, {"yourself", "PRON"}, {"who", "PRON"},
      {"what", "PRON"},   {"in", "ADP"},      {"on", "ADP"},
      {"at", "ADP"},      {"for", "ADP"},     {"with", "ADP"},
      {"of", "ADP"},      {"to", "ADP"},      {"from", "ADP"},
      {"by", "ADP"},      {"about", "ADP"},   {"after", "ADP"},
      {"before", "ADP"},  {"into", "ADP"},    {"over", "ADP"},
      {"under", "ADP"},   {"without", "ADP"}, {"during", "ADP"},
      {"through", "ADP"}, {"since", "ADP"},   {"because", "ADP"},
      {"is", "VERB"},     {"am", "VERB"},     {"are", "VERB"},
      {"was", "VERB"},    {"were", "VERB"},   {"be", "VERB"},
      {"been", "VERB"},   {"have", "VERB"},   {"has", "VERB"},
      {"had", "VERB"},    {"do", "VERB"},     {"does", "VERB"},
      {"did", "VERB"},    {"will", "VERB"},   {"would", "VERB"},
      {"can", "VERB"},    {"could", "VERB"},  {"should", "VERB"},
      {"may", "VERB"},    {"might", "VERB"},  {"must", "VERB"},
      {"not", "ADV"},     {"very", "ADV"},    {"too", "ADV"},
      {"so", "ADV"},      {"just", "ADV"},    {"now", "ADV"},
      {"and", "X"},       {"or", "X"},        {"but", "X"},
      {"one", "NUM"},     {"two", "NUM"},     {"three", "NUM"},
      {"four", "NUM"},    {"five", "NUM"},    {"ten", "NUM"},
  };
  const std::string w = ascii_lower(word);
  if (w.empty()) return "X";
  if (auto it = closed.find(w); it != closed.end()) return it->second;
  bool all_punct = true, all_num = true;
  for (char c : w) {
    all_punct = all_punct && ascii_punct(c);
    all_num = all_num && (is_digit(c) || c == '.' || c == ',');
  }
  if (all_punct) return "PUNCT";
  if (all_num && is_digit(w.front())) return "NUM";
  auto ends = [&](std::string_view suf) {
    return w.size() > suf.size() + 1 &&
           std::string_view(w).substr(w.size() - suf.size()) == suf;
  };
  if (ends("ing") || ends("ed")) return "VERB";
  if (ends("ly")) return "ADV";
  for (const char* s : {"ous", "ful", "ive", "able", "ible", "less", "ic", "al"})
    if (ends(s)) return "ADJ";
  return "NOUN";
}

PosSource PosSource::from_tsv(std::string_view tsv) {
  PosSource src;
  std::size_t lineno = 0;
  for (std::string_view line : io::split_lines(tsv)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cols = io::split(line, '\t');
    if (cols.size() != 3)
      throw ParseError("expected doc_id<TAB>token_index<TAB>tag", lineno);
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(std::string(cols[1]), &used);
      if (used != cols[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad token index", lineno);
    }
    src.tags_[std::string(cols[0])][idx] = {trim(cols[2]), lineno};
  }
  return src;
}

PosSource PosSource::load(const std::string& path) {
  return from_tsv(io::read_file(path));
}

void PosSource::validate(const std::map<std::string, std::size_t>& token_counts) const {
  for (const auto& [doc, entries] : tags_) {
    auto it = token_counts.find(doc);
    if (it == token_counts.end())
      throw ParseError("POS entry for unknown document '" + doc + "'",
                       entries.begin()->second.line);
    for (const auto& [idx, e] : entries)
      if (idx >= it->second)
        throw ParseError("POS entry for token " + std::to_string(idx) +
                             " beyond the end of document '" + doc + "'",
                         e.line);
  }
}

void PosSource::tag(NormalizedDoc& doc) const {
  const std::map<std::size_t, Entry>* ext = nullptr;
  if (auto it = tags_.find(doc.doc_id); it != tags_.end()) {
    ext = &it->second;
    for (const auto& [idx, e] : *ext)
      if (idx >= doc.tokens.size())
        throw ParseError("POS entry for token " + std::to_string(idx) +
                             " beyond the end of document '" + doc.doc_id + "'",
                         e.line);
  }
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    if (ext) {
      if (auto it = ext->find(i); it != ext->end()) {
        doc.tokens[i].pos = it->second.tag;
        continue;
      }
    }
    doc.tokens[i].pos = fallback_pos(doc.tokens[i].surface);
  }
}

void pos_tag(NormalizedDoc& doc, const PosSource& source) { source.tag(doc); }

}  // namespace dsae::normalize
