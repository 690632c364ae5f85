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

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "dsae/error.hpp"
#include "dsae/normalize.hpp"
#include "dsae/rng.hpp"

using namespace dsae;
using namespace dsae::normalize;
namespace nz = dsae::normalize;

namespace {

std::vector<std::string> surfaces(const NormalizedDoc& d) {
  std::vector<std::string> out;
  for (const auto& t : d.tokens) out.push_back(t.surface);
  return out;
}

UnigramTable small_table() {
  UnigramTable t;
  for (auto [w, c] : std::vector<std::pair<const char*, double>>{
           {"vitamin", 500}, {"c", 300}, {"vita", 2}, {"min", 40}, {"fish", 400},
           {"oil", 350}, {"melatonin", 80}, {"i", 5000}, {"love", 900}, {"lo", 3},
           {"ve", 1}, {"sleep", 600}, {"slee", 1}, {"p", 20}, {"a", 3000}})
    t.add(w, c);
  return t;
}

// Every way to cut `s` into pieces, 2^(n-1) of them.
std::vector<std::vector<std::string>> all_splits(const std::string& s) {
  std::vector<std::vector<std::string>> out;
  const std::size_t n = s.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << (n - 1)); ++mask) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (mask & (std::size_t{1} << (i - 1))) {
        parts.push_back(s.substr(start, i - start));
        start = i;
      }
    parts.push_back(s.substr(start));
    out.push_back(parts);
  }
  return out;
}

}  // namespace

TEST_CASE("normalize applies the ordered cleaning rules") {
  auto d = nz::normalize("d1", "@u check https://x.co #FishOil");
  CHECK(d.normalized_text == "check fish oil");

  auto camel = nz::normalize("d2", "#ILoveVitaminC");
  CHECK(camel.normalized_text == "i love vitamin c");

  auto c1 = nz::normalize("d3", "it doesn't help and I won't stop");
  CHECK(c1.normalized_text == "it does not help and i will not stop");

  CHECK(nz::normalize("d4", "").tokens.empty());
  CHECK(nz::normalize("d5", "\xF0\x9F\x98\x80\xF0\x9F\x92\x8A").tokens.empty());  // emoji only
  // 's is ambiguous and stays attached.
  CHECK(nz::normalize("d6", "it's fine").normalized_text == "it's fine");
}

TEST_CASE("normalize invariants") {
  const std::vector<std::string> samples = {
      "Took #VitaminD3 today and can't sleep!! https://t.co/abc @doc",
      "Fish oil is great for my joints \xF0\x9F\x99\x8C",
      "high-dose NIACIN => flush... lol",
      "#sleep #Melatonin helps?",
      "I'm taking B12 for fatigue, it's working",
  };
  for (const auto& s : samples) {
    const auto d = nz::normalize("x", s);
    // Lowercase and space-joined tokens reproduce the text.
    std::string joined;
    for (const auto& t : d.tokens) joined += (joined.empty() ? "" : " ") + t.surface;
    CHECK(joined == d.normalized_text);
    for (char ch : d.normalized_text) CHECK_FALSE(std::isupper(static_cast<unsigned char>(ch)));
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      const auto& t = d.tokens[i];
      CHECK(t.start < t.end);
      CHECK(d.normalized_text.substr(t.start, t.end - t.start) == t.surface);
      if (i) CHECK(d.tokens[i - 1].end < t.start);
      // Offset map soundness.
      if (!t.synthetic()) {
        const std::string orig = d.original_text.substr(t.orig_start, t.orig_end - t.orig_start);
        CHECK(nz::normalize("y", orig).normalized_text.find(t.surface) != std::string::npos);
      }
    }
    // Idempotence.
    CHECK(nz::normalize("x", d.normalized_text).normalized_text == d.normalized_text);
  }
}

TEST_CASE("segment_hashtag examples") {
  const auto t = small_table();
  CHECK(segment_hashtag("vitaminc", t) == std::vector<std::string>{"vitamin", "c"});
  CHECK(segment_hashtag("melatonin", t) == std::vector<std::string>{"melatonin"});
  CHECK(segment_hashtag("xqzt", t) == std::vector<std::string>{"xqzt"});
  CHECK(segment_hashtag("ILoveVitaminC", t) ==
        std::vector<std::string>{"I", "Love", "Vitamin", "C"});
}

TEST_CASE("segment_hashtag is optimal over every split") {
  const auto t = small_table();
  const std::vector<std::string> pieces = {"vitamin", "c", "fish", "oil", "sleep", "a", "love", "zq"};
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::string body;
    while (body.size() < 4 || (body.size() < 12 && rng.bernoulli(0.6))) {
      const auto& p = pieces[rng.below(pieces.size())];
      if (body.size() + p.size() > 12) break;
      body += p;
    }
    if (body.empty()) continue;
    const auto got = segment_hashtag(body, t);
    std::string joined;
    for (const auto& w : got) joined += w;
    CHECK(joined == body);
    const double best = segmentation_score(got, t);
    for (const auto& s : all_splits(body)) CHECK(segmentation_score(s, t) <= best + 1e-12);
  }
}

TEST_CASE("unigram floor penalises length") {
  const auto t = small_table();
  CHECK(t.log_prob("vitamin") > t.log_prob("zzzzzzz"));
  CHECK(t.log_prob("zz") > t.log_prob("zzz"));
  CHECK(t.log_prob("zz") == doctest::Approx(-std::log(t.total() * 100.0)));
}

TEST_CASE("tokenize splits edge punctuation and keeps interior marks") {
  auto s = [](const std::string& x) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(x)) out.push_back(t.surface);
    return out;
  };
  CHECK(s("feel queasy.") == std::vector<std::string>{"feel", "queasy", "."});
  CHECK(s("kava kava") == std::vector<std::string>{"kava", "kava"});
  CHECK(s("high-dose") == std::vector<std::string>{"high-dose"});
  CHECK(s("(zinc)") == std::vector<std::string>{"(", "zinc", ")"});
}

TEST_CASE("part-of-speech tagging") {
  CHECK(fallback_pos("the") == "DET");
  CHECK(fallback_pos("running") == "VERB");
  CHECK(fallback_pos(".") == "PUNCT");
  CHECK(fallback_pos("42") == "NUM");
  auto d = nz::normalize("d1", "the zinc is working");
  pos_tag(d);
  for (const auto& t : d.tokens) {
    bool known = false;
    for (const char* tag : kPosTags) known = known || t.pos == tag;
    CHECK(known);
  }

  auto ext = PosSource::from_tsv("d1\t0\tDET\nd1\t1\tPROPN\nd1\t2\tAUX\nd1\t3\tVERB\n");
  pos_tag(d, ext);
  CHECK(surfaces(d) == std::vector<std::string>{"the", "zinc", "is", "working"});
  CHECK(d.tokens[1].pos == "PROPN");  // copied verbatim

  auto bad = PosSource::from_tsv("d1\t9\tNOUN\n");
  try {
    bad.validate({{"d1", 4}});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("d1") != std::string::npos);
  }
  auto unknown = PosSource::from_tsv("zz\t0\tNOUN\n");
  CHECK_THROWS_AS(unknown.validate({{"d1", 4}}), ParseError);
}

TEST_CASE("contraction table") {
  const auto& c = ContractionTable::builtin();
  CHECK(c.size() >= 50);
  REQUIRE(c.find("doesn't"));
  CHECK(*c.find("doesn't") == "does not");
  REQUIRE(c.find("won't"));
  CHECK(*c.find("won't") == "will not");
  CHECK(c.find("it's") == nullptr);
  auto custom = parse_contractions("gonna\tgoing to\n");
  CHECK(nz::normalize("d", "im gonna try", UnigramTable::builtin(), custom).normalized_text ==
        "im going to try");
}
