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

#include "dsae/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "dsae/error.hpp"
#include "dsae/normalize.hpp"
#include "dsae/rng.hpp"

namespace dsae::synthetic {

namespace {

struct Surface {
  const char* text;
  const char* canonical;  // nullptr: canonical is the text itself
};

const std::vector<Surface> kSupplements = {
    {"vitamin c", nullptr},     {"vit c", "vitamin c"},      {"vitamin d", nullptr},
    {"vitamin d3", "vitamin d"}, {"vitamin b12", nullptr},    {"b12", "vitamin b12"},
    {"vitamin b", nullptr},     {"vitamin e", nullptr},      {"vitamin a", nullptr},
    {"fish oil", nullptr},      {"cod liver oil", nullptr},  {"folic acid", nullptr},
    {"melatonin", nullptr},     {"niacin", nullptr},         {"biotin", nullptr},
    {"grape seed extract", nullptr}, {"zinc", nullptr},      {"magnesium", nullptr},
    {"iron", nullptr},          {"turmeric", nullptr},       {"ginkgo biloba", nullptr},
    {"st johns wort", nullptr}, {"green tea extract", nullptr}, {"echinacea", nullptr},
    {"probiotics", nullptr},    {"calcium", nullptr},        {"ashwagandha", nullptr},
    {"elderberry", nullptr},    {"collagen", nullptr},       {"creatine", nullptr},
    {"garcinia cambogia", nullptr}, {"valerian root", nullptr}, {"kava", nullptr},
    {"potassium", nullptr},     {"glucosamine", nullptr},    {"coq10", nullptr},
};

const std::vector<const char*> kSymptoms = {
    "sick", "nausea", "diarrhea", "kidney stones", "headache", "headaches",
    "insomnia", "flush", "acne", "weird dreams", "nightmares", "fatigue",
    "cramps", "anxiety", "hair loss", "upset stomach", "heartburn", "dizziness",
    "rash", "colds", "flu", "joint pain", "stress", "bloating", "burping",
    "muscle cramps", "weight gain", "brain fog", "palpitations", "sore throat",
    "itching", "depression", "lung cancer", "prostate cancer", "autism", "falls",
    "migraines", "constipation", "hot flashes", "tired", "trouble sleeping",
    "shortness of breath", "ringing in my ears", "pins and needles", "loss of appetite",
    "sick to my stomach", "pain in my lower back", "out of breath", "tingling in my hands",
};

const std::vector<const char*> kOrgans = {
    "liver", "kidneys", "skin", "heart", "stomach", "hair", "bones", "brain",
    "eyes", "immune system", "gut", "joints", "nails", "teeth", "lungs", "blood",
    "ears", "hands", "lower back",
};

// Food and drink words: distributionally close to supplements, never entities.
const std::vector<const char*> kFoods = {
    "coffee", "tea", "water", "pizza", "wine", "oranges", "kale", "smoothie",
    "oatmeal", "chocolate", "soda", "eggs",
};

const std::vector<const char*> kOpeners = {
    "honestly", "lol", "ok so", "update", "psa", "ugh", "so", "fun fact",
    "real talk", "today", "",  "", "", "", "", "",
};

const std::vector<const char*> kClosers = {
    "lol", "smh", "again", "today", "this week", "for real", "send help",
    "i swear", "no joke", "", "", "", "", "", "", "",
};

// {S} supplement, {Y} symptom, {O} organ.
const std::vector<const char*> kIndication = {
    "taking {S} for my {Y}",
    "{S} helps with my {Y}",
    "{S} is great for {Y}",
    "{S} really cured my {Y}",
    "need more {S} to fight this {Y}",
    "started {S} to prevent {Y}",
    "my doctor said {S} would treat my {Y}",
    "{S} got rid of my {Y}",
    "{S} keeps my {O} healthy",
    "{S} is good for the {O}",
    "{S} supports your {O}",
    "take {S} every day for stronger {O}",
    "thank god for {S} during {Y} season",
    "{S} before bed stops my {Y}",
    "using {S} to ease {Y}",
    "{S} improves {O} function",
};

const std::vector<const char*> kAdverse = {
    "{S} gave me {Y}",
    "too much {S} can cause {Y}",
    "{S} causes {Y} in some people",
    "got {Y} from the {S}",
    "{S} is toxic to the {O}",
    "after taking {S} i had {Y}",
    "the {S} made my {Y} worse",
    "{S} side effects include {Y}",
    "high doses of {S} damage your {O}",
    "stopped {S} because of the {Y}",
};

const std::vector<const char*> kNoRelation = {
    "bought {S} today and my {Y} is still here",
    "my {Y} is back and i ran out of {S}",
    "forgot my {S} . also {Y} again",
    "reading about {S} while my {O} hurts",
    "{S} on sale at target and {Y} at work",
    "mom asked about {S} and her {O}",
};

// Clauses with an event mention but no supplement.
const std::vector<const char*> kEventOnly = {
    "my {Y} is acting up", "this {Y} will not quit", "{Y} all day",
    "my {O} feels weird", "pray for my {O}", "so much {Y} lately",
};

// Clauses without entities.
const std::vector<const char*> kFiller = {
    "drinking {F} now", "had {F} for lunch", "{F} is life", "out of {F} again",
    "going to bed early", "work was long", "need a nap",
};

// Entity words in a non-entity sense.
const std::vector<const char*> kAmbiguous = {
    "need to iron my shirt", "tired of this weather", "my heart goes out to them",
    "the stress test is tomorrow", "he falls asleep in class", "cold brew hits different",
    "do not flush wipes", "skin in the game", "zinc roof is loud", "blood moon tonight",
    "heart eyes at this", "rash decisions all week", "sick beat bro", "i iron on sundays",
    "no stress just vibes", "gut feeling about this",
};

const std::vector<const char*> kDeficiencyFrames = {"low {S} levels", "{S} deficiency"};

enum Role { kSupp, kSymp, kOrg, kIndCue, kAeCue, kNoneCue, kFood, kOther, kNumRoles };

struct Builder {
  std::vector<std::string> tokens;
  std::vector<annotation::EntitySpan> entities;  // token ranges only
  std::vector<std::tuple<std::size_t, std::size_t, RelationLabel>> relations;
  std::set<std::size_t> entity_token;

  std::size_t add_words(const std::string& phrase) {
    std::size_t start = tokens.size();
    std::size_t i = 0;
    while (i < phrase.size()) {
      std::size_t j = phrase.find(' ', i);
      if (j == std::string::npos) j = phrase.size();
      if (j > i) tokens.push_back(phrase.substr(i, j - i));
      i = j + 1;
    }
    return start;
  }

  std::size_t add_entity(const std::string& phrase, EntityType type, bool deficiency) {
    annotation::EntitySpan e;
    e.type = type;
    e.token_start = add_words(phrase);
    for (std::size_t i = e.token_start; i < tokens.size(); ++i) entity_token.insert(i);
    e.token_end = tokens.size();
    e.deficiency = deficiency;
    entities.push_back(e);
    return entities.size() - 1;
  }
};

struct Slots {
  std::size_t supp = SIZE_MAX;
  std::size_t event = SIZE_MAX;
};

class Generator {
 public:
  explicit Generator(const SynthConfig& c) : cfg_(c), rng_(c.seed) {}

  Slots clause(Builder& b, const std::string& pattern) {
    Slots s;
    std::size_t i = 0;
    std::string literal;
    auto flush = [&] {
      b.add_words(literal);
      literal.clear();
    };
    while (i < pattern.size()) {
      if (pattern[i] == '{') {
        flush();
        const char slot = pattern[i + 1];
        i += 3;
        if (slot == 'S') {
          const auto& sp = rng_.pick(kSupplements);
          if (rng_.bernoulli(cfg_.deficiency_rate)) {
            const std::string frame = rng_.pick(kDeficiencyFrames);
            const auto at = frame.find("{S}");
            b.add_words(frame.substr(0, at));
            s.supp = b.add_entity(sp.text, EntityType::Supplement, true);
            b.add_words(frame.substr(at + 3));
          } else {
            s.supp = b.add_entity(sp.text, EntityType::Supplement, false);
          }
        } else if (slot == 'Y') {
          s.event = b.add_entity(rng_.pick(kSymptoms), EntityType::Symptom, false);
        } else if (slot == 'O') {
          s.event = b.add_entity(rng_.pick(kOrgans), EntityType::BodyOrgan, false);
        } else if (slot == 'F') {
          b.add_words(rng_.pick(kFoods));
        }
      } else {
        literal += pattern[i++];
      }
    }
    flush();
    return s;
  }

  void relation_clause(Builder& b) {
    const bool ind = rng_.bernoulli(cfg_.indication_share);
    const Slots s = clause(b, ind ? rng_.pick(kIndication) : rng_.pick(kAdverse));
    b.relations.emplace_back(s.supp, s.event,
                             ind ? RelationLabel::Indication : RelationLabel::AdverseEvent);
  }

  Builder document() {
    Builder b;
    b.add_words(rng_.pick(kOpeners));
    if (rng_.bernoulli(cfg_.no_relation_doc)) {
      clause(b, rng_.pick(kNoRelation));
    } else {
      relation_clause(b);
      if (rng_.bernoulli(cfg_.two_relations)) {
        b.add_words(rng_.bernoulli(0.5) ? "but" : ".");
        relation_clause(b);
      }
    }
    if (rng_.bernoulli(cfg_.second_clause)) {
      b.add_words(rng_.bernoulli(0.5) ? "and" : ".");
      clause(b, rng_.bernoulli(0.6) ? rng_.pick(kEventOnly) : rng_.pick(kFiller));
    }
    if (rng_.bernoulli(cfg_.ambiguous_clause)) {
      b.add_words(rng_.bernoulli(0.5) ? "also" : ".");
      b.add_words(rng_.pick(kAmbiguous));
    }
    b.add_words(rng_.pick(kClosers));
    for (std::size_t i : b.entity_token)
      if (b.tokens[i].size() > 3 && rng_.bernoulli(cfg_.typo_rate)) typo(b.tokens[i]);
    return b;
  }

  // Drops, doubles or swaps one interior letter.
  void typo(std::string& w) {
    const std::size_t i = 1 + rng_.below(w.size() - 2);
    switch (rng_.below(3)) {
      case 0: w.erase(i, 1); break;
      case 1: w.insert(i, 1, w[i]); break;
      default: std::swap(w[i], w[i + 1]); break;
    }
  }

  Rng& rng() { return rng_; }

 private:
  const SynthConfig& cfg_;
  Rng rng_;
};

void assign_roles(std::map<std::string, Role>& roles, const std::string& phrase, Role r) {
  std::size_t i = 0;
  while (i < phrase.size()) {
    std::size_t j = phrase.find(' ', i);
    if (j == std::string::npos) j = phrase.size();
    if (j > i) roles.emplace(phrase.substr(i, j - i), r);
    i = j + 1;
  }
}

std::map<std::string, Role> template_words(const std::vector<const char*>& templates,
                                           Role r) {
  std::map<std::string, Role> words;
  for (const char* t : templates) {
    std::string s(t);
    for (const char* slot : {"{S}", "{Y}", "{O}", "{F}"})
      for (auto p = s.find(slot); p != std::string::npos; p = s.find(slot)) s.replace(p, 3, " ");
    assign_roles(words, s, r);
  }
  return words;
}

// Cue words belong to the one template family that uses them; words shared
// by several families stay generic.
void cue_roles(std::map<std::string, Role>& roles) {
  const std::map<std::string, Role> fam[] = {template_words(kIndication, kIndCue),
                                             template_words(kAdverse, kAeCue),
                                             template_words(kNoRelation, kNoneCue)};
  for (const auto& f : fam)
    for (const auto& [w, r] : f) {
      int uses = 0;
      for (const auto& g : fam) uses += g.count(w) ? 1 : 0;
      roles.emplace(w, uses == 1 ? r : kOther);
    }
}

}  // namespace

SynthCorpus generate(const SynthConfig& config) {
  if (config.embedding_dim == 0) throw InvalidArgument("embedding_dim must be positive");
  SynthCorpus out;
  Generator gen(config);

  for (std::size_t n = 0; n < config.n_docs; ++n) {
    Builder b = gen.document();
    std::string text;
    std::vector<std::size_t> starts;
    for (const auto& t : b.tokens) {
      if (!text.empty()) text += ' ';
      starts.push_back(text.size());
      text += t;
    }
    char id[32];
    std::snprintf(id, sizeof id, "syn-%05zu", n);
    corpus::Tweet tw{id, text, "en", std::nullopt};
    annotation::AnnotatedDoc doc;
    doc.doc = normalize::normalize(id, text);
    normalize::pos_tag(doc.doc);
    if (doc.doc.tokens.size() != b.tokens.size())
      throw Error("synthetic text changed under normalization: " + text);
    for (std::size_t i = 0; i < b.entities.size(); ++i) {
      auto e = b.entities[i];
      e.id = "T" + std::to_string(i + 1);
      e.char_start = doc.doc.tokens[e.token_start].start;
      e.char_end = doc.doc.tokens[e.token_end - 1].end;
      doc.entities.push_back(e);
    }
    for (const auto& [h, t, label] : b.relations)
      doc.relations.push_back({doc.doc.doc_id, doc.entities[h], doc.entities[t], label});
    out.tweets.push_back(std::move(tw));
    out.docs.push_back(std::move(doc));
  }

  // Word vectors: role centroid plus per-word Gaussian noise.
  std::map<std::string, Role> roles;
  for (const auto& s : kSupplements) assign_roles(roles, s.text, kSupp);
  for (const char* s : kSymptoms) assign_roles(roles, s, kSymp);
  for (const char* s : kOrgans) assign_roles(roles, s, kOrg);
  for (const char* s : kFoods) assign_roles(roles, s, kFood);
  cue_roles(roles);
  for (const char* t : kAmbiguous) assign_roles(roles, t, kOther);
  for (const char* t : kEventOnly) assign_roles(roles, t, kOther);
  for (const char* t : kFiller) assign_roles(roles, t, kOther);
  for (const char* t : kOpeners) assign_roles(roles, t, kOther);
  for (const char* t : kClosers) assign_roles(roles, t, kOther);
  for (const char* t : kDeficiencyFrames) assign_roles(roles, t, kOther);
  for (const char* t : {"and", "also", "but", "."}) roles.emplace(t, kOther);
  for (const char* slot : {"{S}", "{Y}", "{O}", "{F}"}) roles.erase(slot);

  Rng& rng = gen.rng();
  const std::size_t d = config.embedding_dim;
  std::vector<std::vector<double>> centroid(kNumRoles, std::vector<double>(d));
  for (auto& c : centroid) {
    double norm = 0.0;
    for (double& v : c) {
      v = rng.normal();
      norm += v * v;
    }
    for (double& v : c) v /= std::sqrt(norm);
  }
  // Foods sit between supplements and generic words.
  for (std::size_t j = 0; j < d; ++j)
    centroid[kFood][j] = 0.6 * centroid[kSupp][j] + 0.8 * centroid[kFood][j];
  out.embeddings = embeddings::EmbeddingTable(d);
  const double sigma = config.embedding_noise / std::sqrt(static_cast<double>(d));
  std::vector<double> v(d);
  for (const auto& [word, role] : roles) {
    for (std::size_t j = 0; j < d; ++j) v[j] = centroid[role][j] + sigma * rng.normal();
    out.embeddings.add(word, v);
  }

  // Lexicons cover a seeded subset of the entity inventory.
  for (const auto& s : kSupplements)
    if (rng.bernoulli(config.lexicon_coverage))
      out.ds_lexicon.add(s.text, s.canonical ? s.canonical : s.text, EntityType::Supplement);
  for (const char* s : kSymptoms)
    if (rng.bernoulli(config.lexicon_coverage)) out.event_lexicon.add(s, s, EntityType::Symptom);
  for (const char* s : kOrgans)
    if (rng.bernoulli(config.lexicon_coverage)) out.event_lexicon.add(s, s, EntityType::BodyOrgan);
  return out;
}

corpus::Lexicon combined_lexicon(const SynthCorpus& corpus) {
  corpus::Lexicon lex = corpus.ds_lexicon;
  lex.merge(corpus.event_lexicon);
  return lex;
}

}  // namespace dsae::synthetic
