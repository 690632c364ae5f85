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

#include "dsae/dsae.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "dsae/commands.hpp"
#include "dsae/corpus.hpp"
#include "dsae/embeddings.hpp"
#include "dsae/error.hpp"
#include "dsae/evaluate.hpp"
#include "dsae/io.hpp"
#include "dsae/ner.hpp"
#include "dsae/normalize.hpp"
#include "dsae/pipeline.hpp"
#include "dsae/relation.hpp"
#include "json.hpp"

using nlohmann::json;

struct dsae_lexicon {
  dsae::corpus::Lexicon lexicon;
};

struct dsae_embeddings {
  dsae::embeddings::EmbeddingTable table;
  std::unique_ptr<dsae::embeddings::StaticVectors> view;
};

struct dsae_ner_model {
  dsae::ner::NerModel model;
  std::string type;
};

struct dsae_re_model {
  dsae::relation::CnnModel model;
};

namespace {

thread_local std::string g_last_error;

dsae_status fail(dsae_status s, const std::string& what) {
  g_last_error = what;
  return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
dsae_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return DSAE_OK;
  } catch (const dsae::IoError& e) {
    return fail(DSAE_ERR_IO, e.what());
  } catch (const dsae::ParseError& e) {
    return fail(DSAE_ERR_PARSE, e.what());
  } catch (const dsae::InvalidArgument& e) {
    return fail(DSAE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const dsae::ConfigError& e) {
    return fail(DSAE_ERR_CONFIG, e.what());
  } catch (const dsae::NumericError& e) {
    return fail(DSAE_ERR_NUMERIC, e.what());
  } catch (const json::exception& e) {
    return fail(DSAE_ERR_PARSE, e.what());
  } catch (const dsae::Error& e) {
    return fail(DSAE_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DSAE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DSAE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DSAE_ERR_INTERNAL, "unknown exception");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* name) {
  if (!p) throw dsae::InvalidArgument(std::string(name) + " must not be NULL");
}

dsae::ner::FeatureContext context(const dsae_embeddings* e, const dsae_lexicon* l) {
  dsae::ner::FeatureContext ctx;
  if (e) ctx.vectors = e->view.get();
  if (l) ctx.lexicon = &l->lexicon;
  return ctx;
}

dsae::normalize::NormalizedDoc prepare(const char* doc_id, const char* text) {
  auto doc = dsae::normalize::normalize(doc_id, text);
  dsae::normalize::pos_tag(doc);
  return doc;
}

json offset(std::size_t v) {
  return v == dsae::normalize::kSynthetic ? json(nullptr) : json(v);
}

}  // namespace

extern "C" {

const char* dsae_version(void) { return DSAE_VERSION; }

const char* dsae_status_string(dsae_status status) {
  switch (status) {
    case DSAE_OK: return "ok";
    case DSAE_ERR_IO: return "i/o error";
    case DSAE_ERR_PARSE: return "parse error";
    case DSAE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DSAE_ERR_CONFIG: return "configuration error";
    case DSAE_ERR_NUMERIC: return "numeric error";
    case DSAE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dsae_last_error(void) { return g_last_error.c_str(); }

void dsae_string_free(char* s) { std::free(s); }

dsae_status dsae_default_config(char** json_out) {
  return guarded([&] {
    need(json_out, "json_out");
    *json_out = dup(dsae::commands::default_config().dump(2));
  });
}

dsae_status dsae_command_names(char** json_out) {
  return guarded([&] {
    need(json_out, "json_out");
    *json_out = dup(json(dsae::commands::command_names()).dump());
  });
}

dsae_status dsae_run(const char* command, const char* config_json,
                     const char* overrides_json, char** summary_out) {
  return guarded([&] {
    need(command, "command");
    std::vector<std::string> unknown;
    json cfg = dsae::commands::default_config();
    auto layer = [&](const char* text, const char* what) {
      if (!text) return;
      const json patch = json::parse(text, nullptr, false);
      if (patch.is_discarded())
        throw dsae::ConfigError(std::string(what) + ": not valid JSON");
      cfg = dsae::commands::merge_config(cfg, patch, &unknown);
    };
    layer(config_json, "config");
    layer(overrides_json, "overrides");
    if (!unknown.empty()) {
      std::string msg = "invalid configuration:";
      for (const auto& u : unknown) msg += "\n  " + u + ": unknown key";
      throw dsae::ConfigError(msg);
    }
    auto result = dsae::commands::run(command, cfg);
    if (summary_out) {
      constexpr std::size_t kListed = 25;
      const auto& a = result.artifacts;
      result.summary["artifact_count"] = a.size();
      result.summary["artifacts"] =
          std::vector<std::string>(a.begin(), a.begin() + std::min(a.size(), kListed));
      *summary_out = dup(result.summary.dump(2));
    }
  });
}

dsae_status dsae_lexicon_load(const char* path, const char* category, dsae_lexicon** out) {
  return guarded([&] {
    need(path, "path");
    need(category, "category");
    need(out, "out");
    const auto type = dsae::parse_entity_type(category);
    if (!type) throw dsae::InvalidArgument(std::string("unknown category ") + category);
    auto h = std::make_unique<dsae_lexicon>();
    h->lexicon = dsae::corpus::load_lexicon(path, *type);
    *out = h.release();
  });
}

dsae_status dsae_lexicon_merge(dsae_lexicon* lexicon, const dsae_lexicon* other) {
  return guarded([&] {
    need(lexicon, "lexicon");
    need(other, "other");
    lexicon->lexicon.merge(other->lexicon);
  });
}

size_t dsae_lexicon_size(const dsae_lexicon* lexicon) {
  return lexicon ? lexicon->lexicon.size() : 0;
}

dsae_status dsae_lexicon_match(const dsae_lexicon* lexicon, const char* text, char** json_out) {
  return guarded([&] {
    need(lexicon, "lexicon");
    need(text, "text");
    need(json_out, "json_out");
    json hits = json::array();
    for (const auto& h : dsae::corpus::match_terms(text, lexicon->lexicon))
      hits.push_back({{"term", h.term},
                      {"canonical", h.canonical},
                      {"category", std::string(dsae::to_string(h.category))},
                      {"start", h.char_start},
                      {"end", h.char_end}});
    *json_out = dup(hits.dump());
  });
}

void dsae_lexicon_free(dsae_lexicon* lexicon) { delete lexicon; }

dsae_status dsae_normalize(const char* doc_id, const char* text, char** json_out) {
  return guarded([&] {
    need(doc_id, "doc_id");
    need(text, "text");
    need(json_out, "json_out");
    const auto doc = prepare(doc_id, text);
    json toks = json::array();
    for (const auto& t : doc.tokens)
      toks.push_back({{"surface", t.surface},
                      {"start", t.start},
                      {"end", t.end},
                      {"orig_start", offset(t.orig_start)},
                      {"orig_end", offset(t.orig_end)},
                      {"pos", t.pos}});
    json j{{"doc_id", doc.doc_id},
           {"original_text", doc.original_text},
           {"normalized_text", doc.normalized_text},
           {"tokens", std::move(toks)}};
    *json_out = dup(j.dump());
  });
}

dsae_status dsae_embeddings_load(const char* path, dsae_embeddings** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto h = std::make_unique<dsae_embeddings>();
    h->table = dsae::embeddings::load_static(path).table;
    h->view = std::make_unique<dsae::embeddings::StaticVectors>(h->table);
    *out = h.release();
  });
}

size_t dsae_embeddings_dim(const dsae_embeddings* embeddings) {
  return embeddings ? embeddings->table.dim() : 0;
}

void dsae_embeddings_free(dsae_embeddings* embeddings) { delete embeddings; }

dsae_status dsae_ner_model_load(const char* path, dsae_ner_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto h = std::make_unique<dsae_ner_model>();
    h->model = dsae::ner::ner_model_from_json(dsae::io::read_file(path));
    h->type = dsae::ner::model_type(h->model);
    *out = h.release();
  });
}

const char* dsae_ner_model_type(const dsae_ner_model* model) {
  return model ? model->type.c_str() : "";
}

dsae_status dsae_ner_predict(const dsae_ner_model* model, const dsae_embeddings* embeddings,
                             const dsae_lexicon* lexicon, const char* doc_id, const char* text,
                             char** json_out) {
  return guarded([&] {
    need(model, "model");
    need(doc_id, "doc_id");
    need(text, "text");
    need(json_out, "json_out");
    const auto ctx = context(embeddings, lexicon);
    dsae::ner::check_dims(model->model, ctx);
    const auto doc = prepare(doc_id, text);
    dsae::pipeline::PipelineOutput out;
    out.doc_id = doc.doc_id;
    out.text = doc.normalized_text;
    out.entities = dsae::ner::predict_entities(model->model, doc, ctx);
    *json_out = dup(dsae::pipeline::output_json(out));
  });
}

void dsae_ner_model_free(dsae_ner_model* model) { delete model; }

dsae_status dsae_re_model_load(const char* path, dsae_re_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto h = std::make_unique<dsae_re_model>();
    h->model = dsae::relation::cnn_model_from_json(dsae::io::read_file(path));
    *out = h.release();
  });
}

void dsae_re_model_free(dsae_re_model* model) { delete model; }

dsae_status dsae_pipeline_predict(const dsae_ner_model* ner, const dsae_re_model* re,
                                  const dsae_embeddings* embeddings, const dsae_lexicon* lexicon,
                                  const char* doc_id, const char* text, char** json_out) {
  return guarded([&] {
    need(ner, "ner");
    need(re, "re");
    need(embeddings, "embeddings");
    need(doc_id, "doc_id");
    need(text, "text");
    need(json_out, "json_out");
    const dsae::pipeline::ModelTagger tagger(ner->model, context(embeddings, lexicon));
    const dsae::pipeline::CnnClassifier clf(re->model, *embeddings->view);
    const auto doc = prepare(doc_id, text);
    *json_out = dup(dsae::pipeline::output_json(dsae::pipeline::run_pipeline(doc, tagger, clf)));
  });
}

dsae_status dsae_entity_metrics(long cor, long inc, long par, long mis, long spu,
                                double* precision, double* recall, double* f1) {
  return guarded([&] {
    need(precision, "precision");
    need(recall, "recall");
    need(f1, "f1");
    if (cor < 0 || inc < 0 || par < 0 || mis < 0 || spu < 0)
      throw dsae::InvalidArgument("counts must be non-negative");
    const auto m = dsae::evaluate::metrics(cor, inc, inc, par, mis, spu);
    *precision = m.precision;
    *recall = m.recall;
    *f1 = m.f1;
  });
}

dsae_status dsae_cohen_kappa(const int* a, const int* b, size_t n, double* kappa) {
  return guarded([&] {
    need(kappa, "kappa");
    if (n && (!a || !b)) throw dsae::InvalidArgument("label arrays must not be NULL");
    *kappa = dsae::evaluate::cohen_kappa({a, n}, {b, n});
  });
}

dsae_status dsae_paired_t_test(const double* a, const double* b, size_t n, double* t, double* p,
                               int* significant) {
  return guarded([&] {
    need(t, "t");
    need(p, "p");
    if (n && (!a || !b)) throw dsae::InvalidArgument("sample arrays must not be NULL");
    const auto r = dsae::evaluate::paired_t_test({a, n}, {b, n});
    *t = r.t;
    *p = r.p;
    if (significant) *significant = r.significant ? 1 : 0;
  });
}

}  // extern "C"
