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

/* Exercises the shared library through its C header only. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "dsae/dsae.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

#define EXPECT_OK(call)                                                     \
  do {                                                                      \
    dsae_status s_ = (call);                                                \
    if (s_ != DSAE_OK) {                                                    \
      fprintf(stderr, "%s:%d: %s -> %s: %s\n", __FILE__, __LINE__, #call,   \
              dsae_status_string(s_), dsae_last_error());                   \
      ++failures;                                                           \
    }                                                                       \
  } while (0)

static void scoring(void) {
  double p = 0, r = 0, f = 0, t = 0, pv = 0, kappa = 0;
  int sig = -1;
  const double a[] = {2, 4, 6, 8};
  const double b[] = {1, 2, 3, 4};
  int x[50], y[50];
  int i;

  EXPECT_OK(dsae_entity_metrics(1, 1, 1, 1, 1, &p, &r, &f));
  EXPECT(p == 0.375 && r == 0.375 && f == 0.375);

  EXPECT_OK(dsae_paired_t_test(a, b, 4, &t, &pv, &sig));
  EXPECT(t > 3.872 && t < 3.874);
  EXPECT(pv > 0.030 && pv < 0.031);
  EXPECT(sig == 0);

  for (i = 0; i < 50; ++i) {
    x[i] = i < 25 ? 0 : 1;
    y[i] = i < 20 ? 0 : (i < 25 ? 1 : (i < 35 ? 0 : 1));
  }
  EXPECT_OK(dsae_cohen_kappa(x, y, 50, &kappa));
  EXPECT(kappa > 0.4 - 1e-12 && kappa < 0.4 + 1e-12);

  EXPECT(dsae_cohen_kappa(x, y, 0, &kappa) == DSAE_ERR_INVALID_ARGUMENT);
  EXPECT(dsae_entity_metrics(1, 0, 0, 0, 0, NULL, &r, &f) == DSAE_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(dsae_last_error()) > 0);
}

static void text(void) {
  char* json = NULL;
  EXPECT_OK(dsae_normalize("d1", "@u check https://x.co #FishOil", &json));
  EXPECT(json && strstr(json, "\"normalized_text\":\"check fish oil\""));
  dsae_string_free(json);
}

static void configuration(void) {
  char* json = NULL;
  EXPECT_OK(dsae_default_config(&json));
  EXPECT(json && strstr(json, "\"ner\""));
  dsae_string_free(json);
  EXPECT_OK(dsae_command_names(&json));
  EXPECT(json && strstr(json, "\"pipeline\""));
  dsae_string_free(json);

  EXPECT(dsae_run("synth", "{\"colour\":1}", NULL, NULL) == DSAE_ERR_CONFIG);
  EXPECT(strstr(dsae_last_error(), "/colour") != NULL);
  EXPECT(dsae_run("synth", "{not json", NULL, NULL) == DSAE_ERR_CONFIG);
  EXPECT(dsae_run("nope", NULL, NULL, NULL) == DSAE_ERR_CONFIG);
  EXPECT(dsae_run(NULL, NULL, NULL, NULL) == DSAE_ERR_INVALID_ARGUMENT);
}

static void end_to_end(const char* work) {
  char cfg[4096], path[1024];
  char* summary = NULL;
  char* json = NULL;
  dsae_lexicon *lex = NULL, *sym = NULL, *org = NULL;
  dsae_embeddings* emb = NULL;
  dsae_ner_model* ner = NULL;
  dsae_re_model* re = NULL;

  snprintf(cfg, sizeof cfg,
           "{\"paths\":{\"out\":\"%s/data\"},"
           "\"synthetic\":{\"n_docs\":80,\"embedding_dim\":8}}",
           work);
  EXPECT_OK(dsae_run("synth", cfg, NULL, &summary));
  EXPECT(summary && strstr(summary, "artifact_count"));
  dsae_string_free(summary);

  snprintf(cfg, sizeof cfg,
           "{\"paths\":{\"out\":\"%s/models\",\"corpus\":\"%s/data/tweets.jsonl\","
           "\"annotations\":\"%s/data/annotations\",\"embeddings\":\"%s/data/embeddings.txt\","
           "\"ds_lexicon\":\"%s/data/ds_lexicon.tsv\","
           "\"symptom_lexicon\":\"%s/data/symptom_lexicon.tsv\","
           "\"organ_lexicon\":\"%s/data/organ_lexicon.tsv\"},"
           "\"ner\":{\"crf\":{\"max_iterations\":30}},"
           "\"re\":{\"cnn\":{\"epochs\":2,\"filters\":16}}}",
           work, work, work, work, work, work, work);
  EXPECT_OK(dsae_run("train-ner", cfg, NULL, NULL));
  EXPECT_OK(dsae_run("train-re", cfg, NULL, NULL));
  EXPECT(dsae_run("train-ner", cfg, "{\"ner\":{\"model\":\"hmm\"}}", NULL) == DSAE_ERR_CONFIG);

  snprintf(path, sizeof path, "%s/data/ds_lexicon.tsv", work);
  EXPECT_OK(dsae_lexicon_load(path, "Supplement", &lex));
  snprintf(path, sizeof path, "%s/data/symptom_lexicon.tsv", work);
  EXPECT_OK(dsae_lexicon_load(path, "Symptom", &sym));
  snprintf(path, sizeof path, "%s/data/organ_lexicon.tsv", work);
  EXPECT_OK(dsae_lexicon_load(path, "BodyOrgan", &org));
  EXPECT(dsae_lexicon_load(path, "Mood", &org) == DSAE_ERR_INVALID_ARGUMENT);
  if (lex && sym && org) {
    const size_t before = dsae_lexicon_size(lex);
    EXPECT_OK(dsae_lexicon_merge(lex, sym));
    EXPECT_OK(dsae_lexicon_merge(lex, org));
    EXPECT(dsae_lexicon_size(lex) > before);
  }

  snprintf(path, sizeof path, "%s/data/embeddings.txt", work);
  EXPECT_OK(dsae_embeddings_load(path, &emb));
  EXPECT(emb && dsae_embeddings_dim(emb) == 8);

  snprintf(path, sizeof path, "%s/models/ner_model.json", work);
  EXPECT_OK(dsae_ner_model_load(path, &ner));
  EXPECT(ner && strcmp(dsae_ner_model_type(ner), "crf") == 0);
  snprintf(path, sizeof path, "%s/models/re_model.json", work);
  EXPECT_OK(dsae_re_model_load(path, &re));
  EXPECT(dsae_ner_model_load("/nonexistent/model.json", &ner) == DSAE_ERR_IO);

  if (ner && re && emb && lex) {
    EXPECT_OK(dsae_ner_predict(ner, emb, lex, "q1", "fish oil gave me a headache", &json));
    EXPECT(json && strstr(json, "\"entities\""));
    dsae_string_free(json);
    json = NULL;
    EXPECT_OK(dsae_pipeline_predict(ner, re, emb, lex, "q2", "fish oil gave me a headache",
                                    &json));
    EXPECT(json && strstr(json, "\"relations\"") && strstr(json, "\"doc_id\":\"q2\""));
    dsae_string_free(json);
    EXPECT(dsae_pipeline_predict(ner, re, NULL, lex, "q3", "x", &json) != DSAE_OK);
  }

  dsae_re_model_free(re);
  dsae_ner_model_free(ner);
  dsae_embeddings_free(emb);
  dsae_lexicon_free(org);
  dsae_lexicon_free(sym);
  dsae_lexicon_free(lex);
  dsae_lexicon_free(NULL);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: %s <work-dir>\n", argv[0]);
    return 2;
  }
  EXPECT(strlen(dsae_version()) > 0);
  EXPECT(strcmp(dsae_status_string(DSAE_ERR_CONFIG), dsae_status_string(DSAE_OK)) != 0);
  scoring();
  text();
  configuration();
  end_to_end(argv[1]);
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
