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

#ifndef DSAE_DSAE_H_
#define DSAE_DSAE_H_

/* C interface to the dsae library.
 *
 * Every fallible call returns a dsae_status. On failure a description is
 * available from dsae_last_error() until the next call on the same thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with dsae_string_free(). Handles are released with their matching
 * *_free function; passing NULL to any *_free is a no-op. */

#include <stddef.h>

#if defined(_WIN32)
#define DSAE_API __declspec(dllexport)
#else
#define DSAE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsae_status {
  DSAE_OK = 0,
  DSAE_ERR_IO = 1,
  DSAE_ERR_PARSE = 2,
  DSAE_ERR_INVALID_ARGUMENT = 3,
  DSAE_ERR_CONFIG = 4,
  DSAE_ERR_NUMERIC = 5,
  DSAE_ERR_INTERNAL = 6
} dsae_status;

typedef struct dsae_lexicon dsae_lexicon;
typedef struct dsae_embeddings dsae_embeddings;
typedef struct dsae_ner_model dsae_ner_model;
typedef struct dsae_re_model dsae_re_model;

DSAE_API const char* dsae_version(void);
DSAE_API const char* dsae_status_string(dsae_status status);
DSAE_API const char* dsae_last_error(void);
DSAE_API void dsae_string_free(char* s);

/* ---- Commands ---------------------------------------------------------- */

/* Full default configuration as a JSON object. */
DSAE_API dsae_status dsae_default_config(char** json_out);

/* JSON array of command names accepted by dsae_run. */
DSAE_API dsae_status dsae_command_names(char** json_out);

/* Runs `command`. `config_json` is a (possibly partial) configuration laid
 * over the defaults; `overrides_json` is laid over the result. Either may be
 * NULL. Unknown keys and invalid values yield DSAE_ERR_CONFIG with one line
 * per offending field. On success `summary_out` (optional) receives a JSON
 * object describing the run. */
DSAE_API dsae_status dsae_run(const char* command, const char* config_json,
                              const char* overrides_json, char** summary_out);

/* ---- Text processing --------------------------------------------------- */

/* category: "Supplement", "Symptom" or "BodyOrgan". */
DSAE_API dsae_status dsae_lexicon_load(const char* path, const char* category,
                                       dsae_lexicon** out);
/* Adds every entry of `other` to `lexicon`. */
DSAE_API dsae_status dsae_lexicon_merge(dsae_lexicon* lexicon,
                                        const dsae_lexicon* other);
DSAE_API size_t dsae_lexicon_size(const dsae_lexicon* lexicon);
/* JSON array of hits {term, canonical, category, start, end}. */
DSAE_API dsae_status dsae_lexicon_match(const dsae_lexicon* lexicon,
                                        const char* text, char** json_out);
DSAE_API void dsae_lexicon_free(dsae_lexicon* lexicon);

/* JSON object {doc_id, original_text, normalized_text, tokens:[...]}. */
DSAE_API dsae_status dsae_normalize(const char* doc_id, const char* text,
                                    char** json_out);

DSAE_API dsae_status dsae_embeddings_load(const char* path, dsae_embeddings** out);
DSAE_API size_t dsae_embeddings_dim(const dsae_embeddings* embeddings);
DSAE_API void dsae_embeddings_free(dsae_embeddings* embeddings);

/* ---- Models ------------------------------------------------------------ */

DSAE_API dsae_status dsae_ner_model_load(const char* path, dsae_ner_model** out);
/* "svm", "crf" or "lstm-crf". Valid for the handle's lifetime. */
DSAE_API const char* dsae_ner_model_type(const dsae_ner_model* model);
/* Normalizes `text` and tags it. `embeddings` and `lexicon` may be NULL when
 * the model was trained without them. Output is a pipeline JSON object with
 * an empty relation list. */
DSAE_API dsae_status dsae_ner_predict(const dsae_ner_model* model,
                                      const dsae_embeddings* embeddings,
                                      const dsae_lexicon* lexicon,
                                      const char* doc_id, const char* text,
                                      char** json_out);
DSAE_API void dsae_ner_model_free(dsae_ner_model* model);

DSAE_API dsae_status dsae_re_model_load(const char* path, dsae_re_model** out);
DSAE_API void dsae_re_model_free(dsae_re_model* model);

/* Entity tagging followed by relation classification on one text. Output is
 * one pipeline JSON object {doc_id, text, entities, relations, probabilities}. */
DSAE_API dsae_status dsae_pipeline_predict(const dsae_ner_model* ner,
                                           const dsae_re_model* re,
                                           const dsae_embeddings* embeddings,
                                           const dsae_lexicon* lexicon,
                                           const char* doc_id, const char* text,
                                           char** json_out);

/* ---- Scoring ----------------------------------------------------------- */

/* Micro precision, recall and F1 from entity match counts. */
DSAE_API dsae_status dsae_entity_metrics(long cor, long inc, long par, long mis,
                                         long spu, double* precision,
                                         double* recall, double* f1);
DSAE_API dsae_status dsae_cohen_kappa(const int* a, const int* b, size_t n,
                                      double* kappa);
/* Two-sided paired t-test. `significant` is set when p < 0.001. */
DSAE_API dsae_status dsae_paired_t_test(const double* a, const double* b,
                                        size_t n, double* t, double* p,
                                        int* significant);

#ifdef __cplusplus
}
#endif

#endif /* DSAE_DSAE_H_ */
