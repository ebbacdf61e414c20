/*
 * Copyright 2026 The cuneilab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libcuneilab. Objects are opaque handles released with
 * their *_free function; strings returned through char** are released
 * with cl_string_free. Every call that can fail returns a cl_status and
 * leaves a per-thread message in cl_last_error(). */

#ifndef CUNEILAB_H_
#define CUNEILAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CUNEILAB_BUILDING_LIBRARY)
#define CL_API __attribute__((visibility("default")))
#else
#define CL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cl_status {
  CL_OK = 0,
  CL_INVALID_ARGUMENT = 1,
  CL_IO_FAILURE = 2,
  CL_UNBALANCED_BRACES = 3,
  CL_EMPTY_SURFACE = 4,
  CL_UNKNOWN_LABEL = 5,
  CL_MALFORMED_LINE = 6,
  CL_EMPTY_CORPUS = 7,
  CL_ZERO_SHARD_SIZE = 8,
  CL_DEGENERATE_SPLIT = 9,
  CL_BAD_MAGIC = 10,
  CL_UNSUPPORTED_VERSION = 11,
  CL_INDEX_OUT_OF_RANGE = 12,
  CL_UNKNOWN_RULE_KIND = 13,
  CL_DUPLICATE_ID = 14,
  CL_TAG_OUTSIDE_TAGSET = 15,
  CL_LABEL_LENGTH_MISMATCH = 16,
  CL_DIVERGENCE_DETECTED = 17,
  CL_ALIGNMENT_MISMATCH = 18,
  CL_LENGTH_MISMATCH = 19,
  CL_EMPTY_INPUT = 20,
  CL_SCORE_OUT_OF_RANGE = 21,
  CL_NO_OVERLAP = 22,
  CL_EMPTY_LEXICON = 23,
  CL_LINE_TOO_SHORT = 24,
  CL_DIMENSION_MISMATCH = 25,
  CL_MISSING_RESOURCE = 26,
  CL_TRANSLATOR_FAILED = 27,
  CL_LINE_COUNT_MISMATCH = 28,
  CL_TOO_MANY_TOKENS_FOR_EXACT = 29,
  CL_PHRASE_MISMATCH = 30,
  CL_PHRASE_TOO_LONG = 31,
  CL_NO_INPUTS = 32,
  CL_UNKNOWN_KEY = 33,
  CL_MANIFEST_MISMATCH = 34,
  CL_INTERNAL = 99
} cl_status;

typedef struct cl_corpus cl_corpus;
typedef struct cl_ruleset cl_ruleset;
typedef struct cl_tagger cl_tagger;
typedef struct cl_attribution cl_attribution;
typedef struct cl_embeddings cl_embeddings;
typedef struct cl_lexicon cl_lexicon;
typedef struct cl_entity_lexicon cl_entity_lexicon;

CL_API const char* cl_version(void);
CL_API const char* cl_status_name(cl_status status);
/* Message of the last failure on this thread, "" after success. */
CL_API const char* cl_last_error(void);
/* Input line of the last failure (shard index for translator errors). */
CL_API size_t cl_last_error_line(void);
CL_API void cl_string_free(char* s);

/* ---- corpora ---- */

typedef enum cl_format {
  CL_FORMAT_NATIVE = 0,   /* "#cuneilab-corpus v1" header file */
  CL_FORMAT_CONLL = 1,    /* TOKEN<TAB>LABEL, blank line between phrases */
  CL_FORMAT_TEXT = 2,     /* one phrase per line */
  CL_FORMAT_PARALLEL = 3  /* SOURCE<TAB>TARGET */
} cl_format;

typedef enum cl_corpus_kind {
  CL_CORPUS_MONOLINGUAL = 0,
  CL_CORPUS_TAGGED = 1,
  CL_CORPUS_PARALLEL = 2
} cl_corpus_kind;

/* `tagset` ("pos" or "ner") is only read for CL_FORMAT_CONLL. */
CL_API cl_status cl_corpus_read(const char* path, cl_format format,
                                const char* tagset, cl_corpus** out);
CL_API cl_status cl_corpus_read_parallel_files(const char* source_path,
                                               const char* target_path,
                                               cl_corpus** out);
CL_API cl_status cl_corpus_write(const cl_corpus* corpus, cl_format format,
                                 const char* path);
CL_API cl_status cl_corpus_format(const cl_corpus* corpus, cl_format format,
                                  char** out);
CL_API size_t cl_corpus_size(const cl_corpus* corpus);
CL_API cl_corpus_kind cl_corpus_get_kind(const cl_corpus* corpus);
/* Number of tokens over all (source) phrases. */
CL_API size_t cl_corpus_token_count(const cl_corpus* corpus);
/* Merges parallel segments into complete sentences. `unterminated` may be
 * NULL; it receives the number of trailing groups without a terminator. */
CL_API cl_status cl_corpus_build_comp(const cl_corpus* segments,
                                      cl_corpus** out,
                                      size_t* unterminated);
CL_API cl_status cl_corpus_split(const cl_corpus* corpus, double test_fraction,
                                 uint64_t seed, cl_corpus** train,
                                 cl_corpus** test);
CL_API cl_status cl_corpus_synthetic(size_t phrases, uint64_t seed, int ner,
                                     double lexical_noise, double label_noise,
                                     cl_corpus** out);
CL_API void cl_corpus_free(cl_corpus* corpus);

/* ---- rules ---- */

CL_API cl_status cl_rules_default(cl_ruleset** out);
CL_API cl_status cl_rules_load(const char* path, cl_ruleset** out);
CL_API cl_status cl_rules_save(const cl_ruleset* rules, const char* path);
CL_API size_t cl_rules_size(const cl_ruleset* rules);
CL_API cl_status cl_rules_lint(const cl_ruleset* rules, const cl_corpus* corpus,
                               char** report);
CL_API void cl_rules_free(cl_ruleset* rules);

/* ---- taggers ---- */

typedef struct cl_crf_options {
  double l2_sigma2;
  int max_iters;
  double grad_tol;
  int threads;
  int gradient_descent; /* 0: L-BFGS */
  int verbose;          /* progress lines on stderr */
} cl_crf_options;

CL_API void cl_crf_options_default(cl_crf_options* options);
CL_API cl_status cl_hmm_train(const cl_corpus* tagged, double smoothing_k,
                              cl_tagger** out);
/* `rules` may be NULL (no rule features). `templates` is a comma list of
 * template names or NULL for the default set. */
CL_API cl_status cl_crf_train(const cl_corpus* tagged, const cl_ruleset* rules,
                              const char* templates,
                              const cl_crf_options* options, cl_tagger** out);
CL_API cl_status cl_tagger_load(const char* path, cl_tagger** out);
CL_API cl_status cl_tagger_save(const cl_tagger* tagger, const char* path);
CL_API const char* cl_tagger_tagset(const cl_tagger* tagger);
/* "hmm" or "crf". */
CL_API const char* cl_tagger_kind(const cl_tagger* tagger);
CL_API cl_status cl_tagger_tag(const cl_tagger* tagger, const cl_corpus* in,
                               cl_corpus** out);
CL_API void cl_tagger_free(cl_tagger* tagger);

/* ---- metrics ---- */

typedef enum cl_averaging {
  CL_AVG_PER_CLASS = 0,
  CL_AVG_MICRO = 1,
  CL_AVG_WEIGHTED = 2
} cl_averaging;

typedef struct cl_prf {
  double precision;
  double recall;
  double f1;
  size_t scored;
  size_t errors;
} cl_prf;

CL_API cl_status cl_eval_prf1(const cl_corpus* gold, const cl_corpus* pred,
                              cl_averaging averaging, cl_prf* out);
/* Result block as written by `eval`, including the error rate. */
CL_API cl_status cl_eval_report(const cl_corpus* gold, const cl_corpus* pred,
                                const char* name, cl_averaging averaging,
                                char** out);
/* Per-class table for the three averagings. */
CL_API cl_status cl_eval_table(const cl_corpus* gold, const cl_corpus* pred,
                               char** out);
CL_API cl_status cl_error_rate_percent(size_t wrong, size_t scored, double* out);
CL_API cl_status cl_bleu(const char* const* hypotheses,
                         const char* const* references, size_t n, int max_n,
                         double* out);
CL_API cl_status cl_sentence_bleu(const char* hypothesis, const char* reference,
                                  int max_n, double* out);
CL_API cl_status cl_kappa(const char* const* a, const char* const* b, size_t n,
                          double* out);
CL_API cl_status cl_human_eval(const char* path, char** report);
/* Comparison table over eval result files. */
CL_API cl_status cl_report(const char* const* paths, size_t n, char** out);

/* ---- augmentation ---- */

enum {
  CL_TECH_EMBEDDING = 1u << 0,
  CL_TECH_LEXICON = 1u << 1,
  CL_TECH_CHARSWAP = 1u << 2,
  CL_TECH_NE = 1u << 3
};
enum {
  CL_CHAR_SUBSTITUTE = 1u << 0,
  CL_CHAR_DELETE = 1u << 1,
  CL_CHAR_INSERT = 1u << 2,
  CL_CHAR_SWAP = 1u << 3,
  CL_CHAR_ALL = 0xfu
};

typedef struct cl_augment_plan {
  unsigned techniques;
  size_t multiplier;
  uint64_t seed;
  double cosine_threshold;
  unsigned charswap_ops;
  size_t charswap_edits;
  size_t max_replacements;
} cl_augment_plan;

CL_API void cl_augment_plan_default(cl_augment_plan* plan);
CL_API cl_status cl_embeddings_load(const char* path, cl_embeddings** out);
CL_API void cl_embeddings_free(cl_embeddings* table);
CL_API cl_status cl_lexicon_load(const char* path, cl_lexicon** out);
CL_API void cl_lexicon_free(cl_lexicon* lexicon);
CL_API cl_status cl_entity_lexicon_load(const char* path,
                                        cl_entity_lexicon** out);
CL_API void cl_entity_lexicon_free(cl_entity_lexicon* lexicon);

/* Resources may be NULL when their technique is off. `report` may be NULL;
 * otherwise it receives "key value" size lines. */
CL_API cl_status cl_augment(const cl_corpus* lines, const cl_augment_plan* plan,
                            const cl_embeddings* embeddings,
                            const cl_lexicon* synonyms,
                            const cl_entity_lexicon* entities, cl_corpus** out,
                            char** report);
CL_API cl_status cl_ne_substitute(const cl_corpus* tagged,
                                  const cl_entity_lexicon* entities,
                                  size_t multiplier, uint64_t seed,
                                  cl_corpus** out);
CL_API cl_status cl_charswap(const char* line, unsigned ops, size_t edits,
                             uint64_t seed, char** out);

/* Runs argv (argv[0] looked up on PATH) once per shard. */
CL_API cl_status cl_ft_run(const cl_corpus* monolingual,
                           const char* const* argv, size_t argc,
                           size_t shard_size, int resume, const char* out_dir,
                           size_t* shards_run, size_t* shards_skipped,
                           size_t* pairs);

/* ---- attribution ---- */

typedef enum cl_attr_method {
  CL_ATTR_OCCLUSION = 0,
  CL_ATTR_LEAVE_ONE_OUT = 1,
  CL_ATTR_SHAPLEY_EXACT = 2,
  CL_ATTR_SHAPLEY_SAMPLED = 3
} cl_attr_method;

typedef enum cl_correctness {
  CL_CORRECT = 0,
  CL_WRONG = 1,
  CL_UNKNOWN = 2
} cl_correctness;

/* Explains the tagger's decision at `position` of the phrase `text`.
 * `label` NULL means the tagger's own prediction. `samples` and `seed`
 * apply to sampled Shapley only. */
CL_API cl_status cl_attribute(const cl_tagger* tagger, const char* phrase_id,
                              const char* text, size_t position,
                              const char* label, cl_attr_method method,
                              size_t samples, uint64_t seed, int sign_level,
                              cl_attribution** out);
CL_API cl_status cl_attribution_load(const char* path, cl_attribution** out);
CL_API cl_status cl_attribution_save(const cl_attribution* map,
                                     const char* path);
CL_API size_t cl_attribution_size(const cl_attribution* map);
CL_API cl_status cl_attribution_score(const cl_attribution* map, size_t index,
                                      double* out);
CL_API const char* cl_attribution_label(const cl_attribution* map);
CL_API cl_status cl_plausibility(const cl_attribution* map,
                                 const size_t* annotated, size_t n,
                                 double* out);
/* HTML page (html != 0) or ANSI text over `n` maps. */
CL_API cl_status cl_render(const cl_attribution* const* maps,
                           const cl_correctness* correctness, size_t n,
                           int html, char** out);
CL_API void cl_attribution_free(cl_attribution* map);

#ifdef __cplusplus
}
#endif

#endif /* CUNEILAB_H_ */
