/*
 * Copyright 2026 The RoomGraph Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * C interface of the roomgraph shared library. All functions returning
 * rg_status set a thread-local error message readable via rg_last_error()
 * on failure. Handles are created by rg_*_open/build/load/train calls and
 * released with the matching rg_*_free.
 */
#ifndef ROOMGRAPH_ROOMGRAPH_H_
#define ROOMGRAPH_ROOMGRAPH_H_

#include <stdint.h>

#ifndef RG_API
#if defined(_WIN32)
#define RG_API __declspec(dllexport)
#else
#define RG_API __attribute__((visibility("default")))
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rg_status {
  RG_OK = 0,
  RG_ERR_INVALID_ARGUMENT = 1,
  RG_ERR_IO = 2,
  RG_ERR_FORMAT = 3,
  RG_ERR_VALIDATION = 4,
  RG_ERR_INTERNAL = 5
} rg_status;

/* Library version string; storage is static, do not free. */
RG_API const char* rg_version(void);

/* Message of the last failure on this thread; valid until the next failing
 * call on the same thread. Empty string when no failure occurred. */
RG_API const char* rg_last_error(void);

/* Frees strings returned through char** out parameters. */
RG_API void rg_string_free(char* s);

typedef struct rg_dataset rg_dataset;
typedef struct rg_graph rg_graph;
typedef struct rg_model rg_model;
typedef struct rg_affinity rg_affinity;

/* Split selectors for rg_infer / rg_evaluate_json. */
#define RG_SPLIT_TRAIN 0
#define RG_SPLIT_VAL 1
#define RG_SPLIT_TEST 2

typedef struct rg_synthetic_spec {
  uint32_t n_categories;
  uint32_t n_rooms;
  uint32_t images_per_category;
  uint32_t dim;
  double cluster_separation;
  double noise_sigma;
  uint64_t seed;
  uint32_t ratio_train; /* split ratio parts, scaled to images_per_category */
  uint32_t ratio_val;
  uint32_t ratio_test;
} rg_synthetic_spec;

RG_API void rg_synthetic_spec_defaults(rg_synthetic_spec* spec);

/* Generates a synthetic dataset; writes it under dir unless dir is NULL. */
RG_API rg_status rg_dataset_generate(const rg_synthetic_spec* spec,
                                     const char* dir, rg_dataset** out);
RG_API rg_status rg_dataset_open(const char* dir, rg_dataset** out);
RG_API void rg_dataset_free(rg_dataset* d);

/* Builds the knowledge graph over the dataset's training split. */
RG_API rg_status rg_graph_build(const rg_dataset* d, uint64_t seed,
                                rg_graph** out);
/* Writes <path> (binary edges) and <path>.json (node manifest). */
RG_API rg_status rg_graph_save(const rg_graph* g, const char* path);
RG_API rg_status rg_graph_load(const char* path, rg_graph** out);
/* JSON summary; free with rg_string_free. */
RG_API rg_status rg_graph_stats_json(const rg_graph* g, char** out_json);
RG_API void rg_graph_free(rg_graph* g);

typedef struct rg_train_options {
  uint32_t steps;
  double learning_rate;
  uint32_t lr_decay_every; /* 0 keeps the learning rate constant */
  double lr_decay_factor;
  double temperature;
  uint32_t negatives_per_sample; /* K */
  uint32_t samples_per_batch;    /* M */
  int include_positive; /* nonzero adds the positive term to the denominator */
  const uint32_t* hidden_dims; /* NULL selects the default single 256 layer */
  uint32_t n_hidden_dims;
  uint32_t out_dim;
  uint64_t seed;
  uint32_t eval_every; /* 0 logs only the first and final step */
} rg_train_options;

RG_API void rg_train_options_defaults(rg_train_options* opt);

/* Trains on the dataset. graph may be NULL, in which case it is built from
 * the dataset with opt->seed. When log_path is non-NULL the training log is
 * written there as JSON lines; eval entries use the validation split. */
RG_API rg_status rg_train(const rg_dataset* d, const rg_graph* graph,
                          const rg_train_options* opt, const char* log_path,
                          rg_model** out);

RG_API rg_status rg_model_load(const char* path, rg_model** out);
RG_API rg_status rg_model_save(const rg_model* m, const char* path);
/* 0 on NULL model. */
RG_API uint32_t rg_model_out_dim(const rg_model* m);
RG_API void rg_model_free(rg_model* m);

/* Per-category room affinities for one split (RG_SPLIT_*). */
RG_API rg_status rg_infer(const rg_dataset* d, const rg_model* m, int split,
                          rg_affinity** out);
RG_API rg_status rg_affinity_dims(const rg_affinity* a, uint32_t* n_rows,
                                  uint32_t* n_rooms);
/* CSV rows (category, rank, room, affinity), descending affinity. */
RG_API rg_status rg_affinity_save_csv(const rg_affinity* a, const char* path);
RG_API void rg_affinity_free(rg_affinity* a);

/* Evaluation report JSON for one split; free with rg_string_free. */
RG_API rg_status rg_evaluate_json(const rg_dataset* d, const rg_model* m,
                                  int split, char** out_json);

/* Trains one model per candidate temperature (same seed) and returns the
 * candidate with the highest validation mAP; ties go to the smaller value. */
RG_API rg_status rg_tune_temperature(const rg_dataset* d, const rg_graph* graph,
                                     const rg_train_options* opt,
                                     const double* candidates,
                                     uint32_t n_candidates, double* best);

/* Embeds every dataset feature row with self-edges only; TSV output. */
RG_API rg_status rg_export_embeddings(const rg_dataset* d, const rg_model* m,
                                      const char* path);

#ifdef __cplusplus
}
#endif

#endif /* ROOMGRAPH_ROOMGRAPH_H_ */
