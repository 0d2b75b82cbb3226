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
 */
#include "roomgraph/roomgraph.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "roomgraph/dataset.hpp"
#include "roomgraph/error.hpp"
#include "roomgraph/infer.hpp"
#include "roomgraph/kgraph.hpp"
#include "roomgraph/metrics.hpp"
#include "roomgraph/train.hpp"

struct rg_dataset {
  roomgraph::Dataset impl;
};
struct rg_graph {
  roomgraph::KnowledgeGraph impl;
};
struct rg_model {
  roomgraph::GcnModel impl;
};
struct rg_affinity {
  roomgraph::AffinityMatrix impl;
};

namespace {

thread_local std::string t_last_error;

rg_status status_of(roomgraph::ErrorCode code) {
  switch (code) {
    case roomgraph::ErrorCode::kInvalidArgument:
      return RG_ERR_INVALID_ARGUMENT;
    case roomgraph::ErrorCode::kIo:
      return RG_ERR_IO;
    case roomgraph::ErrorCode::kFormat:
      return RG_ERR_FORMAT;
    case roomgraph::ErrorCode::kValidation:
      return RG_ERR_VALIDATION;
    case roomgraph::ErrorCode::kInternal:
      return RG_ERR_INTERNAL;
  }
  return RG_ERR_INTERNAL;
}

template <typename F>
rg_status wrap(F&& f) noexcept {
  try {
    f();
    t_last_error.clear();
    return RG_OK;
  } catch (const roomgraph::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RG_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return RG_ERR_INTERNAL;
  }
}

rg_status fail_invalid(const char* message) {
  t_last_error = message;
  return RG_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

roomgraph::SplitPart split_part(int split) {
  switch (split) {
    case RG_SPLIT_TRAIN:
      return roomgraph::SplitPart::kTrain;
    case RG_SPLIT_VAL:
      return roomgraph::SplitPart::kVal;
    case RG_SPLIT_TEST:
      return roomgraph::SplitPart::kTest;
    default:
      throw roomgraph::Error::invalid_argument("bad split selector");
  }
}

roomgraph::GcnConfig gcn_config_of(const rg_train_options& opt) {
  roomgraph::GcnConfig gc;
  gc.in_dim = 0;  // filled from the feature matrix by train()
  if (opt.hidden_dims != nullptr && opt.n_hidden_dims > 0) {
    gc.hidden_dims.assign(opt.hidden_dims,
                          opt.hidden_dims + opt.n_hidden_dims);
  }
  gc.out_dim = opt.out_dim;
  gc.seed = opt.seed;
  return gc;
}

roomgraph::TrainConfig train_config_of(const rg_train_options& opt) {
  roomgraph::TrainConfig tc;
  tc.steps = opt.steps;
  tc.learning_rate = opt.learning_rate;
  if (opt.lr_decay_every > 0) {
    tc.schedule = roomgraph::LrSchedule::kStepDecay;
    tc.decay_every = opt.lr_decay_every;
    tc.decay_factor = opt.lr_decay_factor;
  }
  tc.loss.temperature = opt.temperature;
  tc.loss.negatives_per_sample = opt.negatives_per_sample;
  tc.loss.samples_per_batch = opt.samples_per_batch;
  tc.loss.include_positive = opt.include_positive != 0;
  tc.seed = opt.seed;
  tc.eval_every = opt.eval_every;
  return tc;
}

roomgraph::AffinityMatrix category_affinities(const roomgraph::Dataset& d,
                                              const roomgraph::GcnModel& m,
                                              int split) {
  const roomgraph::SplitView view =
      roomgraph::split_view(d, split_part(split));
  if (view.image_names.empty()) {
    throw roomgraph::Error::validation("selected split has no images");
  }
  const roomgraph::AffinityMatrix per_image = roomgraph::image_affinities(
      m, view.image_x, view.image_names, view.room_x, view.room_names);
  return roomgraph::aggregate_category(per_image, view.category_of);
}

}  // namespace

extern "C" {

const char* rg_version(void) { return "0.1.0"; }

const char* rg_last_error(void) { return t_last_error.c_str(); }

void rg_string_free(char* s) { std::free(s); }

void rg_synthetic_spec_defaults(rg_synthetic_spec* spec) {
  if (spec == nullptr) return;
  const roomgraph::SyntheticSpec d;
  spec->n_categories = d.n_categories;
  spec->n_rooms = d.n_rooms;
  spec->images_per_category = d.images_per_category;
  spec->dim = d.dim;
  spec->cluster_separation = d.cluster_separation;
  spec->noise_sigma = d.noise_sigma;
  spec->seed = d.seed;
  spec->ratio_train = 15;
  spec->ratio_val = 5;
  spec->ratio_test = 10;
}

rg_status rg_dataset_generate(const rg_synthetic_spec* spec, const char* dir,
                              rg_dataset** out) {
  if (spec == nullptr || out == nullptr) {
    return fail_invalid("rg_dataset_generate: NULL argument");
  }
  *out = nullptr;
  return wrap([&] {
    roomgraph::SyntheticSpec s;
    s.n_categories = spec->n_categories;
    s.n_rooms = spec->n_rooms;
    s.images_per_category = spec->images_per_category;
    s.dim = spec->dim;
    s.cluster_separation = spec->cluster_separation;
    s.noise_sigma = spec->noise_sigma;
    s.seed = spec->seed;
    auto d = std::make_unique<rg_dataset>();
    d->impl = roomgraph::make_synthetic_dataset(
        s, {spec->ratio_train, spec->ratio_val, spec->ratio_test});
    if (dir != nullptr) roomgraph::save_dataset(d->impl, dir);
    *out = d.release();
  });
}

rg_status rg_dataset_open(const char* dir, rg_dataset** out) {
  if (dir == nullptr || out == nullptr) {
    return fail_invalid("rg_dataset_open: NULL argument");
  }
  *out = nullptr;
  return wrap([&] {
    auto d = std::make_unique<rg_dataset>();
    d->impl = roomgraph::open_dataset(dir);
    *out = d.release();
  });
}

void rg_dataset_free(rg_dataset* d) { delete d; }

rg_status rg_graph_build(const rg_dataset* d, uint64_t seed, rg_graph** out) {
  if (d == nullptr || out == nullptr) {
    return fail_invalid("rg_graph_build: NULL argument");
  }
  *out = nullptr;
  return wrap([&] {
    auto g = std::make_unique<rg_graph>();
    g->impl = roomgraph::build_graph(d->impl.split, d->impl.gt, d->impl.scores,
                                     seed);
    *out = g.release();
  });
}

rg_status rg_graph_save(const rg_graph* g, const char* path) {
  if (g == nullptr || path == nullptr) {
    return fail_invalid("rg_graph_save: NULL argument");
  }
  return wrap([&] { roomgraph::save_graph(g->impl, path); });
}

rg_status rg_graph_load(const char* path, rg_graph** out) {
  if (path == nullptr || out == nullptr) {
    return fail_invalid("rg_graph_load: NULL argument");
  }
  *out = nullptr;
  return wrap([&] {
    auto g = std::make_unique<rg_graph>();
    g->impl = roomgraph::load_graph(path);
    *out = g.release();
  });
}

rg_status rg_graph_stats_json(const rg_graph* g, char** out_json) {
  if (g == nullptr || out_json == nullptr) {
    return fail_invalid("rg_graph_stats_json: NULL argument");
  }
  *out_json = nullptr;
  return wrap([&] {
    const std::string s =
        roomgraph::graph_stats_json(roomgraph::graph_stats(g->impl));
    *out_json = copy_string(s);
    if (*out_json == nullptr) {
      throw roomgraph::Error::internal("out of memory");
    }
  });
}

void rg_graph_free(rg_graph* g) { delete g; }

void rg_train_options_defaults(rg_train_options* opt) {
  if (opt == nullptr) return;
  const roomgraph::TrainConfig tc;
  const roomgraph::GcnConfig gc;
  opt->steps = tc.steps;
  opt->learning_rate = tc.learning_rate;
  opt->lr_decay_every = 0;
  opt->lr_decay_factor = tc.decay_factor;
  opt->temperature = tc.loss.temperature;
  opt->negatives_per_sample = tc.loss.negatives_per_sample;
  opt->samples_per_batch = tc.loss.samples_per_batch;
  opt->include_positive = 0;
  opt->hidden_dims = nullptr;
  opt->n_hidden_dims = 0;
  opt->out_dim = gc.out_dim;
  opt->seed = tc.seed;
  opt->eval_every = tc.eval_every;
}

rg_status rg_train(const rg_dataset* d, const rg_graph* graph,
                   const rg_train_options* opt, const char* log_path,
                   rg_model** out) {
  if (d == nullptr || opt == nullptr || out == nullptr) {
    return fail_invalid("rg_train: NULL argument");
  }
  *out = nullptr;
  return wrap([&] {
    roomgraph::KnowledgeGraph built;
    const roomgraph::KnowledgeGraph* g = graph != nullptr ? &graph->impl
                                                          : nullptr;
    if (g == nullptr) {
      built = roomgraph::build_graph(d->impl.split, d->impl.gt, d->impl.scores,
                                     opt->seed);
      g = &built;
    }
    const roomgraph::DenseMatrix x =
        roomgraph::training_features(d->impl, g->nodes);
    roomgraph::SplitView val;
    const roomgraph::SplitView* val_ptr = nullptr;
    const roomgraph::GroundTruthMap* gt_ptr = nullptr;
    if (opt->eval_every > 0) {
      val = roomgraph::split_view(d->impl, roomgraph::SplitPart::kVal);
      if (!val.image_names.empty()) {
        val_ptr = &val;
        gt_ptr = &d->impl.gt;
      }
    }
    roomgraph::TrainResult r =
        roomgraph::train(*g, x, gcn_config_of(*opt), train_config_of(*opt),
                         val_ptr, gt_ptr);
    if (log_path != nullptr) roomgraph::save_train_log(r.log, log_path);
    auto m = std::make_unique<rg_model>();
    m->impl = std::move(r.model);
    *out = m.release();
  });
}

rg_status rg_model_load(const char* path, rg_model** out) {
  if (path == nullptr || out == nullptr) {
    return fail_invalid("rg_model_load: NULL argument");
  }
  *out = nullptr;
  return wrap([&] {
    auto m = std::make_unique<rg_model>();
    m->impl = roomgraph::load_checkpoint(path);
    *out = m.release();
  });
}

rg_status rg_model_save(const rg_model* m, const char* path) {
  if (m == nullptr || path == nullptr) {
    return fail_invalid("rg_model_save: NULL argument");
  }
  return wrap([&] { roomgraph::save_checkpoint(m->impl, path); });
}

uint32_t rg_model_out_dim(const rg_model* m) {
  if (m == nullptr || m->impl.weights.empty()) return 0;
  return static_cast<uint32_t>(m->impl.weights.back().cols);
}

void rg_model_free(rg_model* m) { delete m; }

rg_status rg_infer(const rg_dataset* d, const rg_model* m, int split,
                   rg_affinity** out) {
  if (d == nullptr || m == nullptr || out == nullptr) {
    return fail_invalid("rg_infer: NULL argument");
  }
  *out = nullptr;
  return wrap([&] {
    auto a = std::make_unique<rg_affinity>();
    a->impl = category_affinities(d->impl, m->impl, split);
    *out = a.release();
  });
}

rg_status rg_affinity_dims(const rg_affinity* a, uint32_t* n_rows,
                           uint32_t* n_rooms) {
  if (a == nullptr || n_rows == nullptr || n_rooms == nullptr) {
    return fail_invalid("rg_affinity_dims: NULL argument");
  }
  *n_rows = static_cast<uint32_t>(a->impl.values.rows);
  *n_rooms = static_cast<uint32_t>(a->impl.values.cols);
  return RG_OK;
}

rg_status rg_affinity_save_csv(const rg_affinity* a, const char* path) {
  if (a == nullptr || path == nullptr) {
    return fail_invalid("rg_affinity_save_csv: NULL argument");
  }
  return wrap([&] { roomgraph::save_rankings_csv(a->impl, path); });
}

void rg_affinity_free(rg_affinity* a) { delete a; }

rg_status rg_evaluate_json(const rg_dataset* d, const rg_model* m, int split,
                           char** out_json) {
  if (d == nullptr || m == nullptr || out_json == nullptr) {
    return fail_invalid("rg_evaluate_json: NULL argument");
  }
  *out_json = nullptr;
  return wrap([&] {
    const roomgraph::AffinityMatrix per_cat =
        category_affinities(d->impl, m->impl, split);
    const roomgraph::EvalReport r = roomgraph::evaluate(per_cat, d->impl.gt);
    const std::string s = roomgraph::eval_report_json(r);
    *out_json = copy_string(s);
    if (*out_json == nullptr) {
      throw roomgraph::Error::internal("out of memory");
    }
  });
}

rg_status rg_tune_temperature(const rg_dataset* d, const rg_graph* graph,
                              const rg_train_options* opt,
                              const double* candidates, uint32_t n_candidates,
                              double* best) {
  if (d == nullptr || opt == nullptr || candidates == nullptr ||
      best == nullptr || n_candidates == 0) {
    return fail_invalid("rg_tune_temperature: NULL or empty argument");
  }
  return wrap([&] {
    roomgraph::KnowledgeGraph built;
    const roomgraph::KnowledgeGraph* g = graph != nullptr ? &graph->impl
                                                          : nullptr;
    if (g == nullptr) {
      built = roomgraph::build_graph(d->impl.split, d->impl.gt, d->impl.scores,
                                     opt->seed);
      g = &built;
    }
    const roomgraph::DenseMatrix x =
        roomgraph::training_features(d->impl, g->nodes);
    const roomgraph::SplitView val =
        roomgraph::split_view(d->impl, roomgraph::SplitPart::kVal);
    if (val.image_names.empty()) {
      throw roomgraph::Error::validation(
          "tune_temperature: validation split is empty");
    }
    *best = roomgraph::tune_temperature(
        std::vector<double>(candidates, candidates + n_candidates), *g, x,
        gcn_config_of(*opt), train_config_of(*opt), val, d->impl.gt);
  });
}

rg_status rg_export_embeddings(const rg_dataset* d, const rg_model* m,
                               const char* path) {
  if (d == nullptr || m == nullptr || path == nullptr) {
    return fail_invalid("rg_export_embeddings: NULL argument");
  }
  return wrap(
      [&] { roomgraph::export_embeddings(m->impl, d->impl.features, path); });
}

}  // extern "C"
