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
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "roomgraph/roomgraph.h"
#include "test_util.hpp"

TEST_CASE("version and error strings are always readable") {
  REQUIRE(rg_version() != nullptr);
  CHECK(std::strlen(rg_version()) > 0);
  REQUIRE(rg_last_error() != nullptr);
  rg_string_free(nullptr);  // harmless no-op
}

TEST_CASE("null arguments fail with invalid-argument status") {
  CHECK(rg_dataset_open(nullptr, nullptr) == RG_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(rg_last_error()) > 0);
  rg_dataset* d = nullptr;
  CHECK(rg_dataset_open(nullptr, &d) == RG_ERR_INVALID_ARGUMENT);
  CHECK(d == nullptr);
  CHECK(rg_graph_build(nullptr, 0, nullptr) == RG_ERR_INVALID_ARGUMENT);
  CHECK(rg_model_load(nullptr, nullptr) == RG_ERR_INVALID_ARGUMENT);
  CHECK(rg_evaluate_json(nullptr, nullptr, RG_SPLIT_TEST, nullptr) ==
        RG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("opening a missing dataset reports an io error") {
  rg_dataset* d = nullptr;
  CHECK(rg_dataset_open("/definitely/not/here", &d) != RG_OK);
  CHECK(d == nullptr);
  CHECK(std::strlen(rg_last_error()) > 0);
}

TEST_CASE("loading garbage as a model reports a format error") {
  const std::string dir = testutil::temp_dir("capi_badmodel");
  testutil::write_file(dir + "/junk.gck1", "this is not a checkpoint");
  rg_model* m = nullptr;
  CHECK(rg_model_load((dir + "/junk.gck1").c_str(), &m) == RG_ERR_FORMAT);
  CHECK(m == nullptr);
}

TEST_CASE("the full pipeline runs through the c interface") {
  const std::string dir = testutil::temp_dir("capi_pipeline");

  rg_synthetic_spec spec;
  rg_synthetic_spec_defaults(&spec);
  spec.n_categories = 4;
  spec.n_rooms = 2;
  spec.images_per_category = 6;
  spec.dim = 8;
  spec.seed = 7;
  spec.ratio_train = 4;
  spec.ratio_val = 1;
  spec.ratio_test = 1;

  rg_dataset* d = nullptr;
  REQUIRE(rg_dataset_generate(&spec, dir.c_str(), &d) == RG_OK);
  REQUIRE(d != nullptr);
  CHECK(std::strlen(rg_last_error()) == 0);  // success clears the slot

  rg_dataset* d2 = nullptr;
  REQUIRE(rg_dataset_open(dir.c_str(), &d2) == RG_OK);

  rg_graph* g = nullptr;
  REQUIRE(rg_graph_build(d, 7, &g) == RG_OK);
  const std::string gpath = dir + "/graph.kge1";
  REQUIRE(rg_graph_save(g, gpath.c_str()) == RG_OK);
  rg_graph* g2 = nullptr;
  REQUIRE(rg_graph_load(gpath.c_str(), &g2) == RG_OK);

  char* stats = nullptr;
  REQUIRE(rg_graph_stats_json(g2, &stats) == RG_OK);
  REQUIRE(stats != nullptr);
  {
    const nlohmann::json j = nlohmann::json::parse(stats);
    CHECK(j["n_obj_nodes"].get<int>() == 16);  // 4 categories x 4 train
    CHECK(j["n_room_nodes"].get<int>() == 2);
    CHECK(j["per_etype"].count("4") == 1);
  }
  rg_string_free(stats);

  rg_train_options opt;
  rg_train_options_defaults(&opt);
  opt.steps = 25;
  opt.learning_rate = 5e-3;
  opt.temperature = 0.1;
  opt.negatives_per_sample = 4;
  opt.samples_per_batch = 8;
  const uint32_t hidden[] = {8};
  opt.hidden_dims = hidden;
  opt.n_hidden_dims = 1;
  opt.out_dim = 4;
  opt.seed = 7;
  opt.eval_every = 10;

  const std::string log_path = dir + "/log.jsonl";
  rg_model* m = nullptr;
  REQUIRE(rg_train(d, g, &opt, log_path.c_str(), &m) == RG_OK);
  REQUIRE(m != nullptr);
  CHECK(rg_model_out_dim(m) == 4);
  CHECK(testutil::read_file(log_path).find("val_map") != std::string::npos);

  const std::string ckpt = dir + "/model.gck1";
  REQUIRE(rg_model_save(m, ckpt.c_str()) == RG_OK);
  rg_model* m2 = nullptr;
  REQUIRE(rg_model_load(ckpt.c_str(), &m2) == RG_OK);

  rg_affinity* a = nullptr;
  REQUIRE(rg_infer(d, m2, RG_SPLIT_TEST, &a) == RG_OK);
  uint32_t rows = 0, rooms = 0;
  REQUIRE(rg_affinity_dims(a, &rows, &rooms) == RG_OK);
  CHECK(rows == 4);  // one test image per category, aggregated
  CHECK(rooms == 2);
  const std::string csv = dir + "/rankings.csv";
  REQUIRE(rg_affinity_save_csv(a, csv.c_str()) == RG_OK);
  CHECK(testutil::read_file(csv).rfind("category,rank,room,affinity", 0) ==
        0);

  char* report = nullptr;
  REQUIRE(rg_evaluate_json(d, m2, RG_SPLIT_TEST, &report) == RG_OK);
  {
    const nlohmann::json j = nlohmann::json::parse(report);
    CHECK(j["map"].get<double>() >= 0.0);
    CHECK(j["map"].get<double>() <= 1.0);
    CHECK(j["per_category"].size() == 4);
  }
  rg_string_free(report);

  double best_t = 0.0;
  const double candidates[] = {0.1, 0.5};
  rg_train_options tune_opt = opt;
  tune_opt.steps = 10;
  tune_opt.eval_every = 0;
  REQUIRE(rg_tune_temperature(d, g, &tune_opt, candidates, 2, &best_t) ==
          RG_OK);
  CHECK((best_t == 0.1 || best_t == 0.5));

  const std::string tsv = dir + "/embeddings.tsv";
  REQUIRE(rg_export_embeddings(d, m2, tsv.c_str()) == RG_OK);
  CHECK(testutil::read_file(tsv).rfind("node\t", 0) == 0);

  rg_affinity_free(a);
  rg_model_free(m2);
  rg_model_free(m);
  rg_graph_free(g2);
  rg_graph_free(g);
  rg_dataset_free(d2);
  rg_dataset_free(d);
}

TEST_CASE("training without a prebuilt graph builds one internally") {
  rg_synthetic_spec spec;
  rg_synthetic_spec_defaults(&spec);
  spec.n_categories = 4;
  spec.n_rooms = 2;
  spec.images_per_category = 4;
  spec.dim = 8;
  spec.ratio_train = 2;
  spec.ratio_val = 1;
  spec.ratio_test = 1;
  rg_dataset* d = nullptr;
  REQUIRE(rg_dataset_generate(&spec, nullptr, &d) == RG_OK);  // in memory

  rg_train_options opt;
  rg_train_options_defaults(&opt);
  opt.steps = 5;
  opt.temperature = 0.1;
  opt.negatives_per_sample = 2;
  opt.samples_per_batch = 4;
  const uint32_t hidden[] = {4};
  opt.hidden_dims = hidden;
  opt.n_hidden_dims = 1;
  opt.out_dim = 4;

  rg_model* m = nullptr;
  REQUIRE(rg_train(d, nullptr, &opt, nullptr, &m) == RG_OK);
  REQUIRE(m != nullptr);

  rg_model_free(m);
  rg_dataset_free(d);
}

TEST_CASE("bad train options surface as invalid-argument") {
  rg_synthetic_spec spec;
  rg_synthetic_spec_defaults(&spec);
  spec.n_categories = 4;
  spec.n_rooms = 2;
  spec.images_per_category = 4;
  spec.dim = 8;
  spec.ratio_train = 2;
  spec.ratio_val = 1;
  spec.ratio_test = 1;
  rg_dataset* d = nullptr;
  REQUIRE(rg_dataset_generate(&spec, nullptr, &d) == RG_OK);

  rg_train_options opt;
  rg_train_options_defaults(&opt);
  opt.steps = 0;
  rg_model* m = nullptr;
  CHECK(rg_train(d, nullptr, &opt, nullptr, &m) == RG_ERR_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  rg_dataset_free(d);
}
