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
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "roomgraph/error.hpp"
#include "roomgraph/gcn.hpp"
#include "roomgraph/infer.hpp"
#include "roomgraph/linalg.hpp"
#include "roomgraph/rng.hpp"
#include "test_util.hpp"

using namespace roomgraph;

namespace {

GcnModel identity_model(uint32_t dim) {
  GcnModel m;
  m.config.in_dim = dim;
  m.config.hidden_dims = {};
  m.config.out_dim = dim;
  DenseMatrix eye(dim, dim);
  for (uint32_t i = 0; i < dim; ++i) eye.at(i, i) = 1.0;
  m.weights.push_back(eye);
  return m;
}

}  // namespace

TEST_CASE("self-edge embedding equals forward through the identity") {
  GcnConfig cfg;
  cfg.in_dim = 5;
  cfg.hidden_dims = {4};
  cfg.out_dim = 3;
  cfg.seed = 12;
  const GcnModel m = init_weights(cfg);
  Rng rng(3);
  DenseMatrix x(7, 5);
  for (double& v : x.data) v = rng.normal();

  const DenseMatrix a = embed_selfedges(m, x);
  const DenseMatrix b = forward(m, CsrMatrix::identity(7), x);
  CHECK(a.data == b.data);
}

TEST_CASE("affinities are cosines of the embedded rows") {
  const GcnModel m = identity_model(3);
  DenseMatrix images(3, 3, {1.0, 0.0, 0.0,    // parallel to room 0
                            0.0, 2.0, 0.0,    // parallel to room 1
                            1.0, 1.0, 0.0});  // diagonal
  DenseMatrix rooms(2, 3, {2.0, 0.0, 0.0, 0.0, 5.0, 0.0});
  const AffinityMatrix a = image_affinities(
      m, images, {"i0", "i1", "i2"}, rooms, {"r0", "r1"});
  CHECK(a.row_names == std::vector<std::string>{"i0", "i1", "i2"});
  CHECK(a.room_names == std::vector<std::string>{"r0", "r1"});
  CHECK(a.values.at(0, 0) == 1.0);
  CHECK(a.values.at(0, 1) == 0.0);
  CHECK(a.values.at(1, 0) == 0.0);
  CHECK(a.values.at(1, 1) == 1.0);
  CHECK(a.values.at(2, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  // Per-pair oracle through the public cosine helper.
  const DenseMatrix ei = embed_selfedges(m, images);
  const DenseMatrix er = embed_selfedges(m, rooms);
  for (size_t i = 0; i < 3; ++i) {
    for (size_t r = 0; r < 2; ++r) {
      CHECK(a.values.at(i, r) == cosine(ei.row(i), er.row(r)));
    }
  }
}

TEST_CASE("zero-norm embeddings are reported with the node name") {
  GcnModel m = identity_model(2);
  m.weights[0] = DenseMatrix(2, 2);  // all zero: every embedding collapses
  DenseMatrix images(1, 2, {1.0, 0.0});
  DenseMatrix rooms(1, 2, {0.0, 1.0});
  try {
    image_affinities(m, images, {"imgX"}, rooms, {"roomY"});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("imgX") != std::string::npos);
  }
}

TEST_CASE("image_affinities validates name counts") {
  const GcnModel m = identity_model(2);
  DenseMatrix images(2, 2, {1.0, 0.0, 0.0, 1.0});
  DenseMatrix rooms(1, 2, {1.0, 1.0});
  CHECK_THROWS_AS(image_affinities(m, images, {"only_one"}, rooms, {"r"}),
                  Error);
}

TEST_CASE("category aggregation means the image rows") {
  AffinityMatrix per_image;
  per_image.row_names = {"b/0", "a/0", "b/1"};
  per_image.room_names = {"r0", "r1"};
  per_image.values = DenseMatrix(3, 2, {0.25, 0.5,     // b/0
                                        1.0, -1.0,     // a/0
                                        0.5, 0.25});   // b/1
  const std::map<std::string, std::string> cats{
      {"b/0", "b"}, {"a/0", "a"}, {"b/1", "b"}};
  const AffinityMatrix agg = aggregate_category(per_image, cats);
  REQUIRE(agg.row_names == std::vector<std::string>{"a", "b"});
  CHECK(agg.values.at(0, 0) == 1.0);
  CHECK(agg.values.at(0, 1) == -1.0);
  CHECK(agg.values.at(1, 0) == 0.375);
  CHECK(agg.values.at(1, 1) == 0.375);

  // Reordering the image rows does not change the aggregate.
  AffinityMatrix shuffled;
  shuffled.row_names = {"b/1", "b/0", "a/0"};
  shuffled.room_names = per_image.room_names;
  shuffled.values = DenseMatrix(3, 2, {0.5, 0.25, 0.25, 0.5, 1.0, -1.0});
  const AffinityMatrix agg2 = aggregate_category(shuffled, cats);
  CHECK(agg2.values.data == agg.values.data);
}

TEST_CASE("aggregation rejects unmapped images and empty categories") {
  AffinityMatrix per_image;
  per_image.row_names = {"x/0"};
  per_image.room_names = {"r0"};
  per_image.values = DenseMatrix(1, 1, {0.5});
  CHECK_THROWS_AS(aggregate_category(per_image, {}), Error);

  const std::map<std::string, std::string> ghost{
      {"x/0", "x"}, {"y/0", "y"}};  // y has no rows in the matrix
  CHECK_THROWS_AS(aggregate_category(per_image, ghost), Error);
}

TEST_CASE("room_ranking sorts descending with ties to earlier columns") {
  DenseMatrix v(1, 4, {0.1, 0.9, 0.9, -0.5});
  const std::vector<size_t> order = room_ranking(v, 0);
  CHECK(order == std::vector<size_t>{1, 2, 0, 3});
}

TEST_CASE("exported embeddings round trip through the tsv") {
  const std::string dir = testutil::temp_dir("infer_export");
  GcnConfig cfg;
  cfg.in_dim = 3;
  cfg.hidden_dims = {};
  cfg.out_dim = 2;
  cfg.seed = 77;
  const GcnModel m = init_weights(cfg);

  FeatureMatrix x;
  x.values = DenseMatrix(2, 3, {0.5, -1.25, 2.0, 0.0, 3.5, -0.75});
  x.names = {"n0", "n1"};
  export_embeddings(m, x, dir + "/emb.tsv");

  const DenseMatrix want = embed_selfedges(m, x.values);
  std::istringstream in(testutil::read_file(dir + "/emb.tsv"));
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "node\td0\td1");
  for (size_t i = 0; i < 2; ++i) {
    std::string line;
    REQUIRE(std::getline(in, line));
    std::istringstream row(line);
    std::string name;
    double a = 0.0, b = 0.0;
    row >> name >> a >> b;
    CHECK(name == x.names[i]);
    CHECK(a == want.at(i, 0));  // %.17g is lossless for doubles
    CHECK(b == want.at(i, 1));
  }

  FeatureMatrix unnamed;
  unnamed.values = DenseMatrix(1, 3);
  CHECK_THROWS_AS(export_embeddings(m, unnamed, dir + "/bad.tsv"), Error);
}

TEST_CASE("rankings csv lists rooms per category by affinity") {
  const std::string dir = testutil::temp_dir("infer_csv");
  AffinityMatrix a;
  a.row_names = {"catA", "catB"};
  a.room_names = {"r0", "r1", "r2"};
  a.values = DenseMatrix(2, 3, {0.5, 0.75, -0.25, 0.125, 0.125, 0.875});
  save_rankings_csv(a, dir + "/rank.csv");

  std::istringstream in(testutil::read_file(dir + "/rank.csv"));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "category,rank,room,affinity");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "catA,1,r1,0.75");
  CHECK(rows[1] == "catA,2,r0,0.5");
  CHECK(rows[2] == "catA,3,r2,-0.25");
  CHECK(rows[3] == "catB,1,r2,0.875");
  // Tie between r0 and r1 resolves to the earlier column.
  CHECK(rows[4] == "catB,2,r0,0.125");
  CHECK(rows[5] == "catB,3,r1,0.125");
}
