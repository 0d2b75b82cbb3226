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
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "roomgraph/annotations.hpp"
#include "roomgraph/error.hpp"
#include "roomgraph/kgraph.hpp"
#include "test_util.hpp"

using namespace roomgraph;

namespace {

// Hand-made inputs: each category's images all live in one gt room.
struct TinySetup {
  DatasetSplit split;
  SoftScoreTable scores;
  GroundTruthMap gt;
};

// categories[i] -> (gt room, per-room neg pairs). pos defaults to 0.9.
TinySetup make_setup(const std::vector<std::string>& rooms,
                     const std::map<std::string, std::string>& cat_room,
                     uint32_t train_images) {
  TinySetup s;
  std::vector<ReceptacleScore> scores;
  for (const auto& [cat, gt_room] : cat_room) {
    SplitIndices idx;
    for (uint32_t i = 0; i < train_images; ++i) idx.train.push_back(i);
    s.split.per_category[cat] = idx;
    for (const auto& room : rooms) {
      if (room == gt_room) {
        scores.push_back({cat, room, "rcpt", 0.9, 0.0});
      } else {
        scores.push_back({cat, room, "rcpt", 0.0, 0.25});
      }
    }
  }
  s.scores = SoftScoreTable::from_receptacle_scores(scores);
  s.gt = ground_truth_map(s.scores, rooms);
  return s;
}

std::map<uint8_t, size_t> etype_counts(const KnowledgeGraph& g) {
  std::map<uint8_t, size_t> counts;
  for (const auto& e : g.edges) counts[static_cast<uint8_t>(e.etype)]++;
  return counts;
}

}  // namespace

TEST_CASE("graph counts for two categories sharing a room") {
  // Both categories map to room a; room b stays empty.
  const TinySetup s =
      make_setup({"a", "b"}, {{"c1", "a"}, {"c2", "a"}}, 2);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 0);
  CHECK(g.nodes.node_count() == 6);  // 4 images + 2 rooms
  const auto counts = etype_counts(g);
  CHECK(counts.at(1) == 4);  // one self loop per image
  CHECK(counts.at(2) == 2);  // one same-category pair per category
  CHECK(counts.at(3) == 4);  // 2x2 cross-category pairs in room a
  CHECK(counts.at(4) == 4);  // one gt-room edge per image
  CHECK(counts.at(5) == 4);  // one edge to the single other room

  const GraphStats stats = graph_stats(g);
  CHECK(stats.n_obj_nodes == 4);
  CHECK(stats.n_room_nodes == 2);
  CHECK(stats.n_edges == 18);
  CHECK(stats.per_etype.at(4).min_weight == doctest::Approx(0.9));
  CHECK(stats.per_etype.at(5).max_weight == doctest::Approx(-0.25));
}

TEST_CASE("one image and one room yields a self loop and a room edge") {
  const TinySetup s = make_setup({"a"}, {{"c1", "a"}}, 1);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 0);
  CHECK(g.nodes.node_count() == 2);
  const auto counts = etype_counts(g);
  CHECK(g.edges.size() == 2);
  CHECK(counts.at(1) == 1);
  CHECK(counts.at(4) == 1);
  CHECK(counts.count(2) == 0);
  CHECK(counts.count(3) == 0);
  CHECK(counts.count(5) == 0);
}

TEST_CASE("empty split builds an edgeless graph") {
  TinySetup s = make_setup({"a"}, {{"c1", "a"}}, 1);
  s.split.per_category.clear();
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 0);
  CHECK(g.edges.empty());
  CHECK(g.nodes.image_count() == 0);
  CHECK(graph_stats(g).n_edges == 0);
}

TEST_CASE("shared-room weights are seeded and bounded") {
  const TinySetup s =
      make_setup({"a", "b"}, {{"c1", "a"}, {"c2", "a"}, {"c3", "b"}}, 3);
  const KnowledgeGraph g0 = build_graph(s.split, s.gt, s.scores, 0);
  const KnowledgeGraph g0b = build_graph(s.split, s.gt, s.scores, 0);
  const KnowledgeGraph g1 = build_graph(s.split, s.gt, s.scores, 1);

  REQUIRE(g0.edges.size() == g1.edges.size());
  bool etype3_differs = false;
  for (size_t i = 0; i < g0.edges.size(); ++i) {
    const Edge &a = g0.edges[i], &b = g1.edges[i], &c = g0b.edges[i];
    CHECK(a.u == c.u);
    CHECK(a.weight == c.weight);  // same seed, same graph
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
    CHECK(a.etype == b.etype);
    if (a.etype == EdgeType::kSharedRoom) {
      CHECK(a.weight >= 0.5f);
      CHECK(a.weight <= 0.7f);
      etype3_differs = etype3_differs || a.weight != b.weight;
    } else {
      // Only the shared-room weights depend on the seed.
      CHECK(a.weight == b.weight);
    }
  }
  CHECK(etype3_differs);
}

TEST_CASE("every image gets one gt edge and n_rooms-1 negative edges") {
  const TinySetup s = make_setup(
      {"a", "b", "c"}, {{"c1", "a"}, {"c2", "b"}, {"c3", "a"}}, 2);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 7);
  std::map<uint32_t, int> gt_edges, neg_edges;
  for (const auto& e : g.edges) {
    if (e.etype == EdgeType::kCorrectRoom) gt_edges[e.u]++;
    if (e.etype == EdgeType::kIncorrectRoom) neg_edges[e.u]++;
  }
  for (uint32_t img = 0; img < g.nodes.image_count(); ++img) {
    CHECK(gt_edges[img] == 1);
    CHECK(neg_edges[img] == 2);
  }
}

TEST_CASE("build_graph validates its inputs") {
  TinySetup s = make_setup({"a", "b"}, {{"c1", "a"}}, 1);
  GroundTruthMap no_gt = s.gt;
  no_gt.gt_room.clear();
  CHECK_THROWS_AS(build_graph(s.split, no_gt, s.scores, 0), Error);

  // A gt pair without a positive soft score cannot be weighted.
  SoftScoreTable empty;
  CHECK_THROWS_AS(build_graph(s.split, s.gt, empty, 0), Error);
}

TEST_CASE("housekeep-shaped graphs have 4037 nodes") {
  std::map<std::string, std::string> cat_room;
  std::vector<std::string> rooms;
  for (int r = 0; r < 17; ++r) rooms.push_back("room" + std::to_string(r));
  for (int c = 0; c < 268; ++c) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "cat%03d", c);
    cat_room[buf] = rooms[static_cast<size_t>(c) % 17];
  }
  const TinySetup s = make_setup(rooms, cat_room, 15);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 0);
  CHECK(g.nodes.node_count() == 4037);
  CHECK(g.nodes.image_count() == 4020);
  const auto counts = etype_counts(g);
  CHECK(counts.at(1) == 4020);
  CHECK(counts.at(4) == 4020);
  CHECK(counts.at(5) == 4020u * 16u);
}

TEST_CASE("propagation of a single weight-1 edge is the half matrix") {
  // Two nodes joined by weight 1: (A+ + I) is all ones, degrees are 2.
  KnowledgeGraph g;
  g.nodes.categories = {"c"};
  g.nodes.rooms = {"r"};
  g.nodes.names = {"c/0", "r"};
  g.nodes.image_category = {0};
  g.edges.push_back({0, 1, 1.0f, EdgeType::kCorrectRoom});
  const CsrMatrix p = propagation_matrix(g);
  for (size_t i = 0; i < 2; ++i) {
    for (size_t j = 0; j < 2; ++j) CHECK(p.get(i, j) == 0.5);
  }
}

TEST_CASE("propagation of an isolated node is the identity") {
  KnowledgeGraph g;
  g.nodes.rooms = {"r"};
  g.nodes.names = {"r"};
  const CsrMatrix p = propagation_matrix(g);
  CHECK(p.rows == 1);
  CHECK(p.nnz() == 1);
  CHECK(p.get(0, 0) == 1.0);
}

TEST_CASE("propagation is symmetric with entries in [0, 1]") {
  const TinySetup s = make_setup(
      {"a", "b", "c"}, {{"c1", "a"}, {"c2", "a"}, {"c3", "b"}}, 3);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 5);
  const CsrMatrix p = propagation_matrix(g);
  p.validate();
  const size_t n = g.nodes.node_count();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double v = p.get(i, j);
      CHECK(v == p.get(j, i));  // exactly symmetric
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(p.get(i, i) > 0.0);  // self loop survives normalization
  }

  // Negative edges are clamped out: image 0's non-gt rooms contribute
  // nothing. Image 0 belongs to c1 -> room a (node index n_images + 0).
  const size_t n_images = g.nodes.image_count();
  CHECK(p.get(0, n_images + 1) == 0.0);  // room b
  CHECK(p.get(0, n_images + 2) == 0.0);  // room c
  CHECK(p.get(0, n_images + 0) > 0.0);   // room a
}

TEST_CASE("graph files round trip") {
  const std::string dir = testutil::temp_dir("kgraph_roundtrip");
  const TinySetup s =
      make_setup({"a", "b"}, {{"c1", "a"}, {"c2", "b"}}, 2);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 11);
  save_graph(g, dir + "/g.kge1");
  const KnowledgeGraph loaded = load_graph(dir + "/g.kge1");
  CHECK(loaded.seed == g.seed);
  CHECK(loaded.nodes.names == g.nodes.names);
  CHECK(loaded.nodes.categories == g.nodes.categories);
  CHECK(loaded.nodes.rooms == g.nodes.rooms);
  CHECK(loaded.nodes.image_category == g.nodes.image_category);
  REQUIRE(loaded.edges.size() == g.edges.size());
  for (size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(loaded.edges[i].u == g.edges[i].u);
    CHECK(loaded.edges[i].v == g.edges[i].v);
    CHECK(loaded.edges[i].weight == g.edges[i].weight);
    CHECK(loaded.edges[i].etype == g.edges[i].etype);
  }

  // Re-saving reproduces identical bytes.
  save_graph(loaded, dir + "/g2.kge1");
  CHECK(testutil::read_file(dir + "/g.kge1") ==
        testutil::read_file(dir + "/g2.kge1"));
  CHECK(testutil::read_file(dir + "/g.kge1.json") ==
        testutil::read_file(dir + "/g2.kge1.json"));
}

TEST_CASE("graph loader rejects corrupted files") {
  const std::string dir = testutil::temp_dir("kgraph_bad");
  const TinySetup s = make_setup({"a"}, {{"c1", "a"}}, 1);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 0);
  save_graph(g, dir + "/g.kge1");

  std::string bytes = testutil::read_file(dir + "/g.kge1");
  testutil::write_file(dir + "/trunc.kge1",
                       bytes.substr(0, bytes.size() - 3));
  testutil::write_file(dir + "/trunc.kge1.json",
                       testutil::read_file(dir + "/g.kge1.json"));
  CHECK_THROWS_AS(load_graph(dir + "/trunc.kge1"), Error);

  std::string magic = bytes;
  magic[0] = 'Z';
  testutil::write_file(dir + "/magic.kge1", magic);
  testutil::write_file(dir + "/magic.kge1.json",
                       testutil::read_file(dir + "/g.kge1.json"));
  CHECK_THROWS_AS(load_graph(dir + "/magic.kge1"), Error);

  // Manifest missing entirely.
  testutil::write_file(dir + "/lone.kge1", bytes);
  CHECK_THROWS_AS(load_graph(dir + "/lone.kge1"), Error);
}

TEST_CASE("stats json exposes counts per edge type") {
  const TinySetup s =
      make_setup({"a", "b"}, {{"c1", "a"}, {"c2", "a"}}, 2);
  const KnowledgeGraph g = build_graph(s.split, s.gt, s.scores, 0);
  const std::string json = graph_stats_json(graph_stats(g));
  CHECK(json.find("\"n_obj_nodes\": 4") != std::string::npos);
  CHECK(json.find("\"n_room_nodes\": 2") != std::string::npos);
  CHECK(json.find("\"n_edges\": 18") != std::string::npos);
  CHECK(json.find("\"3\"") != std::string::npos);
}
