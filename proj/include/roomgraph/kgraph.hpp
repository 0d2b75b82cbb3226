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
#ifndef ROOMGRAPH_KGRAPH_HPP_
#define ROOMGRAPH_KGRAPH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roomgraph/annotations.hpp"
#include "roomgraph/features.hpp"
#include "roomgraph/linalg.hpp"

namespace roomgraph {

enum class EdgeType : uint8_t {
  kSelfLoop = 1,       // image node to itself, weight 1
  kSameObject = 2,     // images of the same category, weight 1
  kSharedRoom = 3,     // cross-category images sharing a gt room, [0.5, 0.7]
  kCorrectRoom = 4,    // image to its gt room, weight = pair pos_score
  kIncorrectRoom = 5,  // image to every other room, weight = -neg_score
};

// Undirected, stored once with u <= v. Weights are f32 so an export round
// trip reproduces the graph bit-exactly.
struct Edge {
  uint32_t u = 0;
  uint32_t v = 0;
  float weight = 0.0f;
  EdgeType etype = EdgeType::kSelfLoop;
};

// Canonical node ordering: training image nodes grouped by category in
// sorted order (image indices ascending within a category), then room nodes
// in sorted order.
struct GraphNodes {
  std::vector<std::string> categories;  // sorted unique
  std::vector<std::string> rooms;       // sorted unique
  std::vector<std::string> names;       // node id -> name, images then rooms
  std::vector<uint32_t> image_category;  // image node id -> category index

  size_t image_count() const { return image_category.size(); }
  size_t node_count() const { return names.size(); }
  uint32_t room_node(size_t room_idx) const {
    return static_cast<uint32_t>(image_count() + room_idx);
  }
};

struct KnowledgeGraph {
  GraphNodes nodes;
  // Grouped by etype ascending; deterministic construction order within
  // each group.
  std::vector<Edge> edges;
  uint64_t seed = 0;  // drives only the kSharedRoom weight draws
};

struct EtypeStats {
  size_t count = 0;
  double min_weight = 0.0;
  double max_weight = 0.0;
};

struct GraphStats {
  size_t n_obj_nodes = 0;
  size_t n_room_nodes = 0;
  size_t n_edges = 0;
  std::map<uint8_t, EtypeStats> per_etype;
};

// Builds the graph over the split's train images. Every category present in
// the split must have a gt room; etype-3 weights are the only seeded draws
// (rooms ascending, image pairs by ascending node id).
KnowledgeGraph build_graph(const DatasetSplit& split, const GroundTruthMap& gt,
                           const SoftScoreTable& scores, uint64_t seed);

GraphStats graph_stats(const KnowledgeGraph& g);
std::string graph_stats_json(const GraphStats& s);

// A_hat = D^{-1/2} (A+ + I) D^{-1/2}; A+ clamps negative weights to 0 and I
// adds a unit self loop to every node. Zero entries are dropped.
CsrMatrix propagation_matrix(const KnowledgeGraph& g);

// Binary edge list "KGE1" (u64 count, then u32 u, u32 v, f32 w, u8 etype per
// record) plus a JSON node manifest at <path>.json.
void save_graph(const KnowledgeGraph& g, const std::string& path);
KnowledgeGraph load_graph(const std::string& path);

}  // namespace roomgraph

#endif  // ROOMGRAPH_KGRAPH_HPP_
