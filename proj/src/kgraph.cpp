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
#include "roomgraph/kgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "roomgraph/error.hpp"
#include "roomgraph/rng.hpp"

namespace roomgraph {

using nlohmann::ordered_json;

namespace {

constexpr char kMagic[4] = {'K', 'G', 'E', '1'};

uint32_t room_index(const std::vector<std::string>& rooms,
                    const std::string& room) {
  const auto it = std::lower_bound(rooms.begin(), rooms.end(), room);
  if (it == rooms.end() || *it != room) {
    throw Error::validation("room not in canonical room list: " + room);
  }
  return static_cast<uint32_t>(it - rooms.begin());
}

}  // namespace

KnowledgeGraph build_graph(const DatasetSplit& split, const GroundTruthMap& gt,
                           const SoftScoreTable& scores, uint64_t seed) {
  KnowledgeGraph g;
  g.seed = seed;
  g.nodes.rooms = gt.rooms;
  if (g.nodes.rooms.empty() && !split.per_category.empty()) {
    throw Error::validation("build_graph: no rooms");
  }

  // split.per_category is an ordered map, so categories come out sorted.
  std::vector<uint32_t> image_gt_room;  // image node -> gt room index
  std::vector<size_t> cat_begin;        // category -> first image node
  for (const auto& [cat, idx] : split.per_category) {
    const auto git = gt.gt_room.find(cat);
    if (git == gt.gt_room.end()) {
      throw Error::validation("category without ground truth room: " + cat);
    }
    const uint32_t room = room_index(g.nodes.rooms, git->second);
    const uint32_t cat_idx = static_cast<uint32_t>(g.nodes.categories.size());
    g.nodes.categories.push_back(cat);
    cat_begin.push_back(g.nodes.names.size());
    for (uint32_t img : idx.train) {
      g.nodes.names.push_back(image_node_name(cat, img));
      g.nodes.image_category.push_back(cat_idx);
      image_gt_room.push_back(room);
    }
  }
  cat_begin.push_back(g.nodes.names.size());
  const size_t n_images = g.nodes.image_category.size();
  for (const auto& room : g.nodes.rooms) g.nodes.names.push_back(room);

  // Type 1: self loop on every image node.
  for (uint32_t u = 0; u < n_images; ++u) {
    g.edges.push_back({u, u, 1.0f, EdgeType::kSelfLoop});
  }
  // Type 2: all image pairs within a category.
  for (size_t c = 0; c + 1 < cat_begin.size(); ++c) {
    for (size_t i = cat_begin[c]; i < cat_begin[c + 1]; ++i) {
      for (size_t j = i + 1; j < cat_begin[c + 1]; ++j) {
        g.edges.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(j),
                           1.0f, EdgeType::kSameObject});
      }
    }
  }
  // Type 3: cross-category image pairs sharing a gt room. The only seeded
  // draws; order is rooms ascending, then pairs by ascending node id.
  Rng rng(seed);
  for (uint32_t room = 0; room < g.nodes.rooms.size(); ++room) {
    std::vector<uint32_t> members;
    for (uint32_t u = 0; u < n_images; ++u) {
      if (image_gt_room[u] == room) members.push_back(u);
    }
    for (size_t a = 0; a < members.size(); ++a) {
      for (size_t b = a + 1; b < members.size(); ++b) {
        if (g.nodes.image_category[members[a]] ==
            g.nodes.image_category[members[b]]) {
          continue;
        }
        // Clamp after the f32 cast so rounding cannot leave the interval.
        const float w = std::min(
            0.7f, std::max(0.5f, static_cast<float>(rng.uniform(0.5, 0.7))));
        g.edges.push_back({members[a], members[b], w, EdgeType::kSharedRoom});
      }
    }
  }
  // Type 4: image to its gt room, weight = room-level pos_score.
  for (uint32_t u = 0; u < n_images; ++u) {
    const auto& cat = g.nodes.categories[g.nodes.image_category[u]];
    const auto& room = g.nodes.rooms[image_gt_room[u]];
    const PairScores* p = scores.find(cat, room);
    if (p == nullptr || !(p->pos_score > 0.0)) {
      throw Error::validation("no positive soft score for gt pair (" + cat +
                              ", " + room + ")");
    }
    g.edges.push_back({u, g.nodes.room_node(image_gt_room[u]),
                       static_cast<float>(p->pos_score),
                       EdgeType::kCorrectRoom});
  }
  // Type 5: image to every other room, weight = -neg_score (0 stays 0).
  for (uint32_t u = 0; u < n_images; ++u) {
    const auto& cat = g.nodes.categories[g.nodes.image_category[u]];
    for (uint32_t room = 0; room < g.nodes.rooms.size(); ++room) {
      if (room == image_gt_room[u]) continue;
      const double neg = gt.negative_for(cat, g.nodes.rooms[room]);
      const float w = neg == 0.0 ? 0.0f : -static_cast<float>(neg);
      g.edges.push_back(
          {u, g.nodes.room_node(room), w, EdgeType::kIncorrectRoom});
    }
  }
  return g;
}

GraphStats graph_stats(const KnowledgeGraph& g) {
  GraphStats s;
  s.n_obj_nodes = g.nodes.image_count();
  s.n_room_nodes = g.nodes.rooms.size();
  s.n_edges = g.edges.size();
  for (const auto& e : g.edges) {
    const auto key = static_cast<uint8_t>(e.etype);
    auto [it, fresh] = s.per_etype.try_emplace(key);
    auto& t = it->second;
    const double w = e.weight;
    if (fresh) {
      t.min_weight = w;
      t.max_weight = w;
    } else {
      t.min_weight = std::min(t.min_weight, w);
      t.max_weight = std::max(t.max_weight, w);
    }
    ++t.count;
  }
  return s;
}

std::string graph_stats_json(const GraphStats& s) {
  ordered_json j;
  j["n_obj_nodes"] = s.n_obj_nodes;
  j["n_room_nodes"] = s.n_room_nodes;
  j["n_nodes"] = s.n_obj_nodes + s.n_room_nodes;
  j["n_edges"] = s.n_edges;
  ordered_json per = ordered_json::object();
  for (const auto& [etype, t] : s.per_etype) {
    ordered_json e;
    e["count"] = t.count;
    e["min_weight"] = t.min_weight;
    e["max_weight"] = t.max_weight;
    per[std::to_string(etype)] = e;
  }
  j["per_etype"] = per;
  return j.dump(2) + "\n";
}

CsrMatrix propagation_matrix(const KnowledgeGraph& g) {
  const size_t n = g.nodes.node_count();
  std::vector<std::tuple<uint32_t, uint32_t, double>> trip;
  trip.reserve(2 * g.edges.size() + n);
  for (const auto& e : g.edges) {
    const double w = std::max(0.0, static_cast<double>(e.weight));
    if (w == 0.0) continue;
    trip.emplace_back(e.u, e.v, w);
    if (e.u != e.v) trip.emplace_back(e.v, e.u, w);
  }
  for (uint32_t i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);

  CsrMatrix a = CsrMatrix::from_triplets(n, n, trip);
  std::vector<double> deg(n);
  for (size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      d += a.values[k];
    }
    deg[i] = d;  // >= 1 from the +I self loop
  }
  // v / sqrt(deg_i * deg_j): exactly symmetric (the product commutes), and a
  // node whose whole degree comes from one entry normalizes to exactly 1, so
  // a self-loop-only graph yields the identity.
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      a.values[k] /= std::sqrt(deg[i] * deg[a.col_indices[k]]);
    }
  }
  return a;
}

namespace {

void write_u64(std::ostream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

uint64_t read_u64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw Error::format(path + ": truncated header");
  }
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_graph(const KnowledgeGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  out.write(kMagic, 4);
  write_u64(out, g.edges.size());
  for (const auto& e : g.edges) {
    unsigned char rec[13];
    std::memcpy(rec, &e.u, 4);
    std::memcpy(rec + 4, &e.v, 4);
    std::memcpy(rec + 8, &e.weight, 4);
    rec[12] = static_cast<unsigned char>(e.etype);
    out.write(reinterpret_cast<const char*>(rec), 13);
  }
  if (!out) throw Error::io("failed writing " + path);

  ordered_json j;
  j["categories"] = g.nodes.categories;
  j["rooms"] = g.nodes.rooms;
  ordered_json images = ordered_json::array();
  for (size_t u = 0; u < g.nodes.image_count(); ++u) {
    ordered_json e;
    e["name"] = g.nodes.names[u];
    e["category"] = g.nodes.image_category[u];
    images.push_back(e);
  }
  j["images"] = images;
  j["seed"] = g.seed;
  std::ofstream mout(path + ".json", std::ios::binary);
  if (!mout) throw Error::io("cannot write " + path + ".json");
  mout << j.dump(2) << "\n";
  if (!mout) throw Error::io("failed writing " + path + ".json");
}

KnowledgeGraph load_graph(const std::string& path) {
  KnowledgeGraph g;
  {
    std::ifstream in(path + ".json");
    if (!in) throw Error::io("cannot open " + path + ".json");
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error::format(path + ".json: invalid JSON");
    try {
      g.nodes.categories = j.at("categories").get<std::vector<std::string>>();
      g.nodes.rooms = j.at("rooms").get<std::vector<std::string>>();
      for (const auto& e : j.at("images")) {
        g.nodes.names.push_back(e.at("name").get<std::string>());
        g.nodes.image_category.push_back(e.at("category").get<uint32_t>());
      }
      g.seed = j.at("seed").get<uint64_t>();
    } catch (const ordered_json::exception& ex) {
      throw Error::format(path + ".json: " + ex.what());
    }
  }
  for (uint32_t c : g.nodes.image_category) {
    if (c >= g.nodes.categories.size()) {
      throw Error::format(path + ".json: category index out of range");
    }
  }
  for (const auto& room : g.nodes.rooms) g.nodes.names.push_back(room);
  const auto n = static_cast<uint32_t>(g.nodes.node_count());

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::io("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error::format(path + ": bad magic, expected KGE1");
  }
  const uint64_t count = read_u64(in, path);
  g.edges.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    unsigned char rec[13];
    if (!in.read(reinterpret_cast<char*>(rec), 13)) {
      throw Error::format(path + ": truncated edge record " +
                          std::to_string(i));
    }
    Edge e;
    std::memcpy(&e.u, rec, 4);
    std::memcpy(&e.v, rec + 4, 4);
    std::memcpy(&e.weight, rec + 8, 4);
    if (rec[12] < 1 || rec[12] > 5) {
      throw Error::format(path + ": bad edge type " + std::to_string(rec[12]));
    }
    e.etype = static_cast<EdgeType>(rec[12]);
    if (e.u > e.v || e.v >= n) {
      throw Error::format(path + ": edge endpoints out of order or range");
    }
    g.edges.push_back(e);
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw Error::format(path + ": trailing bytes after edge records");
  }
  return g;
}

}  // namespace roomgraph
