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
#include "roomgraph/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "roomgraph/error.hpp"
#include "roomgraph/rng.hpp"

namespace roomgraph {

using nlohmann::ordered_json;

namespace {

constexpr char kMagic[4] = {'A', 'F', 'M', '1'};

uint64_t fnv1a(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw Error::format(path + ": truncated header");
  }
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

FeatureMatrix load_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::io("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error::format(path + ": bad magic, expected AFM1");
  }
  const uint32_t n_rows = read_u32(in, path);
  const uint32_t dim = read_u32(in, path);
  const size_t count = static_cast<size_t>(n_rows) * dim;
  std::vector<float> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (static_cast<size_t>(in.gcount()) != count * sizeof(float)) {
    throw Error::format(path + ": payload shape mismatch, expected " +
                        std::to_string(count) + " f32 values");
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw Error::format(path + ": trailing bytes after payload");
  }

  FeatureMatrix m;
  m.values = DenseMatrix(n_rows, dim);
  for (size_t i = 0; i < count; ++i) {
    m.values.data[i] = static_cast<double>(payload[i]);
  }
  for (uint32_t r = 0; r < n_rows; ++r) {
    for (uint32_t c = 0; c < dim; ++c) {
      if (!std::isfinite(m.values.at(r, c))) {
        throw Error::format(path + ": non-finite value in row " +
                            std::to_string(r));
      }
    }
  }
  m.checksum = fnv1a(payload.data(), count * sizeof(float));
  return m;
}

uint64_t save_features(const FeatureMatrix& m, const std::string& path) {
  const size_t dim = m.dim();
  for (size_t i = 0; i < m.values.data.size(); ++i) {
    if (!std::isfinite(m.values.data[i])) {
      throw Error::validation(path + ": non-finite value in row " +
                              std::to_string(dim == 0 ? i : i / dim));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  out.write(kMagic, 4);
  write_u32(out, static_cast<uint32_t>(m.rows()));
  write_u32(out, static_cast<uint32_t>(m.dim()));
  std::vector<float> payload(m.values.data.size());
  for (size_t i = 0; i < payload.size(); ++i) {
    payload[i] = static_cast<float>(m.values.data[i]);
  }
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!out) throw Error::io("failed writing " + path);
  return fnv1a(payload.data(), payload.size() * sizeof(float));
}

std::vector<std::string> load_feature_names(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::io("cannot open " + path);
  ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("names") || !j["names"].is_array()) {
    throw Error::format(path + ": expected {\"names\": [...]}");
  }
  std::vector<std::string> names;
  for (const auto& n : j["names"]) {
    if (!n.is_string()) throw Error::format(path + ": names must be strings");
    names.push_back(n.get<std::string>());
  }
  return names;
}

void save_feature_names(const std::vector<std::string>& names,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  ordered_json j;
  j["names"] = names;
  out << j.dump(2) << "\n";
  if (!out) throw Error::io("failed writing " + path);
}

namespace {

// Largest-remainder apportionment of `total` across the three ratio parts.
// Remainder ties go to the earlier part (train, then val, then test).
std::array<uint32_t, 3> scale_ratios(uint32_t total,
                                     const std::array<uint32_t, 3>& ratios) {
  const uint64_t sum = ratios[0] + ratios[1] + ratios[2];
  std::array<uint32_t, 3> sizes{};
  std::array<double, 3> frac{};
  uint32_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact =
        static_cast<double>(total) * ratios[i] / static_cast<double>(sum);
    sizes[i] = static_cast<uint32_t>(std::floor(exact));
    frac[i] = exact - sizes[i];
    assigned += sizes[i];
  }
  uint32_t left = total - assigned;
  while (left > 0) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (frac[i] > frac[best]) best = i;
    }
    ++sizes[best];
    frac[best] = -1.0;
    --left;
  }
  return sizes;
}

}  // namespace

DatasetSplit split_dataset(const std::vector<std::string>& categories,
                           uint32_t images_per_category,
                           const std::array<uint32_t, 3>& ratios, uint64_t seed,
                           bool allow_scaling) {
  const uint64_t ratio_sum = ratios[0] + ratios[1] + ratios[2];
  if (ratio_sum == 0) {
    throw Error::invalid_argument("split_dataset: ratios sum to zero");
  }
  if (images_per_category == 0) {
    throw Error::invalid_argument("split_dataset: no images");
  }
  std::array<uint32_t, 3> sizes;
  if (images_per_category == ratio_sum) {
    sizes = ratios;
  } else if (allow_scaling) {
    sizes = scale_ratios(images_per_category, ratios);
  } else {
    throw Error::invalid_argument(
        "split_dataset: images_per_category != sum(ratios) and scaling "
        "disabled");
  }

  std::vector<std::string> sorted = categories;
  std::sort(sorted.begin(), sorted.end());

  Rng rng(seed);
  DatasetSplit split;
  split.ratios = ratios;
  for (const auto& cat : sorted) {
    std::vector<uint32_t> order(images_per_category);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);
    SplitIndices idx;
    idx.train.assign(order.begin(), order.begin() + sizes[0]);
    idx.val.assign(order.begin() + sizes[0],
                   order.begin() + sizes[0] + sizes[1]);
    idx.test.assign(order.begin() + sizes[0] + sizes[1], order.end());
    std::sort(idx.train.begin(), idx.train.end());
    std::sort(idx.val.begin(), idx.val.end());
    std::sort(idx.test.begin(), idx.test.end());
    split.per_category[cat] = std::move(idx);
  }
  return split;
}

void save_split(const DatasetSplit& split, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  ordered_json j;
  j["ratios"] = split.ratios;
  ordered_json cats = ordered_json::object();
  for (const auto& [cat, idx] : split.per_category) {
    ordered_json e;
    e["train"] = idx.train;
    e["val"] = idx.val;
    e["test"] = idx.test;
    cats[cat] = e;
  }
  j["categories"] = cats;
  out << j.dump(2) << "\n";
  if (!out) throw Error::io("failed writing " + path);
}

DatasetSplit load_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::io("cannot open " + path);
  ordered_json j = ordered_json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("ratios") || !j.contains("categories")) {
    throw Error::format(path + ": expected {\"ratios\", \"categories\"}");
  }
  DatasetSplit split;
  for (int i = 0; i < 3; ++i) split.ratios[i] = j["ratios"].at(i).get<uint32_t>();
  for (const auto& [cat, e] : j["categories"].items()) {
    SplitIndices idx;
    idx.train = e.at("train").get<std::vector<uint32_t>>();
    idx.val = e.at("val").get<std::vector<uint32_t>>();
    idx.test = e.at("test").get<std::vector<uint32_t>>();
    split.per_category[cat] = std::move(idx);
  }
  return split;
}

std::string image_node_name(const std::string& category, uint32_t index) {
  return category + "/" + std::to_string(index);
}

namespace {

// Round through f32 so in-memory values equal what an AFM1 round trip yields.
double as_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

std::vector<std::vector<double>> room_centers(uint32_t n_rooms, uint32_t dim,
                                              double separation, Rng& rng) {
  std::vector<std::vector<double>> centers(n_rooms,
                                           std::vector<double>(dim, 0.0));
  for (auto& c : centers) {
    for (auto& v : c) v = rng.normal();
  }
  // Keep centers off the one-hot room coordinates when the dimension has
  // room to spare: the room indicator that propagation mixes into image
  // aggregates is then the only systematic signal on those axes, and a
  // trained model transfers to the raw one-hot room features used at test
  // time instead of being swamped by center components living on the same
  // axes.
  if (dim >= 2 * n_rooms) {
    for (auto& c : centers) {
      std::fill(c.begin(), c.begin() + n_rooms, 0.0);
    }
  }
  // Gram-Schmidt when the dimension allows; plain normalization otherwise.
  for (uint32_t r = 0; r < n_rooms; ++r) {
    auto& c = centers[r];
    if (dim >= n_rooms) {
      for (uint32_t p = 0; p < r; ++p) {
        const double proj = dot(c, centers[p]);
        for (uint32_t k = 0; k < dim; ++k) c[k] -= proj * centers[p][k];
      }
    }
    const double n = norm(c);
    if (!(n > 1e-9)) {
      throw Error::internal("gen_synthetic: degenerate room center");
    }
    for (auto& v : c) v /= n;
  }
  for (auto& c : centers) {
    for (auto& v : c) v *= separation;
  }
  return centers;
}

}  // namespace

SyntheticResult gen_synthetic(const SyntheticSpec& spec) {
  if (spec.n_rooms < 2 || spec.n_categories < spec.n_rooms) {
    throw Error::invalid_argument(
        "gen_synthetic: need n_categories >= n_rooms >= 2");
  }
  if (spec.images_per_category == 0 || spec.dim == 0) {
    throw Error::invalid_argument("gen_synthetic: empty shape");
  }
  if (spec.dim < spec.n_rooms) {
    throw Error::invalid_argument(
        "gen_synthetic: dim < n_rooms, one-hot room features do not fit");
  }
  if (!(spec.cluster_separation > 0.0) || spec.noise_sigma < 0.0) {
    throw Error::invalid_argument("gen_synthetic: bad separation/noise");
  }

  SyntheticResult out;
  out.images_per_category = spec.images_per_category;
  char buf[32];
  for (uint32_t c = 0; c < spec.n_categories; ++c) {
    std::snprintf(buf, sizeof(buf), "cat%03u", c);
    out.categories.emplace_back(buf);
  }
  for (uint32_t r = 0; r < spec.n_rooms; ++r) {
    std::snprintf(buf, sizeof(buf), "room%02u", r);
    out.rooms.emplace_back(buf);
  }
  // Names are zero-padded, so the generated order is already sorted.

  Rng rng(spec.seed);
  const auto centers =
      room_centers(spec.n_rooms, spec.dim, spec.cluster_separation, rng);

  // Image rows first (category c sits in room c mod n_rooms), then one
  // one-hot row per room.
  const size_t n_images =
      static_cast<size_t>(spec.n_categories) * spec.images_per_category;
  out.features.values = DenseMatrix(n_images + spec.n_rooms, spec.dim);
  size_t row = 0;
  for (uint32_t c = 0; c < spec.n_categories; ++c) {
    const auto& center = centers[c % spec.n_rooms];
    for (uint32_t img = 0; img < spec.images_per_category; ++img, ++row) {
      for (uint32_t k = 0; k < spec.dim; ++k) {
        out.features.values.at(row, k) =
            as_f32(center[k] + spec.noise_sigma * rng.normal());
      }
      out.features.names.push_back(image_node_name(out.categories[c], img));
    }
  }
  for (uint32_t r = 0; r < spec.n_rooms; ++r) {
    out.features.values.at(n_images + r, r) = 1.0;
    out.features.names.push_back(out.rooms[r]);
  }

  // One synthetic receptacle per (category, room) pair.
  std::vector<ReceptacleScore> scores;
  for (uint32_t c = 0; c < spec.n_categories; ++c) {
    const uint32_t gt_room = c % spec.n_rooms;
    for (uint32_t r = 0; r < spec.n_rooms; ++r) {
      ReceptacleScore s;
      s.object_id = out.categories[c];
      s.room_id = out.rooms[r];
      s.receptacle_id = "rcpt";
      if (r == gt_room) {
        s.pos = rng.uniform(0.7, 1.0);
      } else {
        s.neg = rng.uniform(0.1, 0.5);
      }
      scores.push_back(std::move(s));
    }
  }
  out.scores = SoftScoreTable::from_receptacle_scores(scores);
  out.gt = ground_truth_map(out.scores, out.rooms);
  return out;
}

}  // namespace roomgraph
