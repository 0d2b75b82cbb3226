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
#ifndef ROOMGRAPH_FEATURES_HPP_
#define ROOMGRAPH_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roomgraph/annotations.hpp"
#include "roomgraph/linalg.hpp"

namespace roomgraph {

// Node feature vectors. Row order follows the canonical node ordering of
// whatever the matrix describes (all images grouped by sorted category, or
// sorted rooms). File payloads are f32; in-memory math is double.
struct FeatureMatrix {
  DenseMatrix values;
  std::vector<std::string> names;  // row -> node name; may be empty
  uint64_t checksum = 0;           // FNV-1a of the payload bytes at load/save

  size_t rows() const { return values.rows; }
  size_t dim() const { return values.cols; }
};

// "AFM1": magic, u32 LE n_rows, u32 LE dim, n_rows*dim f32 LE values.
FeatureMatrix load_features(const std::string& path);
uint64_t save_features(const FeatureMatrix& m, const std::string& path);

// Sidecar manifest mapping row index -> node name ({"names": [...]}).
std::vector<std::string> load_feature_names(const std::string& path);
void save_feature_names(const std::vector<std::string>& names,
                        const std::string& path);

struct SplitIndices {
  std::vector<uint32_t> train, val, test;
};

struct DatasetSplit {
  std::array<uint32_t, 3> ratios{15, 5, 10};
  std::map<std::string, SplitIndices> per_category;
};

// Seeded shuffle per category, contiguous train/val/test assignment, each
// list returned sorted ascending. When images != sum(ratios) and
// allow_scaling is set, sizes come from the largest-remainder method.
DatasetSplit split_dataset(const std::vector<std::string>& categories,
                           uint32_t images_per_category,
                           const std::array<uint32_t, 3>& ratios, uint64_t seed,
                           bool allow_scaling = true);

void save_split(const DatasetSplit& split, const std::string& path);
DatasetSplit load_split(const std::string& path);

struct SyntheticSpec {
  uint32_t n_categories = 20;
  uint32_t n_rooms = 4;
  uint32_t images_per_category = 30;
  uint32_t dim = 32;
  double cluster_separation = 4.0;
  double noise_sigma = 0.1;
  uint64_t seed = 0;
};

struct SyntheticResult {
  // All image rows grouped by category in sorted order, then one one-hot row
  // per room (padded to dim). Row names follow the same layout.
  FeatureMatrix features;
  SoftScoreTable scores;
  GroundTruthMap gt;
  std::vector<std::string> categories;  // sorted
  std::vector<std::string> rooms;       // sorted
  uint32_t images_per_category = 0;
};

// Room r gets a unit-norm center (orthonormalized when dim >= n_rooms)
// scaled by cluster_separation; category c is assigned room c mod n_rooms and
// its images are center + N(0, noise_sigma). Soft scores: the gt pair gets
// pos in [0.7, 1.0], every other room pair gets neg in [0.1, 0.5].
SyntheticResult gen_synthetic(const SyntheticSpec& spec);

std::string image_node_name(const std::string& category, uint32_t index);

}  // namespace roomgraph

#endif  // ROOMGRAPH_FEATURES_HPP_
