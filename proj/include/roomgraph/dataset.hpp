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
#ifndef ROOMGRAPH_DATASET_HPP_
#define ROOMGRAPH_DATASET_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roomgraph/annotations.hpp"
#include "roomgraph/features.hpp"
#include "roomgraph/kgraph.hpp"

namespace roomgraph {

// A dataset directory holds:
//   manifest.json     categories, rooms, images_per_category, dim
//   features.afm1     all image rows (grouped by sorted category), then rooms
//   features.json     row names for features.afm1
//   scores.jsonl      receptacle-level soft scores (or annotations.jsonl
//                     with raw ranks, scored at load time)
//   split.json        per-category train/val/test image indices
struct Dataset {
  FeatureMatrix features;
  SoftScoreTable scores;
  GroundTruthMap gt;
  DatasetSplit split;
  std::vector<std::string> categories;  // sorted
  std::vector<std::string> rooms;       // sorted
  uint32_t images_per_category = 0;
};

Dataset make_synthetic_dataset(const SyntheticSpec& spec,
                               const std::array<uint32_t, 3>& ratios = {15, 5,
                                                                        10});

void save_dataset(const Dataset& d, const std::string& dir);
Dataset open_dataset(const std::string& dir);

// Features in graph node order (train images, then rooms), matched by name.
DenseMatrix training_features(const Dataset& d, const GraphNodes& nodes);

enum class SplitPart { kTrain, kVal, kTest };

// Image rows of one split part plus room rows, for the test-time pipeline.
struct SplitView {
  DenseMatrix image_x;
  std::vector<std::string> image_names;
  std::map<std::string, std::string> category_of;  // image name -> category
  DenseMatrix room_x;
  std::vector<std::string> room_names;
};

SplitView split_view(const Dataset& d, SplitPart part);

}  // namespace roomgraph

#endif  // ROOMGRAPH_DATASET_HPP_
