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
#ifndef ROOMGRAPH_INFER_HPP_
#define ROOMGRAPH_INFER_HPP_

#include <map>
#include <string>
#include <vector>

#include "roomgraph/features.hpp"
#include "roomgraph/gcn.hpp"
#include "roomgraph/linalg.hpp"

namespace roomgraph {

// Rows are single images or categories; columns follow the canonical room
// order. Values are cosine similarities in [-1, 1].
struct AffinityMatrix {
  std::vector<std::string> row_names;
  std::vector<std::string> room_names;
  DenseMatrix values;
};

// Test-time encoding: queries have no graph edges, so propagation is the
// identity (a self-loop-only graph normalizes to exactly I).
DenseMatrix embed_selfedges(const GcnModel& m, const DenseMatrix& x);

// Entry (i, r) = cosine(embed(image_i), embed(room_r)).
AffinityMatrix image_affinities(const GcnModel& m, const DenseMatrix& image_x,
                                const std::vector<std::string>& image_names,
                                const DenseMatrix& room_x,
                                const std::vector<std::string>& room_names);

// Unweighted mean over each category's image rows; output rows are the
// categories in sorted order. category_of maps image row name -> category.
AffinityMatrix aggregate_category(
    const AffinityMatrix& per_image,
    const std::map<std::string, std::string>& category_of);

// TSV with a header naming the embedding columns; one row per feature row,
// values at 17 significant digits (lossless for doubles).
void export_embeddings(const GcnModel& m, const FeatureMatrix& x,
                       const std::string& path);

// Column order of one row sorted by descending value; ties keep the
// canonical (ascending column) order.
std::vector<size_t> room_ranking(const DenseMatrix& values, size_t row);

// CSV rows (category, rank, room, affinity), rooms in descending affinity
// per category, ties toward the canonical room order.
void save_rankings_csv(const AffinityMatrix& a, const std::string& path);

}  // namespace roomgraph

#endif  // ROOMGRAPH_INFER_HPP_
