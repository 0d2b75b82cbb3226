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
#ifndef ROOMGRAPH_METRICS_HPP_
#define ROOMGRAPH_METRICS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roomgraph/annotations.hpp"
#include "roomgraph/infer.hpp"

namespace roomgraph {

struct CategoryAp {
  std::string category;
  std::string gt_room;
  uint32_t gt_rank = 0;  // 1-based rank of the gt room
  double ap = 0.0;
};

struct EvalReport {
  double map = 0.0;
  std::map<uint32_t, double> hit_ratio;  // k -> fraction
  std::vector<CategoryAp> per_category;
};

// Mean over relevant items of precision at their rank. With a single
// relevant room at rank r this is exactly 1/r.
double average_precision(const std::vector<std::string>& ranking,
                         const std::vector<std::string>& relevant);

// Per-category ranking by descending affinity (ties toward canonical room
// order), single relevant room from gt, unweighted mean of the APs.
double mean_ap(const AffinityMatrix& affinity, const GroundTruthMap& gt);

// Fraction of categories whose gt room is among their top-k rooms.
double topk_hit_ratio(const AffinityMatrix& affinity, const GroundTruthMap& gt,
                      uint32_t k);

// Full report; ks out of range for the room count are dropped.
EvalReport evaluate(const AffinityMatrix& affinity, const GroundTruthMap& gt,
                    const std::vector<uint32_t>& ks = {1, 3, 5});

std::string eval_report_json(const EvalReport& r);

}  // namespace roomgraph

#endif  // ROOMGRAPH_METRICS_HPP_
