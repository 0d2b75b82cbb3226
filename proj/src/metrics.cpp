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
#include "roomgraph/metrics.hpp"

#include <algorithm>

#include "json.hpp"
#include "roomgraph/error.hpp"

namespace roomgraph {

using nlohmann::ordered_json;

double average_precision(const std::vector<std::string>& ranking,
                         const std::vector<std::string>& relevant) {
  if (relevant.empty()) {
    throw Error::invalid_argument("average_precision: empty relevant set");
  }
  for (const auto& r : relevant) {
    if (std::find(ranking.begin(), ranking.end(), r) == ranking.end()) {
      throw Error::invalid_argument(
          "average_precision: relevant item not in ranking: " + r);
    }
  }
  double sum = 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < ranking.size(); ++i) {
    if (std::find(relevant.begin(), relevant.end(), ranking[i]) !=
        relevant.end()) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

namespace {

// 1-based rank of each category's gt room under descending affinity.
std::vector<CategoryAp> per_category_ranks(const AffinityMatrix& affinity,
                                           const GroundTruthMap& gt) {
  std::vector<CategoryAp> out;
  out.reserve(affinity.row_names.size());
  for (size_t i = 0; i < affinity.row_names.size(); ++i) {
    const auto& cat = affinity.row_names[i];
    const auto it = gt.gt_room.find(cat);
    if (it == gt.gt_room.end()) {
      throw Error::validation("no ground truth room for category: " + cat);
    }
    const auto rit = std::find(affinity.room_names.begin(),
                               affinity.room_names.end(), it->second);
    if (rit == affinity.room_names.end()) {
      throw Error::validation("gt room " + it->second +
                              " not among affinity columns");
    }
    const size_t gt_col = rit - affinity.room_names.begin();
    const auto order = room_ranking(affinity.values, i);
    CategoryAp c;
    c.category = cat;
    c.gt_room = it->second;
    for (size_t r = 0; r < order.size(); ++r) {
      if (order[r] == gt_col) {
        c.gt_rank = static_cast<uint32_t>(r + 1);
        break;
      }
    }
    c.ap = 1.0 / c.gt_rank;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

double mean_ap(const AffinityMatrix& affinity, const GroundTruthMap& gt) {
  if (affinity.row_names.empty()) {
    throw Error::invalid_argument("mean_ap: no categories");
  }
  const auto ranks = per_category_ranks(affinity, gt);
  double sum = 0.0;
  for (const auto& c : ranks) sum += c.ap;
  return sum / static_cast<double>(ranks.size());
}

double topk_hit_ratio(const AffinityMatrix& affinity, const GroundTruthMap& gt,
                      uint32_t k) {
  if (k < 1 || k > affinity.room_names.size()) {
    throw Error::invalid_argument("topk_hit_ratio: k out of range");
  }
  if (affinity.row_names.empty()) {
    throw Error::invalid_argument("topk_hit_ratio: no categories");
  }
  const auto ranks = per_category_ranks(affinity, gt);
  size_t hits = 0;
  for (const auto& c : ranks) {
    if (c.gt_rank <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

EvalReport evaluate(const AffinityMatrix& affinity, const GroundTruthMap& gt,
                    const std::vector<uint32_t>& ks) {
  if (affinity.row_names.empty()) {
    throw Error::invalid_argument("evaluate: no categories");
  }
  EvalReport r;
  r.per_category = per_category_ranks(affinity, gt);
  double sum = 0.0;
  for (const auto& c : r.per_category) sum += c.ap;
  r.map = sum / static_cast<double>(r.per_category.size());
  for (uint32_t k : ks) {
    if (k < 1 || k > affinity.room_names.size()) continue;
    size_t hits = 0;
    for (const auto& c : r.per_category) {
      if (c.gt_rank <= k) ++hits;
    }
    r.hit_ratio[k] =
        static_cast<double>(hits) / static_cast<double>(r.per_category.size());
  }
  return r;
}

std::string eval_report_json(const EvalReport& r) {
  ordered_json j;
  j["map"] = r.map;
  ordered_json hits = ordered_json::object();
  for (const auto& [k, v] : r.hit_ratio) hits[std::to_string(k)] = v;
  j["hit_ratio"] = hits;
  ordered_json per = ordered_json::array();
  for (const auto& c : r.per_category) {
    ordered_json e;
    e["category"] = c.category;
    e["gt_room"] = c.gt_room;
    e["gt_rank"] = c.gt_rank;
    e["ap"] = c.ap;
    per.push_back(e);
  }
  j["per_category"] = per;
  return j.dump(2) + "\n";
}

}  // namespace roomgraph
