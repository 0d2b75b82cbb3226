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
#include "roomgraph/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "roomgraph/error.hpp"

namespace roomgraph {

using nlohmann::ordered_json;

std::pair<double, double> receptacle_reciprocal(std::span<const int> ranks) {
  if (ranks.empty()) {
    throw Error::invalid_argument("receptacle_reciprocal: ranks empty");
  }
  double pos_sum = 0.0, neg_sum = 0.0;
  size_t pos_n = 0, neg_n = 0;
  for (int r : ranks) {
    if (r > 0) {
      pos_sum += 1.0 / static_cast<double>(r);
      ++pos_n;
    } else if (r < 0) {
      neg_sum += 1.0 / static_cast<double>(-r);
      ++neg_n;
    }
  }
  const double pos = pos_n ? pos_sum / static_cast<double>(pos_n) : 0.0;
  const double neg = neg_n ? neg_sum / static_cast<double>(neg_n) : 0.0;
  return {pos, neg};
}

SoftScoreTable SoftScoreTable::from_receptacle_scores(
    const std::vector<ReceptacleScore>& scores) {
  // Key receptacles by id so aggregation order is independent of input order.
  std::map<Key, std::map<std::string, ReceptacleScore>> grouped;
  for (const auto& s : scores) {
    auto& per_pair = grouped[{s.object_id, s.room_id}];
    if (!per_pair.emplace(s.receptacle_id, s).second) {
      throw Error::validation("duplicate (object, room, receptacle) tuple: " +
                              s.object_id + "/" + s.room_id + "/" +
                              s.receptacle_id);
    }
  }
  SoftScoreTable table;
  for (auto& [key, per_pair] : grouped) {
    PairScores p;
    double pos_sum = 0.0, neg_sum = 0.0;
    for (auto& [rid, score] : per_pair) {
      pos_sum += score.pos;
      neg_sum += score.neg;
      p.max_receptacle_pos = std::max(p.max_receptacle_pos, score.pos);
      p.receptacles.push_back(score);
    }
    const double n = static_cast<double>(per_pair.size());
    p.pos_score = pos_sum / n;
    p.neg_score = neg_sum / n;
    table.pairs_[key] = std::move(p);
  }
  return table;
}

const PairScores* SoftScoreTable::find(const std::string& object_id,
                                       const std::string& room_id) const {
  auto it = pairs_.find({object_id, room_id});
  return it == pairs_.end() ? nullptr : &it->second;
}

std::vector<std::string> SoftScoreTable::objects() const {
  std::set<std::string> s;
  for (const auto& [key, unused] : pairs_) s.insert(key.first);
  return {s.begin(), s.end()};
}

std::vector<std::string> SoftScoreTable::rooms() const {
  std::set<std::string> s;
  for (const auto& [key, unused] : pairs_) s.insert(key.second);
  return {s.begin(), s.end()};
}

double GroundTruthMap::negative_for(const std::string& object_id,
                                    const std::string& room_id) const {
  auto it = negative_weight.find({object_id, room_id});
  return it == negative_weight.end() ? 0.0 : it->second;
}

SoftScoreTable compute_soft_scores(const std::vector<AnnotationRecord>& records,
                                   int min_opinions) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::vector<ReceptacleScore> scores;
  scores.reserve(records.size());
  for (const auto& rec : records) {
    if (!seen.emplace(rec.object_id, rec.room_id, rec.receptacle_id).second) {
      throw Error::validation("duplicate (object, room, receptacle) tuple: " +
                              rec.object_id + "/" + rec.room_id + "/" +
                              rec.receptacle_id);
    }
    int opinions = 0;
    for (int r : rec.ranks) {
      if (r != 0) ++opinions;
    }
    if (opinions < min_opinions) continue;
    auto [pos, neg] = receptacle_reciprocal(rec.ranks);
    scores.push_back({rec.object_id, rec.room_id, rec.receptacle_id, pos, neg});
  }
  return SoftScoreTable::from_receptacle_scores(scores);
}

GroundTruthMap ground_truth_map(const SoftScoreTable& table,
                                const std::vector<std::string>& rooms) {
  std::vector<std::string> sorted_rooms = rooms;
  std::sort(sorted_rooms.begin(), sorted_rooms.end());

  GroundTruthMap gt;
  gt.rooms = sorted_rooms;
  std::vector<std::string> missing;
  for (const auto& object : table.objects()) {
    std::string best_room;
    double best = 0.0;
    for (const auto& room : sorted_rooms) {
      const PairScores* p = table.find(object, room);
      if (p == nullptr) continue;
      // Strict >: ties resolve to the room earlier in sorted order.
      if (p->max_receptacle_pos > best) {
        best = p->max_receptacle_pos;
        best_room = room;
      }
    }
    if (best_room.empty()) {
      missing.push_back(object);
      continue;
    }
    gt.gt_room[object] = best_room;
    for (const auto& room : sorted_rooms) {
      if (room == best_room) continue;
      const PairScores* p = table.find(object, room);
      if (p != nullptr && p->neg_score != 0.0) {
        gt.negative_weight[{object, room}] = p->neg_score;
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "no ground truth (no positive receptacle score) for:";
    for (const auto& o : missing) msg += " " + o;
    throw Error::validation(msg);
  }
  return gt;
}

namespace {

ordered_json parse_line(const std::string& line, const std::string& path,
                        size_t lineno) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    throw Error::format(path + ":" + std::to_string(lineno) +
                        ": invalid JSON");
  }
  return j;
}

std::string require_string(const ordered_json& j, const char* key,
                           const std::string& context) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error::format(context + ": missing string field \"" + key + "\"");
  }
  return j[key].get<std::string>();
}

}  // namespace

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::io("cannot open " + path);
  std::vector<AnnotationRecord> records;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string context = path + ":" + std::to_string(lineno);
    ordered_json j = parse_line(line, path, lineno);
    AnnotationRecord rec;
    rec.object_id = require_string(j, "object", context);
    rec.room_id = require_string(j, "room", context);
    rec.receptacle_id = require_string(j, "receptacle", context);
    if (!j.contains("ranks") || !j["ranks"].is_array() || j["ranks"].empty()) {
      throw Error::format(context + ": \"ranks\" must be a non-empty array");
    }
    for (const auto& r : j["ranks"]) {
      if (!r.is_number_integer()) {
        throw Error::format(context + ": ranks must be integers");
      }
      rec.ranks.push_back(r.get<int>());
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void save_annotations(const std::vector<AnnotationRecord>& records,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  for (const auto& rec : records) {
    ordered_json j;
    j["object"] = rec.object_id;
    j["room"] = rec.room_id;
    j["receptacle"] = rec.receptacle_id;
    j["ranks"] = rec.ranks;
    out << j.dump() << "\n";
  }
  if (!out) throw Error::io("failed writing " + path);
}

std::vector<ReceptacleScore> load_receptacle_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::io("cannot open " + path);
  std::vector<ReceptacleScore> scores;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string context = path + ":" + std::to_string(lineno);
    ordered_json j = parse_line(line, path, lineno);
    ReceptacleScore s;
    s.object_id = require_string(j, "object", context);
    s.room_id = require_string(j, "room", context);
    s.receptacle_id = require_string(j, "receptacle", context);
    if (!j.contains("pos") || !j.contains("neg") || !j["pos"].is_number() ||
        !j["neg"].is_number()) {
      throw Error::format(context + ": \"pos\"/\"neg\" must be numbers");
    }
    s.pos = j["pos"].get<double>();
    s.neg = j["neg"].get<double>();
    if (!std::isfinite(s.pos) || !std::isfinite(s.neg) || s.pos < 0.0 ||
        s.pos > 1.0 || s.neg < 0.0 || s.neg > 1.0) {
      throw Error::format(context + ": scores must lie in [0, 1]");
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

void save_receptacle_scores(const std::vector<ReceptacleScore>& scores,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  for (const auto& s : scores) {
    ordered_json j;
    j["object"] = s.object_id;
    j["room"] = s.room_id;
    j["receptacle"] = s.receptacle_id;
    j["pos"] = s.pos;
    j["neg"] = s.neg;
    out << j.dump() << "\n";
  }
  if (!out) throw Error::io("failed writing " + path);
}

}  // namespace roomgraph
