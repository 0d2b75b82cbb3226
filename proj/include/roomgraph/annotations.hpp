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
#ifndef ROOMGRAPH_ANNOTATIONS_HPP_
#define ROOMGRAPH_ANNOTATIONS_HPP_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace roomgraph {

// One object-room-receptacle tuple with per-annotator signed ranks.
// rank r > 0: ranked r-th under "correct"; r < 0: ranked |r|-th under
// "misplaced"; 0: no opinion.
struct AnnotationRecord {
  std::string object_id;
  std::string room_id;
  std::string receptacle_id;
  std::vector<int> ranks;
};

struct ReceptacleScore {
  std::string object_id;
  std::string room_id;
  std::string receptacle_id;
  double pos = 0.0;
  double neg = 0.0;
};

// Room-level aggregation of one (object, room) pair.
struct PairScores {
  double pos_score = 0.0;          // mean of receptacle pos values
  double neg_score = 0.0;          // mean of receptacle neg values
  double max_receptacle_pos = 0.0;
  std::vector<ReceptacleScore> receptacles;  // sorted by receptacle_id
};

class SoftScoreTable {
 public:
  using Key = std::pair<std::string, std::string>;  // (object, room)

  // Aggregates receptacle scores into room-level pairs. Receptacles are
  // sorted by id within each pair; means are taken in that order.
  static SoftScoreTable from_receptacle_scores(
      const std::vector<ReceptacleScore>& scores);

  const PairScores* find(const std::string& object_id,
                         const std::string& room_id) const;
  const std::map<Key, PairScores>& pairs() const { return pairs_; }
  std::vector<std::string> objects() const;  // sorted unique
  std::vector<std::string> rooms() const;    // sorted unique
  bool empty() const { return pairs_.empty(); }

 private:
  std::map<Key, PairScores> pairs_;
};

struct GroundTruthMap {
  std::vector<std::string> rooms;  // canonical (sorted) room order
  std::map<std::string, std::string> gt_room;  // object -> room
  // (object, non-gt room) -> that pair's neg_score (>= 0; the graph stores
  // the negated value on the corresponding edge). Missing pairs mean 0.
  std::map<std::pair<std::string, std::string>, double> negative_weight;

  double negative_for(const std::string& object_id,
                      const std::string& room_id) const;
};

// pos = mean over annotators with rank > 0 of 1/rank, 0 if none;
// neg = mean over annotators with rank < 0 of 1/|rank|, 0 if none.
std::pair<double, double> receptacle_reciprocal(std::span<const int> ranks);

// min_opinions: receptacle tuples with fewer opining (nonzero-rank)
// annotators are dropped before aggregation.
SoftScoreTable compute_soft_scores(const std::vector<AnnotationRecord>& records,
                                   int min_opinions = 1);

// gt room = room holding the object's globally highest receptacle pos score;
// ties broken toward the room earlier in canonical sorted order.
GroundTruthMap ground_truth_map(const SoftScoreTable& table,
                                const std::vector<std::string>& rooms);

// UTF-8 JSON lines, one AnnotationRecord per line:
// {"object": "...", "room": "...", "receptacle": "...", "ranks": [1,2,-1,0]}
std::vector<AnnotationRecord> load_annotations(const std::string& path);
void save_annotations(const std::vector<AnnotationRecord>& records,
                      const std::string& path);

// Receptacle-level scores as JSON lines:
// {"object": "...", "room": "...", "receptacle": "...", "pos": x, "neg": y}
std::vector<ReceptacleScore> load_receptacle_scores(const std::string& path);
void save_receptacle_scores(const std::vector<ReceptacleScore>& scores,
                            const std::string& path);

}  // namespace roomgraph

#endif  // ROOMGRAPH_ANNOTATIONS_HPP_
