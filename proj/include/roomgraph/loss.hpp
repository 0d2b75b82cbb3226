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
#ifndef ROOMGRAPH_LOSS_HPP_
#define ROOMGRAPH_LOSS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "roomgraph/kgraph.hpp"
#include "roomgraph/linalg.hpp"
#include "roomgraph/rng.hpp"

namespace roomgraph {

// One contrastive sample: a room anchor, an in-room positive image, K
// out-of-room negative images. weight_pos is the positive's room edge weight.
struct SampleBatch {
  uint32_t anchor = 0;
  uint32_t positive = 0;
  std::vector<uint32_t> negatives;  // distinct, none equal to positive
  double weight_pos = 0.0;
};

struct LossConfig {
  double temperature = 0.01;
  uint32_t negatives_per_sample = 10;  // K
  uint32_t samples_per_batch = 32;     // M
  // The denominator excludes the positive term by default; this flag adds it
  // back (standard InfoNCE) for ablation.
  bool include_positive = false;
};

// L = -exp(-weight_pos) * (sim_pos/T - logsumexp_i(sim_neg_i/T)), computed
// with max subtraction. May be negative; zero when the single negative
// similarity equals the positive one.
double loss_from_sims(double sim_pos, std::span<const double> sim_negs,
                      double temperature, double weight_pos,
                      bool include_positive = false);

// Gradient rows keyed by node id; only anchor, positive, and negative rows
// appear. Map keys give a deterministic accumulation order downstream.
using SparseRowGrads = std::map<uint32_t, std::vector<double>>;

// Similarities are cosines between the anchor row and the other rows; the
// gradient includes the cosine normalization Jacobian.
std::pair<double, SparseRowGrads> contrastive_loss(
    const DenseMatrix& embeddings, const SampleBatch& batch, double temperature,
    bool include_positive = false);

// Mean loss over the samples; gradients accumulated per row in sample order,
// then scaled by 1/M.
std::pair<double, SparseRowGrads> mean_batch_loss(
    const DenseMatrix& embeddings, const std::vector<SampleBatch>& batches,
    double temperature, bool include_positive = false);

// Draws samples from a built graph: anchor uniform over rooms with at least
// one training image, positive uniform within the room, negatives uniform
// without replacement from images with a different gt room. Room membership
// and weight_pos come from the graph's type-4 edges.
class BatchSampler {
 public:
  // Validates that every eligible anchor room has at least k outside images.
  BatchSampler(const KnowledgeGraph& g, uint32_t k);

  SampleBatch sample(Rng& rng) const;
  std::vector<SampleBatch> sample_batches(uint32_t m, Rng& rng) const;

  const std::vector<uint32_t>& eligible_rooms() const {
    return eligible_rooms_;
  }

 private:
  uint32_t k_;
  std::vector<uint32_t> eligible_rooms_;  // room indices with >= 1 image
  std::vector<std::vector<uint32_t>> room_images_;      // per room index
  std::vector<std::vector<uint32_t>> room_complement_;  // gt != room
  std::vector<double> image_pos_weight_;  // image node -> type-4 weight
  std::vector<uint32_t> room_node_;       // room index -> node id
};

}  // namespace roomgraph

#endif  // ROOMGRAPH_LOSS_HPP_
