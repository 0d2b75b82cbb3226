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
#include "roomgraph/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roomgraph/error.hpp"

namespace roomgraph {

double loss_from_sims(double sim_pos, std::span<const double> sim_negs,
                      double temperature, double weight_pos,
                      bool include_positive) {
  if (!(temperature > 0.0)) {
    throw Error::invalid_argument("loss: temperature must be > 0");
  }
  if (sim_negs.empty()) {
    throw Error::invalid_argument("loss: need at least one negative");
  }
  const double z_pos = sim_pos / temperature;
  double top = include_positive ? z_pos : sim_negs[0] / temperature;
  for (double s : sim_negs) top = std::max(top, s / temperature);
  double sum = include_positive ? std::exp(z_pos - top) : 0.0;
  for (double s : sim_negs) sum += std::exp(s / temperature - top);
  const double lse = top + std::log(sum);
  return -std::exp(-weight_pos) * (z_pos - lse);
}

namespace {

// d cos(x,y) / dx = y/(|x||y|) - cos * x/|x|^2, accumulated into out.
void add_cosine_grad_x(std::span<const double> x, std::span<const double> y,
                       double cos_xy, double coeff, std::vector<double>& out) {
  const double nx = norm(x);
  const double ny = norm(y);
  const double inv = 1.0 / (nx * ny);
  const double inv_x2 = 1.0 / (nx * nx);
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] += coeff * (y[i] * inv - cos_xy * x[i] * inv_x2);
  }
}

}  // namespace

std::pair<double, SparseRowGrads> contrastive_loss(const DenseMatrix& embeddings,
                                                   const SampleBatch& batch,
                                                   double temperature,
                                                   bool include_positive) {
  if (batch.negatives.empty()) {
    throw Error::invalid_argument("loss: batch has no negatives");
  }
  const auto check = [&](uint32_t id) {
    if (id >= embeddings.rows) {
      throw Error::invalid_argument("loss: node id " + std::to_string(id) +
                                    " out of range");
    }
  };
  check(batch.anchor);
  check(batch.positive);
  for (uint32_t id : batch.negatives) check(id);

  const auto anchor = embeddings.row(batch.anchor);
  const auto positive = embeddings.row(batch.positive);
  const double sim_pos = cosine(anchor, positive);
  std::vector<double> sim_negs(batch.negatives.size());
  for (size_t i = 0; i < batch.negatives.size(); ++i) {
    sim_negs[i] = cosine(anchor, embeddings.row(batch.negatives[i]));
  }

  const double loss = loss_from_sims(sim_pos, sim_negs, temperature,
                                     batch.weight_pos, include_positive);

  // Softmax over the denominator set, with the same max subtraction.
  const double z_pos = sim_pos / temperature;
  double top = include_positive ? z_pos : sim_negs[0] / temperature;
  for (double s : sim_negs) top = std::max(top, s / temperature);
  double sum = include_positive ? std::exp(z_pos - top) : 0.0;
  std::vector<double> p(sim_negs.size());
  for (size_t i = 0; i < sim_negs.size(); ++i) {
    p[i] = std::exp(sim_negs[i] / temperature - top);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  const double p_pos = include_positive ? std::exp(z_pos - top) / sum : 0.0;

  // dL/dsim_pos and dL/dsim_neg_i, before the cosine Jacobian.
  const double scale = -std::exp(-batch.weight_pos) / temperature;
  const double d_pos = scale * (1.0 - p_pos);
  std::vector<double> d_neg(p.size());
  for (size_t i = 0; i < p.size(); ++i) d_neg[i] = -scale * p[i];

  SparseRowGrads grads;
  const size_t dim = embeddings.cols;
  auto row_of = [&](uint32_t id) -> std::vector<double>& {
    auto [it, fresh] = grads.try_emplace(id);
    if (fresh) it->second.assign(dim, 0.0);
    return it->second;
  };
  // Anchor first (positive term, then negatives in order), then the others.
  add_cosine_grad_x(anchor, positive, sim_pos, d_pos, row_of(batch.anchor));
  for (size_t i = 0; i < batch.negatives.size(); ++i) {
    add_cosine_grad_x(anchor, embeddings.row(batch.negatives[i]), sim_negs[i],
                      d_neg[i], row_of(batch.anchor));
  }
  add_cosine_grad_x(positive, anchor, sim_pos, d_pos, row_of(batch.positive));
  for (size_t i = 0; i < batch.negatives.size(); ++i) {
    add_cosine_grad_x(embeddings.row(batch.negatives[i]), anchor, sim_negs[i],
                      d_neg[i], row_of(batch.negatives[i]));
  }
  return {loss, std::move(grads)};
}

std::pair<double, SparseRowGrads> mean_batch_loss(
    const DenseMatrix& embeddings, const std::vector<SampleBatch>& batches,
    double temperature, bool include_positive) {
  if (batches.empty()) {
    throw Error::invalid_argument("loss: empty batch list");
  }
  double total = 0.0;
  SparseRowGrads grads;
  for (const auto& b : batches) {
    auto [loss, g] = contrastive_loss(embeddings, b, temperature,
                                      include_positive);
    total += loss;
    for (auto& [id, row] : g) {
      auto [it, fresh] = grads.try_emplace(id);
      if (fresh) {
        it->second = std::move(row);
      } else {
        for (size_t i = 0; i < row.size(); ++i) it->second[i] += row[i];
      }
    }
  }
  const double inv_m = 1.0 / static_cast<double>(batches.size());
  for (auto& [id, row] : grads) {
    for (auto& v : row) v *= inv_m;
  }
  return {total * inv_m, std::move(grads)};
}

BatchSampler::BatchSampler(const KnowledgeGraph& g, uint32_t k) : k_(k) {
  if (k == 0) throw Error::invalid_argument("sampler: k must be >= 1");
  const size_t n_images = g.nodes.image_count();
  const size_t n_rooms = g.nodes.rooms.size();
  room_images_.resize(n_rooms);
  room_complement_.resize(n_rooms);
  image_pos_weight_.assign(n_images, 0.0);
  room_node_.resize(n_rooms);
  for (size_t r = 0; r < n_rooms; ++r) {
    room_node_[r] = g.nodes.room_node(r);
  }

  std::vector<uint32_t> image_room(n_images, static_cast<uint32_t>(n_rooms));
  for (const auto& e : g.edges) {
    if (e.etype != EdgeType::kCorrectRoom) continue;
    if (e.u >= n_images || e.v < n_images) {
      throw Error::validation("sampler: malformed type-4 edge");
    }
    const uint32_t room = e.v - static_cast<uint32_t>(n_images);
    if (image_room[e.u] != n_rooms) {
      throw Error::validation("sampler: image " + g.nodes.names[e.u] +
                              " has multiple room edges");
    }
    image_room[e.u] = room;
    image_pos_weight_[e.u] = e.weight;
  }
  for (uint32_t u = 0; u < n_images; ++u) {
    if (image_room[u] == n_rooms) {
      throw Error::validation("sampler: image " + g.nodes.names[u] +
                              " has no room edge");
    }
    room_images_[image_room[u]].push_back(u);
  }
  for (uint32_t r = 0; r < n_rooms; ++r) {
    for (uint32_t u = 0; u < n_images; ++u) {
      if (image_room[u] != r) room_complement_[r].push_back(u);
    }
    if (!room_images_[r].empty()) eligible_rooms_.push_back(r);
  }
  if (eligible_rooms_.empty()) {
    throw Error::validation("sampler: no room has training images");
  }
  for (uint32_t r : eligible_rooms_) {
    if (room_complement_[r].size() < k) {
      throw Error::validation(
          "sampler: room " + g.nodes.rooms[r] + " has only " +
          std::to_string(room_complement_[r].size()) +
          " outside images, need k=" + std::to_string(k));
    }
  }
}

SampleBatch BatchSampler::sample(Rng& rng) const {
  SampleBatch b;
  const uint32_t room = eligible_rooms_[rng.index(eligible_rooms_.size())];
  b.anchor = room_node_[room];
  const auto& in_room = room_images_[room];
  b.positive = in_room[rng.index(in_room.size())];
  b.negatives = rng.sample_without_replacement(room_complement_[room], k_);
  b.weight_pos = image_pos_weight_[b.positive];
  return b;
}

std::vector<SampleBatch> BatchSampler::sample_batches(uint32_t m,
                                                      Rng& rng) const {
  if (m == 0) throw Error::invalid_argument("sampler: m must be >= 1");
  std::vector<SampleBatch> out;
  out.reserve(m);
  for (uint32_t i = 0; i < m; ++i) out.push_back(sample(rng));
  return out;
}

}  // namespace roomgraph
