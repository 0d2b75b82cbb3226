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
#include "roomgraph/train.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "roomgraph/error.hpp"
#include "roomgraph/infer.hpp"
#include "roomgraph/metrics.hpp"
#include "roomgraph/rng.hpp"

namespace roomgraph {

using nlohmann::ordered_json;

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

void adam_update(std::vector<double>& p, const std::vector<double>& g,
                 std::vector<double>& m, std::vector<double>& v, double lr,
                 double bc1, double bc2) {
  for (size_t i = 0; i < p.size(); ++i) {
    m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
    v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
  }
}

}  // namespace

AdamState init_adam(const GcnModel& model) {
  AdamState s;
  for (const auto& w : model.weights) {
    s.m.emplace_back(w.rows, w.cols);
    s.v.emplace_back(w.rows, w.cols);
  }
  for (const auto& b : model.biases) {
    s.mb.emplace_back(b.size(), 0.0);
    s.vb.emplace_back(b.size(), 0.0);
  }
  return s;
}

void adam_step(GcnModel& model, const Gradients& grads, AdamState& state,
               double lr) {
  if (grads.weights.size() != model.weights.size() ||
      state.m.size() != model.weights.size()) {
    throw Error::invalid_argument("adam_step: layer count mismatch");
  }
  for (size_t l = 0; l < model.weights.size(); ++l) {
    if (!grads.weights[l].same_shape(model.weights[l])) {
      throw Error::invalid_argument("adam_step: gradient shape mismatch");
    }
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.t));
  for (size_t l = 0; l < model.weights.size(); ++l) {
    adam_update(model.weights[l].data, grads.weights[l].data, state.m[l].data,
                state.v[l].data, lr, bc1, bc2);
  }
  for (size_t l = 0; l < model.biases.size(); ++l) {
    adam_update(model.biases[l], grads.biases[l], state.mb[l], state.vb[l], lr,
                bc1, bc2);
  }
}

void save_train_log(const TrainLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  for (const auto& e : log.entries) {
    ordered_json j;
    j["step"] = e.step;
    j["loss"] = e.loss;
    if (e.has_eval) {
      j["val_map"] = e.val_map;
      ordered_json hits = ordered_json::object();
      for (const auto& [k, v] : e.val_hit) hits[std::to_string(k)] = v;
      j["val_hit"] = hits;
    }
    out << j.dump() << "\n";
  }
  if (!out) throw Error::io("failed writing " + path);
}

namespace {

double lr_at(const TrainConfig& cfg, uint32_t step) {
  if (cfg.schedule == LrSchedule::kConstant) return cfg.learning_rate;
  return cfg.learning_rate *
         std::pow(cfg.decay_factor, static_cast<double>(step / cfg.decay_every));
}

TrainLogEntry log_entry(uint32_t step, double loss, const GcnModel& model,
                        const SplitView* val, const GroundTruthMap* gt) {
  TrainLogEntry e;
  e.step = step;
  e.loss = loss;
  if (val != nullptr && gt != nullptr) {
    const AffinityMatrix per_image = image_affinities(
        model, val->image_x, val->image_names, val->room_x, val->room_names);
    const AffinityMatrix per_cat =
        aggregate_category(per_image, val->category_of);
    const EvalReport r = evaluate(per_cat, *gt);
    e.has_eval = true;
    e.val_map = r.map;
    e.val_hit = r.hit_ratio;
  }
  return e;
}

}  // namespace

TrainResult train(const KnowledgeGraph& graph, const DenseMatrix& features,
                  const GcnConfig& gcn_config, const TrainConfig& cfg,
                  const SplitView* val, const GroundTruthMap* gt) {
  if (cfg.steps < 1) throw Error::invalid_argument("train: steps must be >= 1");
  if (!(cfg.learning_rate > 0.0)) {
    throw Error::invalid_argument("train: learning_rate must be > 0");
  }
  if (cfg.schedule == LrSchedule::kStepDecay && cfg.decay_every == 0) {
    throw Error::invalid_argument("train: step decay needs decay_every >= 1");
  }
  if (features.rows != graph.nodes.node_count()) {
    throw Error::invalid_argument(
        "train: feature rows " + std::to_string(features.rows) +
        " != graph nodes " + std::to_string(graph.nodes.node_count()));
  }
  GcnConfig gc = gcn_config;
  if (gc.in_dim == 0) gc.in_dim = static_cast<uint32_t>(features.cols);
  if (gc.in_dim != features.cols) {
    throw Error::invalid_argument("train: in_dim " + std::to_string(gc.in_dim) +
                                  " != feature dim " +
                                  std::to_string(features.cols));
  }

  const CsrMatrix prop = propagation_matrix(graph);
  const BatchSampler sampler(graph, cfg.loss.negatives_per_sample);
  Rng rng(cfg.seed);
  GcnModel model = init_weights(gc);
  AdamState adam = init_adam(model);

  TrainResult result;
  for (uint32_t step = 0; step < cfg.steps; ++step) {
    ForwardCache cache;
    const DenseMatrix h = forward(model, prop, features, &cache);
    const auto batches =
        sampler.sample_batches(cfg.loss.samples_per_batch, rng);
    auto [loss, rows] = mean_batch_loss(h, batches, cfg.loss.temperature,
                                        cfg.loss.include_positive);
    if (!std::isfinite(loss)) {
      throw Error::internal(
          "train: non-finite loss at step " + std::to_string(step) +
          " (learning rate or temperature likely too aggressive)");
    }
    if (step == 0 || (cfg.eval_every > 0 && step % cfg.eval_every == 0)) {
      result.log.entries.push_back(log_entry(step, loss, model, val, gt));
    }

    DenseMatrix grad_h(h.rows, h.cols);
    for (const auto& [id, row] : rows) {
      std::copy(row.begin(), row.end(), grad_h.row(id).begin());
    }
    const Gradients grads = backward(model, prop, cache, grad_h);
    adam_step(model, grads, adam, lr_at(cfg, step));
  }

  // Final entry: loss of the trained model on a fresh sample.
  const DenseMatrix h = forward(model, prop, features);
  const auto batches = sampler.sample_batches(cfg.loss.samples_per_batch, rng);
  const double final_loss =
      mean_batch_loss(h, batches, cfg.loss.temperature,
                      cfg.loss.include_positive)
          .first;
  if (!std::isfinite(final_loss)) {
    throw Error::internal("train: non-finite loss after final step");
  }
  result.log.entries.push_back(
      log_entry(cfg.steps, final_loss, model, val, gt));
  result.model = std::move(model);
  return result;
}

double tune_temperature(const std::vector<double>& candidates,
                        const KnowledgeGraph& graph,
                        const DenseMatrix& features,
                        const GcnConfig& gcn_config, const TrainConfig& cfg,
                        const SplitView& val, const GroundTruthMap& gt) {
  if (candidates.empty()) {
    throw Error::invalid_argument("tune_temperature: no candidates");
  }
  double best_t = 0.0;
  double best_map = -1.0;
  for (double t : candidates) {
    if (!(t > 0.0)) {
      throw Error::invalid_argument("tune_temperature: temperature <= 0");
    }
    TrainConfig c = cfg;
    c.loss.temperature = t;
    const TrainResult r = train(graph, features, gcn_config, c);
    const AffinityMatrix per_image = image_affinities(
        r.model, val.image_x, val.image_names, val.room_x, val.room_names);
    const AffinityMatrix per_cat =
        aggregate_category(per_image, val.category_of);
    const double map = mean_ap(per_cat, gt);
    if (map > best_map || (map == best_map && t < best_t)) {
      best_map = map;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace roomgraph
