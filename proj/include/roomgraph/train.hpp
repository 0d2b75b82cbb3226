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
#ifndef ROOMGRAPH_TRAIN_HPP_
#define ROOMGRAPH_TRAIN_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roomgraph/dataset.hpp"
#include "roomgraph/gcn.hpp"
#include "roomgraph/kgraph.hpp"
#include "roomgraph/loss.hpp"

namespace roomgraph {

enum class LrSchedule { kConstant, kStepDecay };

struct TrainConfig {
  uint32_t steps = 500;
  double learning_rate = 1e-3;
  LrSchedule schedule = LrSchedule::kConstant;
  uint32_t decay_every = 0;    // step-decay period; required when selected
  double decay_factor = 0.5;
  LossConfig loss;
  uint64_t seed = 0;
  uint32_t eval_every = 0;  // 0: log only the first and final step
};

struct AdamState {
  std::vector<DenseMatrix> m, v;
  std::vector<std::vector<double>> mb, vb;
  uint64_t t = 0;
};

AdamState init_adam(const GcnModel& model);

// Standard Adam (beta1 0.9, beta2 0.999, eps 1e-8) with bias correction.
void adam_step(GcnModel& model, const Gradients& grads, AdamState& state,
               double lr);

// Entry at step s describes the model after s updates; loss comes from a
// fresh batch sample at that point.
struct TrainLogEntry {
  uint32_t step = 0;
  double loss = 0.0;
  bool has_eval = false;
  double val_map = 0.0;
  std::map<uint32_t, double> val_hit;
};

struct TrainLog {
  std::vector<TrainLogEntry> entries;
};

// JSON lines: {"step":..,"loss":..} plus "val_map"/"val_hit" on eval entries.
void save_train_log(const TrainLog& log, const std::string& path);

struct TrainResult {
  GcnModel model;
  TrainLog log;
};

// Full-graph training. features rows follow the graph node order. When val
// and gt are given, eval entries carry validation mAP and hit ratios.
TrainResult train(const KnowledgeGraph& graph, const DenseMatrix& features,
                  const GcnConfig& gcn_config, const TrainConfig& cfg,
                  const SplitView* val = nullptr,
                  const GroundTruthMap* gt = nullptr);

// Trains one model per candidate with the same seed and returns the
// temperature with the highest validation mAP; ties go to the smaller T.
double tune_temperature(const std::vector<double>& candidates,
                        const KnowledgeGraph& graph,
                        const DenseMatrix& features,
                        const GcnConfig& gcn_config, const TrainConfig& cfg,
                        const SplitView& val, const GroundTruthMap& gt);

}  // namespace roomgraph

#endif  // ROOMGRAPH_TRAIN_HPP_
