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
#ifndef ROOMGRAPH_GCN_HPP_
#define ROOMGRAPH_GCN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "roomgraph/linalg.hpp"

namespace roomgraph {

struct GcnConfig {
  uint32_t in_dim = 0;
  std::vector<uint32_t> hidden_dims{256};
  uint32_t out_dim = 128;
  uint64_t seed = 0;
  bool bias = false;
};

// Stacked layers H(l+1) = relu(P H(l) W(l) [+ b(l)]); the final layer is
// linear so embeddings keep signed components for cosine similarity.
struct GcnModel {
  GcnConfig config;
  std::vector<DenseMatrix> weights;         // layer l: dims[l] x dims[l+1]
  std::vector<std::vector<double>> biases;  // empty unless config.bias

  size_t n_layers() const { return weights.size(); }
};

struct ForwardCache {
  DenseMatrix input;
  std::vector<DenseMatrix> agg;   // per layer: P * H_in
  std::vector<DenseMatrix> pre;   // per layer: agg * W (+ b)
  std::vector<DenseMatrix> post;  // activation(pre); last layer = pre
};

struct Gradients {
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> biases;
};

// Glorot-uniform weights, drawn layer by layer in row-major order from the
// config seed. Biases (when enabled) start at zero.
GcnModel init_weights(const GcnConfig& config);

// prop must be square with dimension x.rows. Pass a cache to enable backward.
DenseMatrix forward(const GcnModel& m, const CsrMatrix& prop,
                    const DenseMatrix& x, ForwardCache* cache = nullptr);

// Exact gradients of forward with respect to weights (and biases); relies on
// prop being symmetric. grad_out is dLoss/dH for the final embeddings.
Gradients backward(const GcnModel& m, const CsrMatrix& prop,
                   const ForwardCache& cache, const DenseMatrix& grad_out);

// "GCK1": magic, u32 layer count, per layer u32 rows, u32 cols, rows*cols
// f64 values, trailing u64 checksum over everything after the magic. Models
// with biases use magic "GCK2" and append cols f64 bias values per layer.
void save_checkpoint(const GcnModel& m, const std::string& path);
GcnModel load_checkpoint(const std::string& path);

}  // namespace roomgraph

#endif  // ROOMGRAPH_GCN_HPP_
