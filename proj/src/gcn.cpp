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
#include "roomgraph/gcn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "roomgraph/error.hpp"
#include "roomgraph/rng.hpp"

namespace roomgraph {

namespace {

std::vector<uint32_t> layer_dims(const GcnConfig& c) {
  std::vector<uint32_t> dims;
  dims.push_back(c.in_dim);
  dims.insert(dims.end(), c.hidden_dims.begin(), c.hidden_dims.end());
  dims.push_back(c.out_dim);
  for (uint32_t d : dims) {
    if (d == 0) throw Error::invalid_argument("gcn: layer dimension 0");
  }
  return dims;
}

}  // namespace

GcnModel init_weights(const GcnConfig& config) {
  const auto dims = layer_dims(config);
  GcnModel m;
  m.config = config;
  Rng rng(config.seed);
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseMatrix w(dims[l], dims[l + 1]);
    const double limit = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
    for (auto& v : w.data) v = rng.uniform(-limit, limit);
    m.weights.push_back(std::move(w));
    if (config.bias) m.biases.emplace_back(dims[l + 1], 0.0);
  }
  return m;
}

DenseMatrix forward(const GcnModel& m, const CsrMatrix& prop,
                    const DenseMatrix& x, ForwardCache* cache) {
  if (m.weights.empty()) throw Error::invalid_argument("gcn: empty model");
  if (x.cols != m.weights.front().rows) {
    throw Error::invalid_argument("gcn forward: feature dim " +
                                  std::to_string(x.cols) + " != in_dim " +
                                  std::to_string(m.weights.front().rows));
  }
  if (prop.rows != prop.cols || prop.rows != x.rows) {
    throw Error::invalid_argument(
        "gcn forward: propagation matrix does not match node count");
  }
  if (cache != nullptr) {
    *cache = ForwardCache{};
    cache->input = x;
  }
  DenseMatrix h = x;
  for (size_t l = 0; l < m.n_layers(); ++l) {
    DenseMatrix agg = spmm(prop, h);
    DenseMatrix pre = matmul(agg, m.weights[l]);
    if (!m.biases.empty()) {
      for (size_t i = 0; i < pre.rows; ++i) {
        for (size_t j = 0; j < pre.cols; ++j) pre.at(i, j) += m.biases[l][j];
      }
    }
    const bool last = l + 1 == m.n_layers();
    DenseMatrix post = last ? pre : relu(pre);
    if (cache != nullptr) {
      cache->agg.push_back(std::move(agg));
      cache->pre.push_back(pre);
      cache->post.push_back(post);
    }
    h = std::move(post);
  }
  return h;
}

Gradients backward(const GcnModel& m, const CsrMatrix& prop,
                   const ForwardCache& cache, const DenseMatrix& grad_out) {
  const size_t L = m.n_layers();
  if (cache.pre.size() != L || cache.agg.size() != L) {
    throw Error::invalid_argument("gcn backward: cache does not match model");
  }
  if (!grad_out.same_shape(cache.pre.back())) {
    throw Error::invalid_argument("gcn backward: grad shape mismatch");
  }
  Gradients g;
  g.weights.resize(L);
  if (!m.biases.empty()) g.biases.resize(L);

  DenseMatrix grad_h = grad_out;  // dLoss/dH(l+1) entering layer l
  for (size_t l = L; l-- > 0;) {
    DenseMatrix grad_pre = std::move(grad_h);
    if (l + 1 != L) {
      const DenseMatrix& pre = cache.pre[l];
      for (size_t i = 0; i < grad_pre.data.size(); ++i) {
        if (pre.data[i] <= 0.0) grad_pre.data[i] = 0.0;
      }
    }
    g.weights[l] = matmul_tn(cache.agg[l], grad_pre);
    if (!m.biases.empty()) {
      std::vector<double> gb(grad_pre.cols, 0.0);
      for (size_t i = 0; i < grad_pre.rows; ++i) {
        for (size_t j = 0; j < grad_pre.cols; ++j) gb[j] += grad_pre.at(i, j);
      }
      g.biases[l] = std::move(gb);
    }
    if (l > 0) {
      // dLoss/dH(l) = P^T (grad_pre W^T); P is symmetric.
      grad_h = spmm(prop, matmul_nt(grad_pre, m.weights[l]));
    }
  }
  return g;
}

namespace {

constexpr char kMagicPlain[4] = {'G', 'C', 'K', '1'};
constexpr char kMagicBias[4] = {'G', 'C', 'K', '2'};

uint64_t fnv1a(const void* data, size_t n, uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

struct ChecksumWriter {
  std::ostream& out;
  uint64_t hash = 0xcbf29ce484222325ull;

  void write(const void* data, size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    hash = fnv1a(data, n, hash);
  }
  void write_u32(uint32_t v) { write(&v, 4); }
};

struct ChecksumReader {
  std::istream& in;
  const std::string& path;
  uint64_t hash = 0xcbf29ce484222325ull;

  void read(void* data, size_t n) {
    if (!in.read(static_cast<char*>(data), static_cast<std::streamsize>(n))) {
      throw Error::format(path + ": truncated checkpoint");
    }
    hash = fnv1a(data, n, hash);
  }
  uint32_t read_u32() {
    uint32_t v = 0;
    read(&v, 4);
    return v;
  }
};

}  // namespace

void save_checkpoint(const GcnModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  const bool bias = !m.biases.empty();
  out.write(bias ? kMagicBias : kMagicPlain, 4);
  ChecksumWriter w{out};
  w.write_u32(static_cast<uint32_t>(m.n_layers()));
  for (size_t l = 0; l < m.n_layers(); ++l) {
    const DenseMatrix& wm = m.weights[l];
    w.write_u32(static_cast<uint32_t>(wm.rows));
    w.write_u32(static_cast<uint32_t>(wm.cols));
    w.write(wm.data.data(), wm.data.size() * sizeof(double));
    if (bias) w.write(m.biases[l].data(), m.biases[l].size() * sizeof(double));
  }
  out.write(reinterpret_cast<const char*>(&w.hash), 8);
  if (!out) throw Error::io("failed writing " + path);
}

GcnModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error::io("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4)) throw Error::format(path + ": truncated checkpoint");
  bool bias = false;
  if (std::memcmp(magic, kMagicBias, 4) == 0) {
    bias = true;
  } else if (std::memcmp(magic, kMagicPlain, 4) != 0) {
    throw Error::format(path + ": bad magic, expected GCK1 or GCK2");
  }

  GcnModel m;
  ChecksumReader r{in, path};
  const uint32_t n_layers = r.read_u32();
  if (n_layers == 0) throw Error::format(path + ": zero layers");
  for (uint32_t l = 0; l < n_layers; ++l) {
    const uint32_t rows = r.read_u32();
    const uint32_t cols = r.read_u32();
    if (rows == 0 || cols == 0) {
      throw Error::format(path + ": zero layer dimension");
    }
    if (!m.weights.empty() && m.weights.back().cols != rows) {
      throw Error::format(path + ": layer shape chain mismatch at layer " +
                          std::to_string(l));
    }
    DenseMatrix wm(rows, cols);
    r.read(wm.data.data(), wm.data.size() * sizeof(double));
    m.weights.push_back(std::move(wm));
    if (bias) {
      std::vector<double> b(cols);
      r.read(b.data(), b.size() * sizeof(double));
      m.biases.push_back(std::move(b));
    }
  }
  uint64_t stored = 0;
  if (!in.read(reinterpret_cast<char*>(&stored), 8)) {
    throw Error::format(path + ": missing checksum");
  }
  if (stored != r.hash) throw Error::format(path + ": checksum mismatch");
  char extra;
  if (in.read(&extra, 1)) {
    throw Error::format(path + ": trailing bytes after checksum");
  }
  for (const auto& wm : m.weights) {
    if (!wm.all_finite()) throw Error::format(path + ": non-finite weight");
  }

  m.config.in_dim = static_cast<uint32_t>(m.weights.front().rows);
  m.config.hidden_dims.clear();
  for (size_t l = 0; l + 1 < m.weights.size(); ++l) {
    m.config.hidden_dims.push_back(static_cast<uint32_t>(m.weights[l].cols));
  }
  m.config.out_dim = static_cast<uint32_t>(m.weights.back().cols);
  m.config.bias = bias;
  return m;
}

}  // namespace roomgraph
