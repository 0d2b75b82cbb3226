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
#ifndef ROOMGRAPH_RNG_HPP_
#define ROOMGRAPH_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "roomgraph/error.hpp"

namespace roomgraph {

// Deterministic random source. The std engine is seeded and stepped as
// specified by the standard, but all value mappings (uniform reals, normals,
// bounded indices, shuffles) are implemented here so that seeded runs are
// byte-reproducible across standard libraries. std::*_distribution is
// implementation-defined and must not be used anywhere in this project.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). The modulo bias is below 2^-52 for every n used
  // in this project (n < 2^32).
  size_t index(size_t n) {
    if (n == 0) throw Error::invalid_argument("Rng::index: n must be > 0");
    return static_cast<size_t>(next_u64() % static_cast<uint64_t>(n));
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Avoid log(0).
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Floyd's algorithm: k distinct values from pool, order given by insertion.
  template <typename T>
  std::vector<T> sample_without_replacement(const std::vector<T>& pool,
                                            size_t k) {
    if (k > pool.size()) {
      throw Error::invalid_argument(
          "sample_without_replacement: k exceeds pool size");
    }
    std::vector<T> picked;
    picked.reserve(k);
    for (size_t j = pool.size() - k; j < pool.size(); ++j) {
      size_t t = index(j + 1);
      const T& candidate = pool[t];
      bool seen = false;
      for (const T& p : picked) {
        if (p == candidate) {
          seen = true;
          break;
        }
      }
      picked.push_back(seen ? pool[j] : candidate);
    }
    return picked;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace roomgraph

#endif  // ROOMGRAPH_RNG_HPP_
