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
#ifndef ROOMGRAPH_LINALG_HPP_
#define ROOMGRAPH_LINALG_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace roomgraph {

// Row-major dense matrix, double precision. All kernels below use a fixed
// summation order, so results are bit-deterministic for fixed inputs.
struct DenseMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  DenseMatrix(size_t r, size_t c, std::vector<double> d);

  double& at(size_t i, size_t j) { return data[i * cols + j]; }
  double at(size_t i, size_t j) const { return data[i * cols + j]; }
  std::span<double> row(size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(size_t i) const {
    return {data.data() + i * cols, cols};
  }
  bool same_shape(const DenseMatrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
  bool all_finite() const;
};

// Compressed sparse row. Column indices are sorted within each row; that
// order is also the summation order of spmm.
struct CsrMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<size_t> row_offsets;   // size rows + 1
  std::vector<uint32_t> col_indices;
  std::vector<double> values;

  static CsrMatrix identity(size_t n);
  // Builds from (row, col, value) triplets; duplicates are summed.
  static CsrMatrix from_triplets(
      size_t rows, size_t cols,
      const std::vector<std::tuple<uint32_t, uint32_t, double>>& triplets);

  size_t nnz() const { return values.size(); }
  double get(size_t i, size_t j) const;
  void validate() const;  // offsets monotone, columns sorted and in range
};

DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// aT * b without materializing the transpose (a: k x m, b: k x n -> m x n).
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
// a * bT (a: m x k, b: n x k -> m x n).
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix relu(const DenseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
// Throws on zero or non-finite norms; never returns NaN.
double cosine(std::span<const double> x, std::span<const double> y);

}  // namespace roomgraph

#endif  // ROOMGRAPH_LINALG_HPP_
