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
#include "roomgraph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "roomgraph/error.hpp"

namespace roomgraph {

DenseMatrix::DenseMatrix(size_t r, size_t c, std::vector<double> d)
    : rows(r), cols(c), data(std::move(d)) {
  if (data.size() != rows * cols) {
    throw Error::invalid_argument("DenseMatrix: data length != rows*cols");
  }
}

bool DenseMatrix::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

CsrMatrix CsrMatrix::identity(size_t n) {
  CsrMatrix m;
  m.rows = n;
  m.cols = n;
  m.row_offsets.resize(n + 1);
  m.col_indices.resize(n);
  m.values.assign(n, 1.0);
  for (size_t i = 0; i < n; ++i) {
    m.row_offsets[i] = i;
    m.col_indices[i] = static_cast<uint32_t>(i);
  }
  m.row_offsets[n] = n;
  return m;
}

CsrMatrix CsrMatrix::from_triplets(
    size_t rows, size_t cols,
    const std::vector<std::tuple<uint32_t, uint32_t, double>>& triplets) {
  std::vector<std::map<uint32_t, double>> by_row(rows);
  for (const auto& [r, c, v] : triplets) {
    if (r >= rows || c >= cols) {
      throw Error::invalid_argument("CsrMatrix::from_triplets: index out of range");
    }
    by_row[r][c] += v;
  }
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.resize(rows + 1, 0);
  for (size_t i = 0; i < rows; ++i) {
    m.row_offsets[i + 1] = m.row_offsets[i] + by_row[i].size();
    for (const auto& [c, v] : by_row[i]) {
      m.col_indices.push_back(c);
      m.values.push_back(v);
    }
  }
  return m;
}

double CsrMatrix::get(size_t i, size_t j) const {
  for (size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
    if (col_indices[k] == j) return values[k];
  }
  return 0.0;
}

void CsrMatrix::validate() const {
  if (row_offsets.size() != rows + 1 || row_offsets.front() != 0 ||
      row_offsets.back() != values.size() ||
      col_indices.size() != values.size()) {
    throw Error::validation("CsrMatrix: inconsistent structure");
  }
  for (size_t i = 0; i < rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) {
      throw Error::validation("CsrMatrix: row offsets not monotone");
    }
    for (size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      if (col_indices[k] >= cols) {
        throw Error::validation("CsrMatrix: column index out of range");
      }
      if (k > row_offsets[i] && col_indices[k - 1] >= col_indices[k]) {
        throw Error::validation("CsrMatrix: columns not strictly sorted");
      }
    }
  }
}

DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) {
    throw Error::invalid_argument("spmm: shape mismatch");
  }
  DenseMatrix out(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    double* out_row = out.data.data() + i * out.cols;
    // Ascending column index: fixed summation order per output element.
    for (size_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
      const double v = a.values[k];
      const double* b_row = b.data.data() + a.col_indices[k] * b.cols;
      for (size_t j = 0; j < b.cols; ++j) {
        out_row[j] += v * b_row[j];
      }
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) {
    throw Error::invalid_argument("matmul: shape mismatch");
  }
  DenseMatrix out(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    double* out_row = out.data.data() + i * out.cols;
    for (size_t k = 0; k < a.cols; ++k) {
      const double v = a.at(i, k);
      const double* b_row = b.data.data() + k * b.cols;
      for (size_t j = 0; j < b.cols; ++j) {
        out_row[j] += v * b_row[j];
      }
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows) {
    throw Error::invalid_argument("matmul_tn: shape mismatch");
  }
  DenseMatrix out(a.cols, b.cols);
  for (size_t k = 0; k < a.rows; ++k) {
    const double* a_row = a.data.data() + k * a.cols;
    const double* b_row = b.data.data() + k * b.cols;
    for (size_t i = 0; i < a.cols; ++i) {
      double* out_row = out.data.data() + i * out.cols;
      const double v = a_row[i];
      for (size_t j = 0; j < b.cols; ++j) {
        out_row[j] += v * b_row[j];
      }
    }
  }
  return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.cols) {
    throw Error::invalid_argument("matmul_nt: shape mismatch");
  }
  DenseMatrix out(a.rows, b.rows);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t j = 0; j < b.rows; ++j) {
      double acc = 0.0;
      const double* a_row = a.data.data() + i * a.cols;
      const double* b_row = b.data.data() + j * b.cols;
      for (size_t k = 0; k < a.cols; ++k) {
        acc += a_row[k] * b_row[k];
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

DenseMatrix relu(const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& v : out.data) {
    if (v < 0.0) v = 0.0;
  }
  return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error::invalid_argument("dot: length mismatch");
  }
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double cosine(std::span<const double> x, std::span<const double> y) {
  const double nx = norm(x);
  const double ny = norm(y);
  if (!(nx > 0.0) || !(ny > 0.0) || !std::isfinite(nx) || !std::isfinite(ny)) {
    throw Error::invalid_argument("cosine: vector with zero or non-finite norm");
  }
  return dot(x, y) / (nx * ny);
}

}  // namespace roomgraph
