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
#include "roomgraph/infer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "roomgraph/error.hpp"

namespace roomgraph {

DenseMatrix embed_selfedges(const GcnModel& m, const DenseMatrix& x) {
  return forward(m, CsrMatrix::identity(x.rows), x);
}

namespace {

void check_nonzero_rows(const DenseMatrix& h,
                        const std::vector<std::string>& names,
                        const char* what) {
  for (size_t i = 0; i < h.rows; ++i) {
    if (norm(h.row(i)) == 0.0) {
      throw Error::validation(std::string("zero-norm ") + what +
                              " embedding for " + names[i]);
    }
  }
}

}  // namespace

AffinityMatrix image_affinities(const GcnModel& m, const DenseMatrix& image_x,
                                const std::vector<std::string>& image_names,
                                const DenseMatrix& room_x,
                                const std::vector<std::string>& room_names) {
  if (image_names.size() != image_x.rows || room_names.size() != room_x.rows) {
    throw Error::invalid_argument("image_affinities: name count mismatch");
  }
  const DenseMatrix img = embed_selfedges(m, image_x);
  const DenseMatrix rm = embed_selfedges(m, room_x);
  check_nonzero_rows(img, image_names, "image");
  check_nonzero_rows(rm, room_names, "room");

  AffinityMatrix a;
  a.row_names = image_names;
  a.room_names = room_names;
  a.values = DenseMatrix(img.rows, rm.rows);
  for (size_t i = 0; i < img.rows; ++i) {
    for (size_t r = 0; r < rm.rows; ++r) {
      a.values.at(i, r) = cosine(img.row(i), rm.row(r));
    }
  }
  return a;
}

AffinityMatrix aggregate_category(
    const AffinityMatrix& per_image,
    const std::map<std::string, std::string>& category_of) {
  std::map<std::string, std::vector<size_t>> rows_of;  // category -> rows
  for (const auto& [image, cat] : category_of) {
    rows_of[cat];  // every mapped category must collect at least one row
    (void)image;
  }
  for (size_t i = 0; i < per_image.row_names.size(); ++i) {
    const auto it = category_of.find(per_image.row_names[i]);
    if (it == category_of.end()) {
      throw Error::validation("image without category: " +
                              per_image.row_names[i]);
    }
    rows_of[it->second].push_back(i);
  }

  AffinityMatrix out;
  out.room_names = per_image.room_names;
  out.values = DenseMatrix(rows_of.size(), per_image.room_names.size());
  size_t o = 0;
  for (const auto& [cat, rows] : rows_of) {
    if (rows.empty()) {
      throw Error::validation("category with zero images: " + cat);
    }
    out.row_names.push_back(cat);
    for (size_t r = 0; r < out.values.cols; ++r) {
      double sum = 0.0;
      for (size_t i : rows) sum += per_image.values.at(i, r);
      out.values.at(o, r) = sum / static_cast<double>(rows.size());
    }
    ++o;
  }
  return out;
}

void export_embeddings(const GcnModel& m, const FeatureMatrix& x,
                       const std::string& path) {
  if (x.names.size() != x.rows()) {
    throw Error::invalid_argument(
        "export_embeddings: feature matrix has no row names");
  }
  const DenseMatrix h = embed_selfedges(m, x.values);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  out << "node";
  for (size_t j = 0; j < h.cols; ++j) out << "\td" << j;
  out << "\n";
  char buf[40];
  for (size_t i = 0; i < h.rows; ++i) {
    out << x.names[i];
    for (size_t j = 0; j < h.cols; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", h.at(i, j));
      out << "\t" << buf;
    }
    out << "\n";
  }
  if (!out) throw Error::io("failed writing " + path);
}

std::vector<size_t> room_ranking(const DenseMatrix& values, size_t row) {
  std::vector<size_t> order(values.cols);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return values.at(row, a) > values.at(row, b);
  });
  return order;
}

void save_rankings_csv(const AffinityMatrix& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot write " + path);
  out << "category,rank,room,affinity\n";
  char buf[40];
  for (size_t i = 0; i < a.values.rows; ++i) {
    const auto order = room_ranking(a.values, i);
    for (size_t r = 0; r < order.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%.17g", a.values.at(i, order[r]));
      out << a.row_names[i] << "," << (r + 1) << "," << a.room_names[order[r]]
          << "," << buf << "\n";
    }
  }
  if (!out) throw Error::io("failed writing " + path);
}

}  // namespace roomgraph
