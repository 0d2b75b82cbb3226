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
#include "roomgraph/dataset.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "roomgraph/error.hpp"

namespace roomgraph {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

Dataset make_synthetic_dataset(const SyntheticSpec& spec,
                               const std::array<uint32_t, 3>& ratios) {
  SyntheticResult syn = gen_synthetic(spec);
  Dataset d;
  d.features = std::move(syn.features);
  d.scores = std::move(syn.scores);
  d.gt = std::move(syn.gt);
  d.categories = std::move(syn.categories);
  d.rooms = std::move(syn.rooms);
  d.images_per_category = syn.images_per_category;
  d.split =
      split_dataset(d.categories, d.images_per_category, ratios, spec.seed);
  return d;
}

void save_dataset(const Dataset& d, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error::io("cannot create directory " + dir);

  ordered_json manifest;
  manifest["categories"] = d.categories;
  manifest["rooms"] = d.rooms;
  manifest["images_per_category"] = d.images_per_category;
  manifest["dim"] = d.features.dim();
  {
    std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!out) throw Error::io("cannot write manifest.json in " + dir);
    out << manifest.dump(2) << "\n";
  }

  save_features(d.features, (fs::path(dir) / "features.afm1").string());
  save_feature_names(d.features.names,
                     (fs::path(dir) / "features.json").string());

  std::vector<ReceptacleScore> flat;
  for (const auto& [key, pair] : d.scores.pairs()) {
    flat.insert(flat.end(), pair.receptacles.begin(), pair.receptacles.end());
  }
  save_receptacle_scores(flat, (fs::path(dir) / "scores.jsonl").string());
  save_split(d.split, (fs::path(dir) / "split.json").string());
}

Dataset open_dataset(const std::string& dir) {
  Dataset d;
  {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in) throw Error::io("cannot open manifest.json in " + dir);
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      throw Error::format(dir + "/manifest.json: invalid JSON");
    }
    try {
      d.categories = j.at("categories").get<std::vector<std::string>>();
      d.rooms = j.at("rooms").get<std::vector<std::string>>();
      d.images_per_category = j.at("images_per_category").get<uint32_t>();
    } catch (const ordered_json::exception& ex) {
      throw Error::format(dir + "/manifest.json: " + std::string(ex.what()));
    }
  }

  d.features = load_features((fs::path(dir) / "features.afm1").string());
  d.features.names =
      load_feature_names((fs::path(dir) / "features.json").string());
  if (d.features.names.size() != d.features.rows()) {
    throw Error::validation(dir + ": features.json names " +
                            std::to_string(d.features.names.size()) +
                            " rows vs features.afm1 " +
                            std::to_string(d.features.rows()));
  }
  const size_t expect_rows =
      static_cast<size_t>(d.categories.size()) * d.images_per_category +
      d.rooms.size();
  if (d.features.rows() != expect_rows) {
    throw Error::validation(dir + ": manifest expects " +
                            std::to_string(expect_rows) +
                            " feature rows, file has " +
                            std::to_string(d.features.rows()));
  }

  const fs::path scores_path = fs::path(dir) / "scores.jsonl";
  const fs::path ann_path = fs::path(dir) / "annotations.jsonl";
  if (fs::exists(scores_path)) {
    d.scores =
        SoftScoreTable::from_receptacle_scores(load_receptacle_scores(
            scores_path.string()));
  } else if (fs::exists(ann_path)) {
    d.scores = compute_soft_scores(load_annotations(ann_path.string()));
  } else {
    throw Error::io(dir + ": neither scores.jsonl nor annotations.jsonl");
  }
  d.gt = ground_truth_map(d.scores, d.rooms);
  d.split = load_split((fs::path(dir) / "split.json").string());
  for (const auto& cat : d.categories) {
    if (d.split.per_category.find(cat) == d.split.per_category.end()) {
      throw Error::validation(dir + ": split.json missing category " + cat);
    }
  }
  return d;
}

namespace {

std::map<std::string, size_t> name_index(const FeatureMatrix& f) {
  std::map<std::string, size_t> idx;
  for (size_t i = 0; i < f.names.size(); ++i) {
    if (!idx.emplace(f.names[i], i).second) {
      throw Error::validation("duplicate feature row name: " + f.names[i]);
    }
  }
  return idx;
}

size_t row_for(const std::map<std::string, size_t>& idx,
               const std::string& name) {
  const auto it = idx.find(name);
  if (it == idx.end()) {
    throw Error::validation("no feature row for node: " + name);
  }
  return it->second;
}

}  // namespace

DenseMatrix training_features(const Dataset& d, const GraphNodes& nodes) {
  const auto idx = name_index(d.features);
  DenseMatrix x(nodes.node_count(), d.features.dim());
  for (size_t i = 0; i < nodes.node_count(); ++i) {
    const auto src = d.features.values.row(row_for(idx, nodes.names[i]));
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  return x;
}

SplitView split_view(const Dataset& d, SplitPart part) {
  const auto idx = name_index(d.features);
  SplitView v;
  std::vector<size_t> image_rows;
  for (const auto& [cat, s] : d.split.per_category) {
    const std::vector<uint32_t>& list = part == SplitPart::kTrain ? s.train
                                        : part == SplitPart::kVal ? s.val
                                                                  : s.test;
    for (uint32_t img : list) {
      const std::string name = image_node_name(cat, img);
      image_rows.push_back(row_for(idx, name));
      v.image_names.push_back(name);
      v.category_of[name] = cat;
    }
  }
  v.image_x = DenseMatrix(image_rows.size(), d.features.dim());
  for (size_t i = 0; i < image_rows.size(); ++i) {
    const auto src = d.features.values.row(image_rows[i]);
    std::copy(src.begin(), src.end(), v.image_x.row(i).begin());
  }

  v.room_names = d.rooms;
  v.room_x = DenseMatrix(d.rooms.size(), d.features.dim());
  for (size_t r = 0; r < d.rooms.size(); ++r) {
    const auto src = d.features.values.row(row_for(idx, d.rooms[r]));
    std::copy(src.begin(), src.end(), v.room_x.row(r).begin());
  }
  return v;
}

}  // namespace roomgraph
