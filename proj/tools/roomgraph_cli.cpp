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
 *
 * Command-line front end. Talks to the library through the C interface
 * only; exit codes: 0 success, 1 runtime failure, 2 usage error.
 */
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roomgraph/roomgraph.h"

namespace {

namespace fs = std::filesystem;

int fail() {
  std::fprintf(stderr, "error: %s\n", rg_last_error());
  return 1;
}

struct DatasetDeleter {
  void operator()(rg_dataset* p) const { rg_dataset_free(p); }
};
struct GraphDeleter {
  void operator()(rg_graph* p) const { rg_graph_free(p); }
};
struct ModelDeleter {
  void operator()(rg_model* p) const { rg_model_free(p); }
};
struct AffinityDeleter {
  void operator()(rg_affinity* p) const { rg_affinity_free(p); }
};
using DatasetPtr = std::unique_ptr<rg_dataset, DatasetDeleter>;
using GraphPtr = std::unique_ptr<rg_graph, GraphDeleter>;
using ModelPtr = std::unique_ptr<rg_model, ModelDeleter>;
using AffinityPtr = std::unique_ptr<rg_affinity, AffinityDeleter>;

bool prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create output directory %s\n",
                 dir.c_str());
    return false;
  }
  return true;
}

bool write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return false;
  }
  return true;
}

// The effective (flag + config + default) settings, echoed for reruns.
bool echo_config(CLI::App* sub, const std::string& out_dir) {
  return write_text((fs::path(out_dir) / "config.txt").string(),
                    sub->config_to_str(true, false));
}

void add_common_settings(CLI::App* sub) {
  // The file itself is expanded in expand_config_args before parsing; the
  // option is registered so it is consumed and shows up in help.
  sub->add_option("--config")
      ->description("settings file with one key=value per line")
      ->configurable(false);
}

std::string trim(const std::string& s) {
  const char* ws = " \t\r";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// CLI11 applies settings files only on the top-level app, never on a
// subcommand, so --config is expanded by hand: every key becomes --key=value
// appended to the argument list. Keys given explicitly on the command line
// are skipped, so flags override the file; unknown keys fail the parse.
bool expand_config_args(std::vector<std::string>& args, std::string* err) {
  std::string path;
  bool found = false;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        *err = "--config requires a file argument";
        return false;
      }
      path = args[i + 1];
      found = true;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      found = true;
      break;
    }
  }
  if (!found) return true;

  std::ifstream in(path);
  if (!in) {
    *err = "cannot read config file " + path;
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos || trim(t.substr(0, eq)).empty()) {
      *err = path + ":" + std::to_string(lineno) + ": expected key=value";
      return false;
    }
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);  // config echoes quote strings
    }
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) {
        given = true;
        break;
      }
    }
    if (!given) args.push_back(flag + "=" + value);
  }
  return true;
}

// Flags shared by the train and tune-temp subcommands.
struct TrainFlags {
  uint32_t steps = 0;
  double learning_rate = 0.0;
  uint32_t lr_decay_every = 0;
  double lr_decay_factor = 0.0;
  double temperature = 0.0;
  uint32_t negatives = 0;
  uint32_t batch_samples = 0;
  bool include_positive = false;
  std::vector<uint32_t> hidden_dims{256};
  uint32_t out_dim = 0;
  uint64_t seed = 0;
  uint32_t eval_every = 0;

  rg_train_options to_options() const {
    rg_train_options opt;
    rg_train_options_defaults(&opt);
    opt.steps = steps;
    opt.learning_rate = learning_rate;
    opt.lr_decay_every = lr_decay_every;
    opt.lr_decay_factor = lr_decay_factor;
    opt.temperature = temperature;
    opt.negatives_per_sample = negatives;
    opt.samples_per_batch = batch_samples;
    opt.include_positive = include_positive ? 1 : 0;
    opt.hidden_dims = hidden_dims.empty() ? nullptr : hidden_dims.data();
    opt.n_hidden_dims = static_cast<uint32_t>(hidden_dims.size());
    opt.out_dim = out_dim;
    opt.seed = seed;
    opt.eval_every = eval_every;
    return opt;
  }
};

void add_train_flags(CLI::App* sub, TrainFlags& f) {
  rg_train_options d;
  rg_train_options_defaults(&d);
  f.steps = d.steps;
  f.learning_rate = d.learning_rate;
  f.lr_decay_every = d.lr_decay_every;
  f.lr_decay_factor = d.lr_decay_factor;
  f.temperature = d.temperature;
  f.negatives = d.negatives_per_sample;
  f.batch_samples = d.samples_per_batch;
  f.out_dim = d.out_dim;
  f.eval_every = d.eval_every;

  sub->add_option("--steps", f.steps, "training steps")
      ->capture_default_str();
  sub->add_option("--lr", f.learning_rate, "learning rate")
      ->capture_default_str();
  sub->add_option("--lr-decay-every", f.lr_decay_every,
                  "steps between learning-rate decays (0 = constant)")
      ->capture_default_str();
  sub->add_option("--lr-decay-factor", f.lr_decay_factor,
                  "learning-rate decay factor")
      ->capture_default_str();
  sub->add_option("--temperature", f.temperature, "loss temperature")
      ->capture_default_str();
  sub->add_option("--negatives", f.negatives, "negatives per sample (K)")
      ->capture_default_str();
  sub->add_option("--batch-samples", f.batch_samples,
                  "samples averaged per step (M)")
      ->capture_default_str();
  sub->add_flag("--include-positive", f.include_positive,
                "add the positive term to the loss denominator");
  sub->add_option("--hidden", f.hidden_dims, "hidden layer widths")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--out-dim", f.out_dim, "embedding dimension")
      ->capture_default_str();
  sub->add_option("--seed", f.seed, "random seed")
      ->envname("AFFINITY_SEED")
      ->capture_default_str();
  sub->add_option("--eval-every", f.eval_every,
                  "validation eval period in steps (0 = first/last only)")
      ->capture_default_str();
}

int split_selector(const std::string& name) {
  if (name == "train") return RG_SPLIT_TRAIN;
  if (name == "val") return RG_SPLIT_VAL;
  return RG_SPLIT_TEST;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"object-room affinity toolkit", "roomgraph"};
  app.require_subcommand(1);

  // gen-synthetic
  auto* gen = app.add_subcommand("gen-synthetic",
                                 "generate a synthetic clustered dataset");
  add_common_settings(gen);
  rg_synthetic_spec spec;
  rg_synthetic_spec_defaults(&spec);
  std::string gen_out;
  gen->add_option("--categories", spec.n_categories, "object categories")
      ->capture_default_str();
  gen->add_option("--rooms", spec.n_rooms, "rooms")->capture_default_str();
  gen->add_option("--images", spec.images_per_category, "images per category")
      ->capture_default_str();
  gen->add_option("--dim", spec.dim, "feature dimension")
      ->capture_default_str();
  gen->add_option("--separation", spec.cluster_separation,
                  "room cluster center norm")
      ->capture_default_str();
  gen->add_option("--noise", spec.noise_sigma, "per-image noise sigma")
      ->capture_default_str();
  gen->add_option("--seed", spec.seed, "random seed")
      ->envname("AFFINITY_SEED")
      ->capture_default_str();
  gen->add_option("--ratio-train", spec.ratio_train, "split ratio: train")
      ->capture_default_str();
  gen->add_option("--ratio-val", spec.ratio_val, "split ratio: val")
      ->capture_default_str();
  gen->add_option("--ratio-test", spec.ratio_test, "split ratio: test")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "output dataset directory")->required();

  // build-graph
  auto* bg = app.add_subcommand("build-graph",
                                "build the knowledge graph from a dataset");
  add_common_settings(bg);
  std::string bg_data, bg_out;
  uint64_t bg_seed = 0;
  bg->add_option("--data", bg_data, "dataset directory")->required();
  bg->add_option("--seed", bg_seed, "random seed for shared-room weights")
      ->envname("AFFINITY_SEED")
      ->capture_default_str();
  bg->add_option("--out", bg_out, "output directory")->required();

  // stats
  auto* st = app.add_subcommand("stats", "summarize a saved graph");
  add_common_settings(st);
  std::string st_graph, st_out;
  st->add_option("--graph", st_graph, "graph file (.kge1)")->required();
  st->add_option("--out", st_out, "optional output directory");

  // train
  auto* tr = app.add_subcommand("train", "train the GCN on a dataset");
  add_common_settings(tr);
  std::string tr_data, tr_graph, tr_out;
  TrainFlags tr_flags;
  tr->add_option("--data", tr_data, "dataset directory")->required();
  tr->add_option("--graph", tr_graph,
                 "prebuilt graph file (default: build from the dataset)");
  add_train_flags(tr, tr_flags);
  tr->add_option("--out", tr_out, "output directory")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a split");
  add_common_settings(ev);
  std::string ev_data, ev_model, ev_split = "test", ev_out;
  ev->add_option("--data", ev_data, "dataset directory")->required();
  ev->add_option("--model", ev_model, "checkpoint file")->required();
  ev->add_option("--split", ev_split, "train|val|test")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();
  ev->add_option("--out", ev_out, "optional output directory");

  // infer
  auto* in = app.add_subcommand("infer", "rank rooms for a split's categories");
  add_common_settings(in);
  std::string in_data, in_model, in_split = "test", in_out;
  in->add_option("--data", in_data, "dataset directory")->required();
  in->add_option("--model", in_model, "checkpoint file")->required();
  in->add_option("--split", in_split, "train|val|test")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();
  in->add_option("--out", in_out, "output directory")->required();

  // tune-temp
  auto* tt = app.add_subcommand("tune-temp",
                                "pick the loss temperature by validation mAP");
  add_common_settings(tt);
  std::string tt_data, tt_graph, tt_out;
  std::vector<double> tt_candidates{0.01, 0.03, 0.1, 0.3, 1.0};
  TrainFlags tt_flags;
  tt->add_option("--data", tt_data, "dataset directory")->required();
  tt->add_option("--graph", tt_graph,
                 "prebuilt graph file (default: build from the dataset)");
  tt->add_option("--candidates", tt_candidates, "temperatures to try")
      ->delimiter(',')
      ->capture_default_str();
  add_train_flags(tt, tt_flags);
  tt->add_option("--out", tt_out, "optional output directory");

  // export-embeddings
  auto* ex = app.add_subcommand("export-embeddings",
                                "embed every dataset node to a TSV");
  add_common_settings(ex);
  std::string ex_data, ex_model, ex_out;
  ex->add_option("--data", ex_data, "dataset directory")->required();
  ex->add_option("--model", ex_model, "checkpoint file")->required();
  ex->add_option("--out", ex_out, "output directory")->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  std::string cfg_err;
  if (!expand_config_args(args, &cfg_err)) {
    std::fprintf(stderr, "error: %s\n", cfg_err.c_str());
    return 2;
  }
  std::reverse(args.begin(), args.end());  // parse() takes reversed args
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.got_subcommand(gen)) {
    if (!prepare_out_dir(gen_out)) return 1;
    rg_dataset* d = nullptr;
    if (rg_dataset_generate(&spec, gen_out.c_str(), &d) != RG_OK) {
      return fail();
    }
    DatasetPtr guard(d);
    if (!echo_config(gen, gen_out)) return 1;
    std::printf("dataset written to %s\n", gen_out.c_str());
    return 0;
  }

  if (app.got_subcommand(bg)) {
    if (!prepare_out_dir(bg_out)) return 1;
    rg_dataset* d = nullptr;
    if (rg_dataset_open(bg_data.c_str(), &d) != RG_OK) return fail();
    DatasetPtr dguard(d);
    rg_graph* g = nullptr;
    if (rg_graph_build(d, bg_seed, &g) != RG_OK) return fail();
    GraphPtr gguard(g);
    const std::string path = (fs::path(bg_out) / "graph.kge1").string();
    if (rg_graph_save(g, path.c_str()) != RG_OK) return fail();
    if (!echo_config(bg, bg_out)) return 1;
    std::printf("graph written to %s\n", path.c_str());
    return 0;
  }

  if (app.got_subcommand(st)) {
    rg_graph* g = nullptr;
    if (rg_graph_load(st_graph.c_str(), &g) != RG_OK) return fail();
    GraphPtr gguard(g);
    char* json = nullptr;
    if (rg_graph_stats_json(g, &json) != RG_OK) return fail();
    std::printf("%s", json);
    bool ok = true;
    if (!st_out.empty()) {
      ok = prepare_out_dir(st_out) &&
           write_text((fs::path(st_out) / "stats.json").string(), json) &&
           echo_config(st, st_out);
    }
    rg_string_free(json);
    return ok ? 0 : 1;
  }

  if (app.got_subcommand(tr)) {
    if (!prepare_out_dir(tr_out)) return 1;
    rg_dataset* d = nullptr;
    if (rg_dataset_open(tr_data.c_str(), &d) != RG_OK) return fail();
    DatasetPtr dguard(d);
    GraphPtr gguard;
    if (!tr_graph.empty()) {
      rg_graph* g = nullptr;
      if (rg_graph_load(tr_graph.c_str(), &g) != RG_OK) return fail();
      gguard.reset(g);
    } else {
      rg_graph* g = nullptr;
      if (rg_graph_build(d, tr_flags.seed, &g) != RG_OK) return fail();
      gguard.reset(g);
      const std::string gpath = (fs::path(tr_out) / "graph.kge1").string();
      if (rg_graph_save(g, gpath.c_str()) != RG_OK) return fail();
    }
    const rg_train_options opt = tr_flags.to_options();
    const std::string log_path = (fs::path(tr_out) / "trainlog.jsonl").string();
    rg_model* m = nullptr;
    if (rg_train(d, gguard.get(), &opt, log_path.c_str(), &m) != RG_OK) {
      return fail();
    }
    ModelPtr mguard(m);
    const std::string ckpt =
        (fs::path(tr_out) / ("step_" + std::to_string(opt.steps) + ".gck1"))
            .string();
    if (rg_model_save(m, ckpt.c_str()) != RG_OK) return fail();
    if (!echo_config(tr, tr_out)) return 1;
    std::printf("checkpoint written to %s\n", ckpt.c_str());
    return 0;
  }

  if (app.got_subcommand(ev)) {
    rg_dataset* d = nullptr;
    if (rg_dataset_open(ev_data.c_str(), &d) != RG_OK) return fail();
    DatasetPtr dguard(d);
    rg_model* m = nullptr;
    if (rg_model_load(ev_model.c_str(), &m) != RG_OK) return fail();
    ModelPtr mguard(m);
    char* json = nullptr;
    if (rg_evaluate_json(d, m, split_selector(ev_split), &json) != RG_OK) {
      return fail();
    }
    std::printf("%s", json);
    bool ok = true;
    if (!ev_out.empty()) {
      ok = prepare_out_dir(ev_out) &&
           write_text((fs::path(ev_out) / "eval.json").string(), json) &&
           echo_config(ev, ev_out);
    }
    rg_string_free(json);
    return ok ? 0 : 1;
  }

  if (app.got_subcommand(in)) {
    if (!prepare_out_dir(in_out)) return 1;
    rg_dataset* d = nullptr;
    if (rg_dataset_open(in_data.c_str(), &d) != RG_OK) return fail();
    DatasetPtr dguard(d);
    rg_model* m = nullptr;
    if (rg_model_load(in_model.c_str(), &m) != RG_OK) return fail();
    ModelPtr mguard(m);
    rg_affinity* a = nullptr;
    if (rg_infer(d, m, split_selector(in_split), &a) != RG_OK) return fail();
    AffinityPtr aguard(a);
    const std::string csv = (fs::path(in_out) / "rankings.csv").string();
    if (rg_affinity_save_csv(a, csv.c_str()) != RG_OK) return fail();
    if (!echo_config(in, in_out)) return 1;
    std::printf("rankings written to %s\n", csv.c_str());
    return 0;
  }

  if (app.got_subcommand(tt)) {
    rg_dataset* d = nullptr;
    if (rg_dataset_open(tt_data.c_str(), &d) != RG_OK) return fail();
    DatasetPtr dguard(d);
    GraphPtr gguard;
    if (!tt_graph.empty()) {
      rg_graph* g = nullptr;
      if (rg_graph_load(tt_graph.c_str(), &g) != RG_OK) return fail();
      gguard.reset(g);
    }
    const rg_train_options opt = tt_flags.to_options();
    double best = 0.0;
    if (rg_tune_temperature(d, gguard.get(), &opt, tt_candidates.data(),
                            static_cast<uint32_t>(tt_candidates.size()),
                            &best) != RG_OK) {
      return fail();
    }
    std::printf("best temperature: %g\n", best);
    if (!tt_out.empty()) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g\n", best);
      if (!prepare_out_dir(tt_out) ||
          !write_text((fs::path(tt_out) / "best_temperature.txt").string(),
                      buf) ||
          !echo_config(tt, tt_out)) {
        return 1;
      }
    }
    return 0;
  }

  if (app.got_subcommand(ex)) {
    if (!prepare_out_dir(ex_out)) return 1;
    rg_dataset* d = nullptr;
    if (rg_dataset_open(ex_data.c_str(), &d) != RG_OK) return fail();
    DatasetPtr dguard(d);
    rg_model* m = nullptr;
    if (rg_model_load(ex_model.c_str(), &m) != RG_OK) return fail();
    ModelPtr mguard(m);
    const std::string tsv = (fs::path(ex_out) / "embeddings.tsv").string();
    if (rg_export_embeddings(d, m, tsv.c_str()) != RG_OK) return fail();
    if (!echo_config(ex, ex_out)) return 1;
    std::printf("embeddings written to %s\n", tsv.c_str());
    return 0;
  }

  return 2;  // unreachable with require_subcommand(1)
}
