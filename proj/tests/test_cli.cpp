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
 * Drives the installed binary through std::system; the ctest harness points
 * ROOMGRAPH_CLI at the built executable.
 */
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

namespace {

const char* cli_path() { return std::getenv("ROOMGRAPH_CLI"); }

int run(const std::string& args) {
  const std::string cmd =
      std::string("\"") + cli_path() + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool exists(const std::string& path) {
  return std::filesystem::exists(path);
}

}  // namespace

#define REQUIRE_CLI()                                        \
  if (cli_path() == nullptr) {                               \
    MESSAGE("ROOMGRAPH_CLI not set; skipping");              \
    return;                                                  \
  }

TEST_CASE("help exits zero, usage errors exit two") {
  REQUIRE_CLI();
  CHECK(run("--help") == 0);
  CHECK(run("gen-synthetic --help") == 0);
  CHECK(run("") == 2);                       // a subcommand is required
  CHECK(run("no-such-command") == 2);
  CHECK(run("gen-synthetic --bogus-flag x --out /tmp/never") == 2);
  // eval without --model is a usage error, not a runtime one.
  CHECK(run("eval --data /tmp/nowhere") == 2);
}

TEST_CASE("runtime failures exit one") {
  REQUIRE_CLI();
  const std::string dir = testutil::temp_dir("cli_runtime_fail");
  CHECK(run("build-graph --data " + dir + "/missing --out " + dir) == 1);
  CHECK(run("stats --graph " + dir + "/missing.kge1") == 1);
}

TEST_CASE("the cli pipeline produces every artifact") {
  REQUIRE_CLI();
  const std::string root = testutil::temp_dir("cli_pipeline");
  const std::string data = root + "/data";
  const std::string gout = root + "/graph";
  const std::string tout = root + "/run";
  const std::string eout = root + "/eval";
  const std::string iout = root + "/infer";
  const std::string xout = root + "/emb";

  CHECK(run("gen-synthetic --categories 4 --rooms 2 --images 6 --dim 8"
            " --ratio-train 4 --ratio-val 1 --ratio-test 1 --seed 3 --out " +
            data) == 0);
  CHECK(exists(data + "/manifest.json"));
  CHECK(exists(data + "/features.afm1"));
  CHECK(exists(data + "/features.json"));
  CHECK(exists(data + "/scores.jsonl"));
  CHECK(exists(data + "/split.json"));
  CHECK(exists(data + "/config.txt"));

  CHECK(run("build-graph --data " + data + " --seed 3 --out " + gout) == 0);
  CHECK(exists(gout + "/graph.kge1"));
  CHECK(exists(gout + "/graph.kge1.json"));

  CHECK(run("stats --graph " + gout + "/graph.kge1 --out " + gout) == 0);
  CHECK(exists(gout + "/stats.json"));

  CHECK(run("train --data " + data + " --graph " + gout + "/graph.kge1" +
            " --steps 20 --lr 5e-3 --temperature 0.1 --negatives 4"
            " --batch-samples 8 --hidden 8 --out-dim 4 --seed 3"
            " --eval-every 10 --out " + tout) == 0);
  CHECK(exists(tout + "/step_20.gck1"));
  CHECK(exists(tout + "/trainlog.jsonl"));
  CHECK(exists(tout + "/config.txt"));

  CHECK(run("eval --data " + data + " --model " + tout + "/step_20.gck1" +
            " --split test --out " + eout) == 0);
  CHECK(exists(eout + "/eval.json"));

  CHECK(run("infer --data " + data + " --model " + tout + "/step_20.gck1" +
            " --split test --out " + iout) == 0);
  CHECK(exists(iout + "/rankings.csv"));

  CHECK(run("export-embeddings --data " + data + " --model " + tout +
            "/step_20.gck1 --out " + xout) == 0);
  CHECK(exists(xout + "/embeddings.tsv"));

  CHECK(run("tune-temp --data " + data + " --graph " + gout + "/graph.kge1" +
            " --steps 5 --temperature 0.1 --negatives 4 --batch-samples 4"
            " --hidden 8 --out-dim 4 --seed 3 --candidates 0.1,0.5"
            " --out " + root + "/tune") == 0);
  CHECK(exists(root + "/tune/best_temperature.txt"));
}

TEST_CASE("config files feed flags and unknown keys are rejected") {
  REQUIRE_CLI();
  const std::string root = testutil::temp_dir("cli_config");
  const std::string data = root + "/data";
  testutil::write_file(root + "/gen.ini",
                       "categories=4\nrooms=2\nimages=6\ndim=8\n"
                       "ratio-train=4\nratio-val=1\nratio-test=1\nseed=9\n");
  CHECK(run("gen-synthetic --config " + root + "/gen.ini --out " + data) ==
        0);
  CHECK(exists(data + "/manifest.json"));
  // The echoed configuration records the effective values.
  const std::string echoed = testutil::read_file(data + "/config.txt");
  CHECK(echoed.find("categories=4") != std::string::npos);
  CHECK(echoed.find("seed=9") != std::string::npos);

  testutil::write_file(root + "/bad.ini", "categories=4\nnot_a_key=1\n");
  CHECK(run("gen-synthetic --config " + root + "/bad.ini --out " + data) ==
        2);

  // Command-line flags override the config file.
  const std::string data2 = root + "/data2";
  CHECK(run("gen-synthetic --config " + root + "/gen.ini --seed 10 --out " +
            data2) == 0);
  const std::string echoed2 = testutil::read_file(data2 + "/config.txt");
  CHECK(echoed2.find("seed=10") != std::string::npos);
}

TEST_CASE("the seed environment variable fills in when flags are absent") {
  REQUIRE_CLI();
  const std::string root = testutil::temp_dir("cli_env_seed");
  const std::string cmd = std::string("AFFINITY_SEED=77 \"") + cli_path() +
                          "\" gen-synthetic --categories 4 --rooms 2"
                          " --images 6 --dim 8 --ratio-train 4 --ratio-val 1"
                          " --ratio-test 1 --out " +
                          root + "/data > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  CHECK(WEXITSTATUS(rc) == 0);
  const std::string echoed = testutil::read_file(root + "/data/config.txt");
  CHECK(echoed.find("seed=77") != std::string::npos);
}
