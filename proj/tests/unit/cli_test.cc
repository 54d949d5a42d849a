/*
 * Copyright 2026 The pdimp Authors.
 *
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

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "gtest/gtest.h"
#include "json.hpp"

#ifndef PDIMP_STUB_CHILD
#error "PDIMP_STUB_CHILD must name the stub executable"
#endif

namespace pdimp::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("pdimp_cli_" + std::string(info->name()) + "_" + std::to_string(getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // Friedman data with 500 rows, seed 7.
  std::string Friedman() {
    const std::string p = Path("d.csv");
    if (!fs::exists(p)) {
      const Result r = Invoke({"simulate", "--kind", "friedman", "--n", "500", "--sigma",
                            "1", "--seed", "7", "--out", p});
      EXPECT_EQ(r.code, 0) << r.err;
    }
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, SimulateWritesShapeAndManifest) {
  const std::string data = Friedman();
  const auto lines = Lines(Slurp(data));
  ASSERT_EQ(lines.size(), 501u);
  EXPECT_EQ(lines[0], "x1,x2,x3,x4,x5,x6,x7,x8,x9,x10,y");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 10);
  }
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["config"]["kind"], "friedman");
  EXPECT_EQ(manifest["config"]["n"], 500);
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("timestamp"));

  const Result lin = Invoke({"simulate", "--kind", "linear", "--n", "20", "--out",
                          Path("lin.csv"), "--out-dir", Path("linrun")});
  ASSERT_EQ(lin.code, 0) << lin.err;
  EXPECT_EQ(Lines(Slurp(Path("lin.csv")))[0], "x1,x2,y");
  EXPECT_TRUE(fs::exists(dir_ / "linrun" / "manifest.json"));
}

TEST_F(CliTest, ImportanceWithBaggedTrees) {
  const std::string data = Friedman();
  const Result r = Invoke({"importance", "--data", data, "--target", "y", "--model",
                        "bagged:n_trees=100,max_depth=6,min_leaf=5,seed=1", "--out-dir",
                        Path("imp")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = Lines(Slurp(dir_ / "imp" / "importance.csv"));
  ASSERT_EQ(lines.size(), 11u);
  EXPECT_EQ(lines[0], "feature,score");
  double last = 1e300;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double s = std::stod(lines[i].substr(lines[i].find(',') + 1));
    EXPECT_LE(s, last);
    last = s;
  }
  EXPECT_TRUE(fs::exists(dir_ / "imp" / "importance.schema.json"));
  EXPECT_TRUE(fs::exists(dir_ / "imp" / "manifest.json"));
  EXPECT_NE(r.out.find("x4"), std::string::npos);
}

TEST_F(CliTest, JointPdpOnQuantileGrid) {
  const std::string data = Friedman();
  const Result r = Invoke({"pdp", "--data", data, "--target", "y", "--expr",
                        "10*sin(pi*x1*x2)+20*(x3-0.5)^2+10*x4+5*x5", "--features",
                        "x1,x2", "--grid", "quantile:10", "--out-dir", Path("pdp"),
                        "--format", "csv,json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = Lines(Slurp(dir_ / "pdp" / "pdp.csv"));
  ASSERT_EQ(lines.size(), 122u);
  EXPECT_EQ(lines[0], "x1,x2,value");
  const auto schema = nlohmann::json::parse(Slurp(dir_ / "pdp" / "pdp.schema.json"));
  EXPECT_TRUE(schema.contains("baseline"));
  const auto js = nlohmann::json::parse(Slurp(dir_ / "pdp" / "pdp.json"));
  EXPECT_EQ(js["values"].size(), 121u);
}

TEST_F(CliTest, IceIsLongFormat) {
  const std::string data = Friedman();
  const Result r = Invoke({"ice", "--data", data, "--target", "y", "--expr", "x1*x2",
                        "--features", "x1", "--grid", "quantile:4", "--out-dir",
                        Path("ice")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = Lines(Slurp(dir_ / "ice" / "ice.csv"));
  EXPECT_EQ(lines.size(), 1u + 500 * 5);
  EXPECT_EQ(lines[0], "row_id,grid_value,prediction");
}

TEST_F(CliTest, InteractOracleRanksTruePairFirst) {
  const std::string data = Friedman();
  const Result r = Invoke({"interact", "--data", data, "--target", "y", "--expr",
                        "10*sin(pi*x1*x2)+20*(x3-0.5)^2+10*x4+5*x5", "--features",
                        "x1,x2,x3,x4", "--with-h", "--top", "3", "--out-dir", Path("int")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = Lines(Slurp(dir_ / "int" / "interaction.csv"));
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "feature_i,feature_j,stat_pd,stat_h");
  EXPECT_EQ(lines[1].substr(0, 6), "x1,x2,");
}

TEST_F(CliTest, FitThenModelFileReproducesScores) {
  const std::string data = Friedman();
  const std::string spec = "bagged:n_trees=10,max_depth=4,min_leaf=5,seed=3";
  ASSERT_EQ(Invoke({"fit", "--data", data, "--target", "y", "--model", spec, "--out-dir",
                 Path("fit")})
                .code,
            0);
  ASSERT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--model", spec,
                 "--out-dir", Path("a")})
                .code,
            0);
  const Result b = Invoke({"importance", "--data", data, "--target", "y", "--model-file",
                        Path("fit/model.json"), "--out-dir", Path("b")});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(Slurp(dir_ / "a" / "importance.csv"), Slurp(dir_ / "b" / "importance.csv"));
}

TEST_F(CliTest, ArtifactsIdenticalAcrossWorkersAndRuns) {
  const std::string data = Friedman();
  std::string first_csv, first_json;
  int run_id = 0;
  for (const char* w : {"1", "2", "8", "1"}) {
    const std::string out = Path("w" + std::to_string(run_id++));
    const Result r = Invoke({"interact", "--data", data, "--target", "y", "--model",
                          "bagged:n_trees=20,max_depth=5,min_leaf=5,seed=4", "--features",
                          "x1,x2,x3", "--with-h", "--workers", w, "--format", "csv,json",
                          "--out-dir", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = Slurp(fs::path(out) / "interaction.csv");
    const std::string js = Slurp(fs::path(out) / "interaction.json");
    if (first_csv.empty()) {
      first_csv = csv;
      first_json = js;
    }
    EXPECT_EQ(csv, first_csv) << "workers " << w;
    EXPECT_EQ(js, first_json) << "workers " << w;
  }
}

TEST_F(CliTest, WorkersFromEnvironment) {
  const std::string data = Friedman();
  setenv("PDIMP_WORKERS", "3", 1);
  const Result ok = Invoke({"importance", "--data", data, "--target", "y", "--expr", "x1",
                         "--out-dir", Path("env")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto manifest = nlohmann::json::parse(Slurp(dir_ / "env" / "manifest.json"));
  EXPECT_EQ(manifest["config"]["workers"], 3);
  setenv("PDIMP_WORKERS", "0", 1);
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--expr", "x1",
                 "--out-dir", Path("env0")})
                .code,
            kExitUsage);
  unsetenv("PDIMP_WORKERS");
}

TEST_F(CliTest, UsageErrorsExitOne) {
  const std::string data = Friedman();
  EXPECT_EQ(Invoke({}).code, kExitUsage);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"importance", "--bogus"}).code, kExitUsage);
  // Two model sources.
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--model", "linear",
                 "--expr", "x1"})
                .code,
            kExitUsage);
  // No model source.
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--model", "svm"}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--model",
                 "bagged:depth=3"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--expr", "x1",
                 "--grid", "deciles"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--expr", "x1",
                 "--format", "png"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"pdp", "--data", data, "--target", "y", "--expr", "x1",
                 "--features", "x1,x2,x3"})
                .code,
            kExitUsage);
  EXPECT_EQ(Invoke({"simulate", "--kind", "friedman"}).code, kExitUsage);
  EXPECT_EQ(Invoke({"simulate", "--kind", "cubic", "--out", Path("c.csv")}).code,
            kExitUsage);
  EXPECT_EQ(Invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, DataAndModelErrorsExitTwo) {
  const std::string data = Friedman();
  EXPECT_EQ(Invoke({"importance", "--data", Path("missing.csv"), "--target", "y",
                 "--model", "linear"})
                .code,
            kExitData);
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "zz", "--model", "linear"})
                .code,
            kExitData);
  EXPECT_EQ(Invoke({"pdp", "--data", data, "--target", "y", "--expr", "x1 +",
                 "--features", "x1"})
                .code,
            kExitData);
  EXPECT_EQ(Invoke({"pdp", "--data", data, "--target", "y", "--expr", "x1",
                 "--features", "nope"})
                .code,
            kExitData);
}

TEST_F(CliTest, BridgeErrorsExitThree) {
  const std::string data = Path("lin.csv");
  ASSERT_EQ(Invoke({"simulate", "--kind", "linear", "--n", "50", "--out", data}).code, 0);
  const std::string stub = PDIMP_STUB_CHILD;
  const Result check = Invoke({"bridge-check", "--external", stub + " linear", "--data",
                            data, "--target", "y"});
  EXPECT_EQ(check.code, 0) << check.err;
  EXPECT_NE(check.out.find("received 50 predictions"), std::string::npos) << check.out;

  const Result dead = Invoke({"bridge-check", "--external", stub + " no-handshake"});
  EXPECT_EQ(dead.code, kExitBridge);
  EXPECT_NE(dead.err.find("failed to load model weights"), std::string::npos)
      << dead.err;
  EXPECT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--external",
                 stub + " garbage"})
                .code,
            kExitBridge);

  const Result ext = Invoke({"importance", "--data", data, "--target", "y", "--external",
                          stub + " linear", "--out-dir", Path("ext")});
  ASSERT_EQ(ext.code, 0) << ext.err;
  ASSERT_EQ(Invoke({"importance", "--data", data, "--target", "y", "--expr",
                 "1 + 3*x1 - 5*x2", "--out-dir", Path("expr")})
                .code,
            0);
  EXPECT_EQ(Slurp(dir_ / "ext" / "importance.csv"),
            Slurp(dir_ / "expr" / "importance.csv"));
}

}  // namespace
}  // namespace pdimp::cli
