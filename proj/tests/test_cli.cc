// Copyright 2026 The segloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "cli.h"
#include "e2e_pipeline.h"
#include "segloop/backbone.h"
#include "segloop/file_util.h"
#include "segloop/mask_io.h"
#include "segloop/store.h"
#include "store_fixture.h"
#include "test_util.h"

namespace segloop {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, EvalIdenticalPair) {
  testing::TempDir dir;
  std::mt19937_64 rng(81);
  const SegmentationMask m = testing::RandomMask(rng, 12, 9);
  WriteFileAtomic(dir.path() / "pred.png", EncodeIndexedPng(m));
  WriteFileAtomic(dir.path() / "gt.bin", EncodeBin(m));
  const CliResult r =
      Invoke({"eval", "--pred", (dir.path() / "pred.png").string(), "--gt", (dir.path() / "gt.bin").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "mIoU 1.0000\n");
}

TEST(Cli, EvalHalfPair) {
  testing::TempDir dir;
  WriteFileAtomic(dir.path() / "pred.bin", EncodeBin(SegmentationMask(2, 2, {1, 1, 0, 0})));
  WriteFileAtomic(dir.path() / "gt.bin", EncodeBin(SegmentationMask(2, 2, {1, 0, 0, 0})));
  const CliResult r =
      Invoke({"eval", "--pred", (dir.path() / "pred.bin").string(), "--gt", (dir.path() / "gt.bin").string()});
  EXPECT_EQ(r.out, "mIoU 0.5833\n");
}

TEST(Cli, FailuresExitNonzeroWithMessage) {
  testing::TempDir dir;
  CliResult r = Invoke({"eval", "--pred", (dir.path() / "missing.bin").string(), "--gt", "x.bin"});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  EXPECT_NE(Invoke({"no-such-command"}).code, 0);
  EXPECT_NE(Invoke({}).code, 0);
  EXPECT_NE(Invoke({"--store", (dir.path() / "nostore").string(), "detect"}).code, 0);
}

TEST(Cli, InitTwiceFails) {
  testing::TempDir dir;
  const std::string root = (dir.path() / "s").string();
  EXPECT_EQ(Invoke({"--store", root, "init"}).code, 0);
  EXPECT_TRUE(fs::exists(fs::path(root) / "records.log"));
  const CliResult again = Invoke({"--store", root, "init"});
  EXPECT_NE(again.code, 0);
  EXPECT_NE(again.err.find("BadStore"), std::string::npos);
}

TEST(Cli, TrainZeroEpochsKeepsCheckpoint) {
  testing::TempDir dir;
  testing::BuildFixtureStore(dir.path());
  const Store store = Store::Open(dir.path());
  const ToyBackboneParams init = ToyBackboneParams::Init(5);
  WriteFileAtomic(store.CheckpointPath("start"), EncodeCheckpoint(init));
  const CliResult r = Invoke({"--store", dir.path().string(), "train", "--epochs", "0", "--from", "start"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(DecodeCheckpoint(ReadFileBytes(store.CheckpointPath("current"))), init);
}

TEST(Cli, CorrectPropagateExport) {
  testing::TempDir dir;
  testing::BuildFixtureStore(dir.path());
  const std::string root = dir.path().string();
  const std::string config = (dir.path() / "config.json").string();
  WriteFileAtomic(config, R"({"index": {"grid": 2, "tolerance": 40, "connectivity": 4}})");
  CliResult r = Invoke({"--store", root, "correct", "--site", "a", "--rect", "0,0,8,16", "--class", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = Invoke({"--store", root, "--config", config, "propagate", "--all"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Store store = Store::Open(dir.path());
  EXPECT_EQ(store.CurrentMask({"b", Face::kFlat}).at(0, 0), 3);
  EXPECT_NE(Invoke({"--store", root, "correct", "--site", "a", "--rect", "0,0,8,16", "--class", "9"}).code, 0);

  const fs::path exported = dir.path() / "export";
  r = Invoke({"--store", root, "export", exported.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(exported / "records.json"));
  EXPECT_TRUE(fs::exists(exported / "session_log.jsonl"));
}

TEST(Cli, ScriptedPipelineImprovesMiou) {
  testing::TempDir dir;
  const testing::PipelineRun run = testing::RunScriptedPipeline(dir.path() / "store");
  for (const auto& s : run.steps) EXPECT_EQ(s.exit_code, 0) << s.name << ": " << s.output;
  ASSERT_TRUE(run.AllSucceeded());
  ASSERT_TRUE(run.csv_written);
  ASSERT_TRUE(run.miou.contains("baseline"));
  ASSERT_TRUE(run.miou.contains("retrained_model"));
  EXPECT_GT(run.miou.at("corrected_masks"), run.miou.at("baseline"));
  EXPECT_GT(run.miou.at("retrained_model"), run.miou.at("baseline"));
}

}  // namespace
}  // namespace segloop
