#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "seqmd/json_util.h"

namespace seqmd {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Seqmd(std::vector<std::string> args) {
  args.insert(args.begin(), "seqmd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("seqmd_cli_test_" + std::string(::testing::UnitTest::GetInstance()
                                                ->current_test_info()
                                                ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string P(const std::string& rel) const { return (dir_ / rel).string(); }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(Seqmd({"--help"}).code, cli::kExitOk);
  const Result v = Seqmd({"--version"});
  EXPECT_EQ(v.code, cli::kExitOk);
  EXPECT_FALSE(v.out.empty());
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Seqmd({}).code, cli::kExitUsage);
  EXPECT_EQ(Seqmd({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(Seqmd({"generate", "--queries", "many"}).code, cli::kExitUsage);
  EXPECT_EQ(Seqmd({"--out", P("g"), "generate", "--candidates", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(Seqmd({"--config", P("missing.json"), "--out", P("g"), "generate"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, GenerateIsDeterministicAndGuardsOutputs) {
  const std::vector<std::string> args = {"--seed", "4",           "--out",        P("a"),
                                         "generate", "--queries", "30", "--candidates", "5"};
  ASSERT_EQ(Seqmd(args).code, cli::kExitOk);
  EXPECT_EQ(Seqmd(args).code, cli::kExitUsage);  // exists, no --force
  auto forced = args;
  forced.insert(forced.begin(), "--force");
  ASSERT_EQ(Seqmd(forced).code, cli::kExitOk);
  ASSERT_EQ(Seqmd({"--seed", "4", "--out", P("b"), "generate", "--queries", "30", "--candidates",
                 "5"})
                .code,
            cli::kExitOk);
  EXPECT_EQ(Slurp(P("a/data.jsonl")), Slurp(P("b/data.jsonl")));
  const Json m = Json::parse(Slurp(P("a/manifest.json")));
  EXPECT_EQ(m.at("command"), "generate");
  EXPECT_EQ(m.at("status"), "ok");
}

TEST_F(CliTest, ManifestCommandMustMatch) {
  ASSERT_EQ(Seqmd({"--out", P("g"), "generate", "--queries", "20"}).code, cli::kExitOk);
  EXPECT_EQ(Seqmd({"--config", P("g/manifest.json"), "--out", P("s"), "params"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, UnknownModelListsValidNames) {
  const Result r = Seqmd({"--out", P("p"), "params", "--model", "transformer"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("shared_bottom"), std::string::npos);
}

TEST_F(CliTest, BadDataFileFails) {
  {
    std::ofstream bad(P("bad.jsonl"));
    bad << "{\"m\":2,\"p\":2,\"R\":2}\n{not json\n";
  }
  const Result r = Seqmd({"--out", P("t"), "train", "--data", P("bad.jsonl")});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  const Json m = Json::parse(Slurp(P("t/manifest.json")));
  EXPECT_EQ(m.at("status"), "failed");
}

TEST_F(CliTest, TrainEvalAndTransferPipeline) {
  ASSERT_EQ(Seqmd({"--out", P("d"), "generate", "--queries", "300", "--candidates", "6"}).code,
            cli::kExitOk);
  const std::string data = P("d/data.jsonl");
  ASSERT_EQ(Seqmd({"--out", P("sb"), "train", "--data", data, "--model", "shared_bottom",
                 "--epochs", "1"})
                .code,
            cli::kExitOk);
  const Result two = Seqmd({"--out", P("two"), "train", "--data", data, "--model", "seq",
                          "--tasks", "click,purchase", "--epochs", "1"});
  ASSERT_EQ(two.code, cli::kExitOk) << two.err;
  const Result three = Seqmd({"--out", P("three"), "train", "--data", data, "--model", "seq",
                            "--tasks", "3", "--epochs", "1", "--init", P("two/model.ckpt")});
  ASSERT_EQ(three.code, cli::kExitOk) << three.err;
  const Result ev = Seqmd({"--out", P("ev"), "eval", "--data", data, "--checkpoint",
                         "shared_bottom=" + P("sb/model.ckpt"), "--checkpoint",
                         "seq=" + P("three/model.ckpt")});
  ASSERT_EQ(ev.code, cli::kExitOk) << ev.err;
  EXPECT_TRUE(fs::exists(P("ev/ndcg.csv")));
  EXPECT_NE(ev.out.find("purchase"), std::string::npos);
}

TEST_F(CliTest, ParamsPrintsGrowth) {
  const Result r = Seqmd({"--out", P("p"), "params", "--model", "seq,ple", "--tasks", "2,3"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(P("p/params.json")));
}

}  // namespace
}  // namespace seqmd
