#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string output;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string("\"") + VLGC_CLI_PATH + "\" " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vlgc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, FollowerPairIsVariableLag) {
  ASSERT_EQ(run("synth --kind pair --seed 3 --out " + path("pair.csv")).code, 0);
  const CliRun r = run("test-pair " + path("pair.csv") + " --max-lag 0.2 --n-boot 200 --json " + path("out.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("X -> Y: TRUE_VARIABLE"), std::string::npos) << r.output;
  const auto report = nlohmann::json::parse(slurp(path("out.json")));
  EXPECT_EQ(report["verdict"]["label"], "TRUE_VARIABLE");
  EXPECT_EQ(report["config"]["max_lag"], 40);
  EXPECT_EQ(report["length"], 200);
}

TEST_F(Cli, NanCellIsReportedWithItsLocation) {
  std::ofstream(path("bad.csv")) << "x,y\n1,2\n3,nan\n4,5\n";
  const CliRun r = run("test-pair " + path("bad.csv"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("row 3"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("'y'"), std::string::npos) << r.output;
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("test-pair").code, 2);
  EXPECT_EQ(run("bench --suite nonsense").code, 2);
  std::ofstream(path("ok.csv")) << "x,y\n1,2\n3,4\n5,6\n7,8\n9,1\n2,3\n";
  EXPECT_EQ(run("test-pair " + path("ok.csv") + " --max-lag 1.5").code, 2);
  EXPECT_EQ(run("test-pair " + path("ok.csv") + " --cause x --effect x").code, 2);
}

TEST_F(Cli, MissingFileIsADataError) {
  const CliRun r = run("infer-graph " + path("missing.csv"));
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, GroupFileGivesEdges) {
  ASSERT_EQ(run("synth --kind group --seed 4 --out " + path("group.csv")).code, 0);
  const CliRun r = run("infer-graph " + path("group.csv") + " --max-lag 0.1 --n-boot 200 --json " + path("g.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto report = nlohmann::json::parse(slurp(path("g.json")));
  EXPECT_GT(report["graph"]["edges"].size(), 0u);
  EXPECT_EQ(report["graph"]["nodes"].size(), 9u);
}

TEST_F(Cli, IndependentFileGivesNoEdges) {
  ASSERT_EQ(run("synth --kind independent --seed 5 --out " + path("ind.csv")).code, 0);
  const CliRun r = run("infer-graph " + path("ind.csv") + " --n-boot 200");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("0 edge(s) among 2 series"), std::string::npos) << r.output;
}

TEST_F(Cli, InitiatorsNeedThreeColumns) {
  std::ofstream(path("two.csv")) << "a,b\n1,2\n3,4\n5,6\n7,8\n9,1\n2,3\n";
  EXPECT_EQ(run("initiators " + path("two.csv")).code, 1);
}

TEST_F(Cli, IdenticalColumnsTie) {
  std::ofstream out(path("same.csv"));
  out << "a,b,c\n";
  for (int t = 0; t < 60; ++t) {
    const double v = std::sin(0.37 * t) + 0.1 * ((t * 7919) % 13);
    out << v << ',' << v << ',' << v << '\n';
  }
  out.close();
  const CliRun r = run("initiators " + path("same.csv") + " --max-lag 5 --n-boot 100 --json " + path("s.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto report = nlohmann::json::parse(slurp(path("s.json")));
  const auto& scores = report["scores"];
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_EQ(scores[0]["score"], scores[1]["score"]);
  EXPECT_EQ(scores[1]["score"], scores[2]["score"]);
}

TEST_F(Cli, PlantedInitiatorRanksFirst) {
  const CliRun synth = run("synth --kind planted --members 5 --seed 6 --out " + path("p.csv"));
  ASSERT_EQ(synth.code, 0);
  const std::string marker = "planted initiator: ";
  const auto at = synth.output.find(marker);
  ASSERT_NE(at, std::string::npos) << synth.output;
  const std::string planted = synth.output.substr(at + marker.size(), synth.output.find('\n', at) - at - marker.size());
  const CliRun r = run("initiators " + path("p.csv") + " --max-lag 0.1 --n-boot 200 --json " + path("p.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto report = nlohmann::json::parse(slurp(path("p.json")));
  double best = -1.0;
  std::string leader;
  for (const auto& s : report["scores"]) {
    if (s["score"].get<double>() > best) {
      best = s["score"].get<double>();
      leader = s["name"];
    }
  }
  EXPECT_EQ(leader, planted);
}

TEST_F(Cli, RerunIsByteIdentical) {
  ASSERT_EQ(run("synth --kind pair --seed 8 --out " + path("pair.csv")).code, 0);
  const std::string args = "test-pair " + path("pair.csv") + " --n-boot 200 --seed 4 --json ";
  ASSERT_EQ(run(args + path("a.json")).code, 0);
  ASSERT_EQ(run(args + path("b.json")).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.json")).find("elapsed"), std::string::npos);
}

TEST_F(Cli, SynthToStdoutRoundTrips) {
  const CliRun a = run("synth --kind independent --length 50 --seed 2");
  const CliRun b = run("synth --kind independent --length 50 --seed 2");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.output.substr(0, 4), "X,Y\n");
}

TEST_F(Cli, BenchRunsASmallSuite) {
  const CliRun r = run("bench --suite pairwise --trials 2 --lag-fractions 0.1 --n-boot 100 --json " + path("b.json"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto report = nlohmann::json::parse(slurp(path("b.json")));
  EXPECT_EQ(report["cells"].size(), 1u);
}
