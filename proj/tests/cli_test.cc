#include "cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "test_util.h"
#include "toca/repetita.h"

namespace toca {
namespace {

namespace fs = std::filesystem;
using testing::data_path;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "toca_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimize"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--topology", data_path("fig2.graph"), "--rho", "1.5"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--topology", data_path("fig2.graph"), "--algo", "magic"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"optimize", "--topology", data_path("fig2.graph"), "--format", "xml"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run({"optimize", "--topology", "/nonexistent.graph"}).code, cli::kExitUsage);
  fs::path bad = scratch("bad.graph");
  std::ofstream(bad) << "NODES 2\nlabel x y\na 0 0\n";
  Result r = run({"optimize", "--topology", bad.string()});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("line"), std::string::npos);
}

TEST(Cli, OptimizeFig2Json) {
  Result r = run({"optimize", "--topology", data_path("fig2.graph"), "--connections", "1",
                  "--algo", "rnd,dwn,up,exact"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["nodes"], 5);
  ASSERT_EQ(j["runs"].size(), 4u);
  std::map<std::string, int> z;
  for (const auto& run : j["runs"]) z[run["algorithm"]] = run["z"];
  EXPECT_EQ(z["RND"], 7);
  EXPECT_EQ(z["DWN"], 5);
  EXPECT_EQ(z["UP"], 5);
  EXPECT_EQ(z["EXACT"], 5);
  EXPECT_EQ(j["runs"][0]["lp_objective"], "7/2");
  EXPECT_DOUBLE_EQ(j["runs"][0]["ratio_to_exact"].get<double>(), 1.4);
}

TEST(Cli, OptimizeWritesActivationFilesAndEvaluates) {
  fs::path out = scratch("tri.json");
  Result r = run({"optimize", "--topology", data_path("triangle.graph"), "--connections", "1",
                  "--algo", "exact", "--out", out.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  fs::path act = scratch("tri.exact.act");
  ASSERT_TRUE(fs::exists(act));
  Topology topo = load_topology(data_path("triangle.graph"), 1);
  EXPECT_EQ(parse_activation(read_file(act), topo).total(), 2);

  Result ev = run({"evaluate", "--topology", data_path("triangle.graph"), "--connections", "1",
                   "--activation", act.string(), "--worst-case", "--router", "all",
                   "--format", "csv"});
  ASSERT_EQ(ev.code, cli::kExitOk) << ev.err;
  EXPECT_NE(ev.out.find("worst-case,MCF,1,1"), std::string::npos) << ev.out;
  EXPECT_NE(ev.out.find("SPR"), std::string::npos);
}

TEST(Cli, EvaluateSamples) {
  Result r = run({"evaluate", "--topology", data_path("fig2.graph"), "--samples", "3",
                  "--seed", "4", "--router", "mcf"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["evaluations"].size(), 3u);
}

TEST(Cli, EvaluateWithTrafficFile) {
  Result r = run({"evaluate", "--topology", data_path("repetita/Latnet.graph"), "--traffic",
                  data_path("repetita/Latnet.0000.demands"), "--unscaled", "--router", "spr",
                  "--format", "csv"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("Latnet.0000"), std::string::npos) << r.out;
}

TEST(Cli, OracleCrossCheckAndRefusal) {
  Result ok = run({"oracle", "--topology", data_path("fig2.graph"), "--connections", "1",
                   "--cross-check"});
  ASSERT_EQ(ok.code, cli::kExitOk) << ok.err;
  auto j = nlohmann::json::parse(ok.out);
  EXPECT_EQ(j["value"], 5);
  Result refused = run({"oracle", "--topology", data_path("repetita/Latnet.graph")});
  EXPECT_EQ(refused.code, cli::kExitRefused);
  Result limited = run({"oracle", "--topology", data_path("fig2.graph"), "--limit", "10"});
  EXPECT_EQ(limited.code, cli::kExitRefused);
}

TEST(Cli, BenchOnSmallDataset) {
  fs::path dir = scratch("mini");
  fs::create_directories(dir);
  fs::copy_file(data_path("triangle.graph"), dir / "triangle.graph",
                fs::copy_options::overwrite_existing);
  std::ofstream(dir / "triangle.0000.demands") << "DEMANDS 1\nlabel src dest bw\nd 0 1 1\n";
  fs::path out = scratch("mini_bench");
  Result r = run({"bench", "--dataset", dir.string(), "--min-nodes", "0", "--connections",
                  "1", "--algo", "rnd,exact", "--router", "mcf", "--out", out.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::string runs = read_file(out.string() + ".runs.csv");
  EXPECT_NE(runs.find("triangle,3,3,OBLIVIOUS,,RND,3"), std::string::npos) << runs;
  std::string mlu = read_file(out.string() + ".mlu.csv");
  EXPECT_NE(mlu.find("MCF"), std::string::npos);
  auto j = nlohmann::json::parse(read_file(out.string() + ".json"));
  EXPECT_EQ(j["schema"], 1);
}

TEST(Cli, BenchOnEmptyDirectory) {
  fs::path dir = scratch("empty");
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path out = scratch("empty_bench");
  Result r = run({"bench", "--dataset", dir.string(), "--out", out.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::string runs = read_file(out.string() + ".runs.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 1);
}

}  // namespace
}  // namespace toca
