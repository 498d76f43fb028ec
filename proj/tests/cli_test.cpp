#include "commands.hpp"
#include "mirror/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace mirror;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mirrorchain_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static int run(std::vector<std::string> args) {
    args.insert(args.begin(), "mirrorchain");
    return cli::run(args);
  }

  static io::Json load(const std::string& p) {
    std::ifstream in(p);
    return io::Json::parse(in);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, BuildKrawtchouk) {
  ASSERT_EQ(run({"chain", "build", "--family", "krawtchouk", "--n", "8", "--out", path("k8.json")}), 0);
  const auto doc = load(path("k8.json"));
  EXPECT_EQ(doc["couplings"].size(), 8u);
  EXPECT_EQ(doc["n_sites"], 9);
}

TEST_F(CliTest, BuildHahnPredictsPeriod) {
  ASSERT_EQ(run({"chain", "build", "--family", "hahn", "--n", "6", "--p", "0", "--q", "1", "--out", path("h6.json")}), 0);
  EXPECT_DOUBLE_EQ(load(path("h6.json"))["predicted_period"].get<double>(), std::numbers::pi);
}

TEST_F(CliTest, BuildRejectsZeroQ) {
  EXPECT_NE(run({"chain", "build", "--family", "hahn", "--n", "6", "--p", "0", "--q", "0", "--out", path("bad.json")}),
            0);
  EXPECT_FALSE(fs::exists(path("bad.json")));
}

TEST_F(CliTest, VerifyHahnMirrorAuto) {
  ASSERT_EQ(run({"chain", "build", "--family", "hahn", "--n", "6", "--out", path("h6.json")}), 0);
  ASSERT_EQ(run({"verify", "--chain", path("h6.json"), "--suite", "mirror", "--time", "auto", "--out", path("r.json")}),
            0);
  const auto report = load(path("r.json"));
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_LE(report["suites"]["mirror"]["certificate"]["max_deviation"].get<double>(), 1e-8);
  EXPECT_EQ(report["suites"]["mirror"]["certificate"]["phases"].size(), 8u);
}

TEST_F(CliTest, VerifyKrawtchoukEquivalenceAndAll) {
  ASSERT_EQ(run({"chain", "build", "--family", "krawtchouk", "--n", "8", "--out", path("k8.json")}), 0);
  ASSERT_EQ(run({"verify", "--chain", path("k8.json"), "--suite", "equiv", "--out", path("e.json")}), 0);
  EXPECT_TRUE(load(path("e.json"))["suites"]["equiv"]["report"]["pass"].get<bool>());

  ASSERT_EQ(run({"verify", "--chain", path("k8.json"), "--suite", "all", "--t-max", "4", "--grid", "2000", "--out",
                 path("all.json")}),
            0);
  const auto all = load(path("all.json"));
  EXPECT_NEAR(all["suites"]["mirror"]["time"].get<double>(), std::numbers::pi / 2, 1e-8);
  EXPECT_DOUBLE_EQ(all["suites"]["mirror"]["reference_period"].get<double>(), std::numbers::pi);
  EXPECT_TRUE(all["suites"]["sectors"]["pass"].get<bool>());
}

TEST_F(CliTest, VerifyHahnLsEquivalence) {
  ASSERT_EQ(run({"chain", "build", "--family", "hahn", "--n", "3", "--p", "1", "--q", "1", "--out", path("h3.json")}), 0);
  ASSERT_EQ(run({"verify", "--chain", path("h3.json"), "--suite", "equiv", "--out", path("e.json")}), 0);
  const auto eq = load(path("e.json"))["suites"]["equiv"];
  EXPECT_EQ(eq["kind"], "l_dot_s");
  EXPECT_EQ(eq["S"], 1.5);
  EXPECT_EQ(eq["L"], 3.0);
}

TEST_F(CliTest, VerifyCustomChainFails) {
  ASSERT_EQ(run({"chain", "build", "--family", "custom", "--couplings", "1,2", "--fields", "0,0,0", "--out",
                 path("custom.json")}),
            0);
  EXPECT_EQ(run({"verify", "--chain", path("custom.json"), "--suite", "mirror", "--time", "3.14159", "--out",
                 path("r.json")}),
            cli::kExitFail);
  const auto report = load(path("r.json"));
  EXPECT_FALSE(report["pass"].get<bool>());
  EXPECT_GT(report["suites"]["mirror"]["certificate"]["max_deviation"].get<double>(), 1e-3);
}

TEST_F(CliTest, VerifyMissingFile) {
  EXPECT_EQ(run({"verify", "--chain", path("nope.json")}), cli::kExitUsage);
}

TEST_F(CliTest, FidelityCurve) {
  ASSERT_EQ(run({"chain", "build", "--family", "krawtchouk", "--n", "8", "--out", path("k8.json")}), 0);
  ASSERT_EQ(run({"fidelity", "--chain", path("k8.json"), "--t", "0:2:0.01", "--out", path("f.csv")}), 0);
  std::istringstream in(slurp(path("f.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,fidelity");
  double best = 0, best_t = 0, first = -1;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double t = std::stod(line.substr(0, comma)), f = std::stod(line.substr(comma + 1));
    if (first < 0) first = f;
    if (f > best) best = f, best_t = t;
  }
  EXPECT_LT(first, 1e-12);
  EXPECT_NEAR(best_t, 1.57, 1e-9);

  EXPECT_EQ(run({"fidelity", "--chain", path("k8.json"), "--t", "0:2", "--out", path("g.csv")}), cli::kExitUsage);
}

TEST_F(CliTest, FidelityHahnPeaksAtQPi) {
  ASSERT_EQ(run({"chain", "build", "--family", "hahn", "--n", "5", "--p", "0", "--q", "2", "--out", path("h5.json")}), 0);
  ASSERT_EQ(run({"fidelity", "--chain", path("h5.json"), "--t", "6.283185307179586:6.283185307179586:1", "--out",
                 path("f.csv")}),
            0);
  const auto csv = slurp(path("f.csv"));
  const double f = std::stod(csv.substr(csv.rfind(',') + 1));
  EXPECT_NEAR(f, 1.0, 1e-9);
}

TEST_F(CliTest, SpectrumReport) {
  ASSERT_EQ(run({"chain", "build", "--family", "krawtchouk", "--n", "4", "--out", path("k4.json")}), 0);
  ASSERT_EQ(run({"chain", "spectrum", "--chain", path("k4.json"), "--t-max", "4", "--table", path("t.csv"), "--out",
                 path("s.json")}),
            0);
  const auto doc = load(path("s.json"));
  EXPECT_NEAR(doc["mirror_time"].get<double>(), std::numbers::pi / 2, 1e-8);
  EXPECT_LT(doc["analytic_numeric_value_error"].get<double>(), 1e-8);
  EXPECT_NEAR(doc["numeric_energies"][0].get<double>(), -4.0, 1e-12);
  EXPECT_EQ(slurp(path("t.csv")).substr(0, 8), "k,l,phi\n");
}

TEST_F(CliTest, PermExamples) {
  ASSERT_EQ(run({"perm", "--target", "0,1,2", "--out", path("p.json")}), 0);
  EXPECT_TRUE(load(path("p.json"))["plan"]["steps"].empty());

  ASSERT_EQ(run({"perm", "--target", "4,3,2,1,0", "--out", path("p.json")}), 0);
  EXPECT_EQ(load(path("p.json"))["plan"]["steps"].dump(), "[[0,4]]");

  ASSERT_EQ(run({"perm", "--random", "--n", "5", "--seed", "7", "--simulate", "--out", path("r1.json")}), 0);
  ASSERT_EQ(run({"perm", "--random", "--n", "5", "--seed", "7", "--simulate", "--out", path("r2.json")}), 0);
  EXPECT_EQ(slurp(path("r1.json")), slurp(path("r2.json")));
  EXPECT_TRUE(load(path("r1.json"))["simulation"]["verified"].get<bool>());

  EXPECT_EQ(run({"perm", "--target", "0,0,1", "--out", path("bad.json")}), cli::kExitUsage);
}
