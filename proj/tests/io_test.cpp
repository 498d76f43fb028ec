#include "mirror/io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mirror;

TEST(ChainJson, FieldOrderAndFamily) {
  const auto doc = io::to_json(hahn_chain(2, 0, 1));
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"n_sites", "couplings", "fields", "family", "predicted_period"}));
  EXPECT_EQ(doc["family"]["kind"], "hahn");
  EXPECT_EQ(doc["family"]["p"], 0);
  EXPECT_EQ(doc["family"]["q"], 1);
  EXPECT_EQ(doc["n_sites"], 3);

  const auto k = io::to_json(krawtchouk_chain(8));
  EXPECT_EQ(k["couplings"].size(), 8u);
  EXPECT_TRUE(k["predicted_period"].is_null());
  EXPECT_FALSE(k["family"].contains("p"));
}

TEST(ChainJson, RoundTripIsBitExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial;
    Eigen::VectorXd j(n), h(n + 1);
    for (auto& x : j) x = u(rng);
    for (auto& x : h) x = u(rng);
    for (const auto& spec : {custom_chain<double>(j, h), krawtchouk_chain(n), hahn_chain(n, 1, 3)}) {
      const auto text = io::to_json(spec).dump();
      const auto back = io::chain_from_json(io::Json::parse(text));
      EXPECT_EQ(back.couplings, spec.couplings);
      EXPECT_EQ(back.fields, spec.fields);
      EXPECT_EQ(back.family.index(), spec.family.index());
      EXPECT_EQ(back.predicted_period, spec.predicted_period);
    }
  }
}

TEST(ChainJson, RejectsInconsistentDocuments) {
  auto doc = io::to_json(krawtchouk_chain(3));
  doc["couplings"][0] = 5.0;
  EXPECT_THROW(io::chain_from_json(doc), std::invalid_argument);

  auto bad_len = io::to_json(krawtchouk_chain(3));
  bad_len["family"]["kind"] = "custom";
  bad_len["fields"].push_back(0.0);
  EXPECT_THROW(io::chain_from_json(bad_len), std::invalid_argument);

  auto unknown = io::to_json(krawtchouk_chain(3));
  unknown["family"]["kind"] = "laguerre";
  EXPECT_THROW(io::chain_from_json(unknown), std::invalid_argument);
}

TEST(CertificateJson, Schema) {
  MirrorCertificate<double> cert;
  cert.time = 1.5;
  cert.per_sector_phase = {{1, 0}, {0, -1}};
  cert.max_deviation = 2e-12;
  const auto doc = io::to_json(cert);
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"time", "phases", "max_deviation", "pass"}));
  EXPECT_EQ(doc["phases"][1]["m"], 1);
  EXPECT_EQ(doc["phases"][1]["im"], -1.0);
  EXPECT_TRUE(doc["pass"].get<bool>());
}

TEST(PlanJson, RoundTrip) {
  const ReversalPlan plan{5, {{0, 4}, {1, 3}}};
  const auto doc = io::to_json(plan);
  EXPECT_EQ(doc.dump(), R"({"n_sites":5,"steps":[[0,4],[1,3]]})");
  const auto back = io::plan_from_json(doc);
  EXPECT_EQ(back.steps, plan.steps);
  EXPECT_THROW(io::plan_from_json(io::Json::parse(R"({"n_sites":3,"steps":[[1,5]]})")), std::invalid_argument);
}

TEST(TimeGrid, Parse) {
  const auto g = io::parse_time_grid("0:10:0.01");
  EXPECT_EQ(g.points().size(), 1001u);
  EXPECT_EQ(g.points().front(), 0.0);
  EXPECT_NEAR(g.points().back(), 10.0, 1e-12);
  EXPECT_THROW(io::parse_time_grid("0:10"), std::invalid_argument);
  EXPECT_THROW(io::parse_time_grid("0:10:0"), std::invalid_argument);
  EXPECT_THROW(io::parse_time_grid("a:1:0.1"), std::invalid_argument);
  EXPECT_THROW(io::parse_time_grid("5:1:0.1"), std::invalid_argument);
}

TEST(FidelityCsv, HeaderAndPrecision) {
  const auto csv = io::fidelity_csv(numeric_eigensystem(krawtchouk_chain(1)), io::parse_time_grid("0:1.5707963267948966:0.7853981633974483"));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,fidelity");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], "0.785398163397,0.707106781187");
  EXPECT_EQ(rows[2], "1.57079632679,1");
}
