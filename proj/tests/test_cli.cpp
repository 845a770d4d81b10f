#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "cli.hpp"

using namespace liouville;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST(Cli, Classify) {
  const Outcome o = call({"classify", "--m", "2", "--p", "2", "--q", "0"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_EQ(j["region"], "G1");
  EXPECT_EQ(j["growth"]["alpha"], 4.0);
  EXPECT_EQ(j["growth"]["beta"], 1.0);
  EXPECT_EQ(j["k_region"]["tag"], "K2");
  EXPECT_EQ(j["admissible_a"][0], 0.0);
  EXPECT_EQ(j["admissible_a"][1], 1.0);
}

TEST(Cli, ConstructThenVerify) {
  const std::string path = temp_path("liouville_cli_g5.json");
  const Outcome c = call({"construct", "--m", "2", "--p", "1", "--q", "0", "--iota", "2", "--out", path});
  ASSERT_EQ(c.code, 0) << c.err;
  const Outcome v = call({"verify", "--solution", path});
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_TRUE(Json::parse(v.out)["report"]["pass"].get<bool>());

  const Outcome m = call({"certify-volume", "--manifold", path, "--lambda", "2", "--window", "1e1:1e3"});
  EXPECT_EQ(m.code, 0) << m.err;
  const Outcome bad = call({"certify-volume", "--manifold", path, "--lambda", "1", "--window", "1e1:1e3"});
  EXPECT_EQ(bad.code, 1);
  std::remove(path.c_str());
}

TEST(Cli, DeterministicForFixedSeed) {
  const std::vector<std::string> args{"construct", "--m", "2", "--p", "-1", "--q", "0", "--seed", "7"};
  const Outcome a = call(args), b = call(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CsvGrid) {
  const Outcome o = call({"construct", "--m", "2", "--p", "2", "--q", "0", "--points", "50",
                          "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r,u,du,residual_over_S,ratio");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 50);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({"classify", "--m", "2", "--p", "2", "--q", "0", "--bogus", "1"}).code, 2);
  EXPECT_EQ(call({"classify", "--m", "2", "--p", "2"}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"classify", "--m", "0.5", "--p", "2", "--q", "0"}).code, 2);
  EXPECT_EQ(call({"construct", "--m", "2", "--p", "2", "--q", "0", "--window", "5"}).code, 2);
  EXPECT_EQ(call({"verify", "--solution", "/nonexistent.json"}).code, 2);
}

TEST(Cli, ThresholdFailureExitsOne) {
  const Outcome o = call({"construct", "--m", "3", "--p", "2", "--q", "0", "--iota", "2.9"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("threshold"), std::string::npos);
}

TEST(Cli, OtherVerbs) {
  const Outcome e = call({"exponents", "--m", "2", "--p", "1", "--q", "0"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(Json::parse(e.out)["region"], "G5");
  EXPECT_TRUE(Json::parse(e.out).contains("kappa_threshold"));

  const Outcome l = call({"lemma1", "--m", "2", "--p", "2", "--q", "0", "--i", "4"});
  EXPECT_EQ(l.code, 0) << l.err;

  const Outcome c = call({"criteria", "--alpha", "2", "--m", "2"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(Json::parse(c.out)["criteria"]["parabolic"]["verdict"], "divergent");

  const Outcome i = call({"info"});
  EXPECT_EQ(i.code, 0);
  EXPECT_EQ(Json::parse(i.out)["default_seed"], 42);
}
