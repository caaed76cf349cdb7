#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// stdout only; the environment never supplies CHARCLASS_DATA unless asked.
CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = "env -u CHARCLASS_DATA " + env + " " + CHARCLASS_CLI + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json run_json(const std::string& args, int expected_code = 0, const std::string& env = "") {
  const CliRun r = run("--json " + args, env);
  EXPECT_EQ(r.code, expected_code) << args << "\n" << r.out;
  return nlohmann::json::parse(r.out);
}

const std::string kData = CHARCLASS_DATA_DIR;

}  // namespace

TEST(Cli, RingPoincare) {
  const CliRun r = run("ring BGO 3 --poincare --max-degree 6");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("poincare: 1,0,2,1,3,2,5"), std::string::npos) << r.out;
  const auto j = run_json("ring BGO 3 --poincare --max-degree 6");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["poincare"], nlohmann::json({1, 0, 2, 1, 3, 2, 5}));
}

TEST(Cli, RingBasis) {
  const auto j = run_json("ring BO 2 --basis 4");
  EXPECT_EQ(j["basis"]["elements"], nlohmann::json({"w1^4", "w1^2*w2", "w2^2"}));
}

TEST(Cli, RingRefusesAboveCap) { EXPECT_EQ(run("ring BO 2 --basis 7 --max-degree 6").code, 1); }

TEST(Cli, EvenRingNeedsData) {
  const auto j = run_json("ring BGO 4", 2);
  EXPECT_EQ(j["error"]["kind"], "data-required");
  EXPECT_NE(j["error"]["message"].get<std::string>().find("\"relations\""), std::string::npos);
  EXPECT_EQ(run("ring BGO 2", "CHARCLASS_DATA=" + kData).code, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("ring FOO 2").code, 1);
  EXPECT_EQ(run("ring BO").code, 1);
  EXPECT_EQ(run("quad explode --entries '[[[1]]]'").code, 1);
}

TEST(Cli, Primitive) {
  EXPECT_EQ(run_json("primitive BGO 3 --degree 5")["basis"], nlohmann::json({"w2*w3"}));
  EXPECT_EQ(run_json("primitive BGO 3 --degree 2")["basis"], nlohmann::json({"w2"}));
  EXPECT_EQ(run_json("primitive BGO 3 --degree 0")["basis"], nlohmann::json({"1"}));
  EXPECT_EQ(run("primitive BO 3 --degree 2").code, 1);
}

TEST(Cli, Delta) {
  EXPECT_EQ(run_json("delta 3 --alpha 1")["delta"], "0");
  const auto rejected = run_json("delta 3 --alpha c", 1);
  EXPECT_EQ(rejected["residue"], "cK");
  EXPECT_EQ(run_json("delta 3 --alpha w2 --target-file " + kData + "/bgo2.json")["delta"], "a1");
  EXPECT_EQ(run_json("delta 3 --alpha w2*w3", 0, "CHARCLASS_DATA=" + kData)["delta"], "a1^4");
  EXPECT_EQ(run_json("delta 3 --alpha w2", 2)["error"]["kind"], "data-required");
  EXPECT_EQ(run_json("delta 2 --alpha a1^3", 0, "CHARCLASS_DATA=" + kData)["delta"], "c");
}

TEST(Cli, Verify) {
  const auto ok = run_json("verify --file " + kData + "/bgo2.json");
  EXPECT_EQ(ok["ok"], true);
  EXPECT_EQ(run("verify --file " + kData + "/bgo3.json").code, 0);

  const std::string bad = ::testing::TempDir() + "bgo2_dropped.json";
  auto doc = nlohmann::json::parse(std::ifstream(kData + "/bgo2.json"));
  doc["relations"] = nlohmann::json::array();
  std::ofstream(bad) << doc.dump();
  const auto j = run_json("verify --file " + bad + " --max-degree 8", 3);
  EXPECT_EQ(j["status"], "error");
  ASSERT_FALSE(j["failures"].empty());
  EXPECT_EQ(j["failures"][0]["check"], "exactness");
  EXPECT_EQ(j["failures"][0]["degree"], 2);

  EXPECT_EQ(run("verify --file /nonexistent.json").code, 2);
}

TEST(Cli, QuadCommands) {
  EXPECT_EQ(run("quad mult --entries '[[[0,0,1],[0]],[[0],[1]]]'").out, "2\n");
  const auto red = run_json("quad reduce --entries '[[[0,1],[0],[0]],[[0],[1],[0]],[[0],[0],[1]]]'");
  EXPECT_EQ(red["reduced"]["m"], 2);
  EXPECT_EQ(red["reduced"]["diagonal"], nlohmann::json({"1", "1"}));

  const auto prof = run_json("quad profile --entries '[[[0,1],[0],[0]],[[0],[0,1],[0]],[[0],[0],[1]]]'");
  EXPECT_EQ(prof["mildly_degenerating"], false);
  EXPECT_NE(prof["diagnosis"].get<std::string>().find("n-2: not minimally degenerate"), std::string::npos);

  const auto model = run_json("quad model --form '[[1,0],[0,1]]' --field Fp --p 5");
  const std::string path = ::testing::TempDir() + "model_f5.json";
  std::ofstream(path) << model["triple"].dump();
  const auto b = run_json("quad boundary --triple " + path + " --alpha w2 --target-file " + kData + "/bgo2.json");
  EXPECT_EQ(b["nu"], 1);
  EXPECT_EQ(b["parity"], 1);
  EXPECT_EQ(b["delta"], "a1");
  EXPECT_EQ(b["boundary"], "a1");

  EXPECT_EQ(run("quad mult --entries '[[[0],[0]],[[0],[1]]]'").code, 1);
  EXPECT_EQ(run("quad mult --entries '[[[1],[2]],[[3],[1]]]'").code, 1);
  EXPECT_EQ(run("quad mult").code, 1);
}

TEST(Cli, Deterministic) {
  const std::string args = "--json ring BGO 5 --poincare";
  EXPECT_EQ(run(args).out, run(args).out);
}
