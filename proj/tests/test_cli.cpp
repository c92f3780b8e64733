#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out, err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run(const std::string& args) {
  const std::string dir = DEGEN_TEST_WORK_DIR;
  const std::string out = dir + "/cli_stdout.txt", err = dir + "/cli_stderr.txt";
  const std::string cmd = std::string(DEGEN_CLI) + " " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string sample(const std::string& name) { return std::string(DEGEN_SAMPLES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, AnalyzeAnnihilationRing) {
  const CliRun r = run("analyze --config " + sample("unit_ring_annihilation.ini"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = nlohmann::ordered_json::parse(r.out);
  ASSERT_EQ(j["rings"].size(), 1u);
  EXPECT_EQ(j["rings"][0]["m"], 0);
  EXPECT_EQ(j["rings"][0]["rind"], -1);
  EXPECT_EQ(j["rings"][0]["winding"], 1);
  EXPECT_EQ(j["rings"][0]["classification"], "Annihilation");
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"rings", "open_curves", "zeros", "warnings", "complete"}));
  std::vector<std::string> ring_keys;
  for (const auto& [k, v] : j["rings"][0].items()) ring_keys.push_back(k);
  EXPECT_EQ(ring_keys, (std::vector<std::string>{"vertex_count", "arc_length", "m", "rind", "winding",
                                                 "classification", "tangency_points"}));
}

TEST(Cli, LemniscateIsAnalysisError) {
  const CliRun r = run("analyze --config " + sample("lemniscate.ini"));
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("NonRegularLevelSet"), std::string::npos);
}

TEST(Cli, MissingE2IsConfigError) {
  const CliRun r = run("analyze --config " + sample("missing_e2.ini"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("E2"), std::string::npos);
}

TEST(Cli, MissingFileAndBadFlags) {
  EXPECT_EQ(run("analyze --config /nonexistent/x.ini").exit_code, 1);
  EXPECT_EQ(run("analyze").exit_code, 1);
  EXPECT_EQ(run("frobnicate --config " + sample("plain_sink.ini")).exit_code, 1);
  EXPECT_EQ(run("integrate --config " + sample("plain_sink.ini") + " --x0 1").exit_code, 1);
}

TEST(Cli, PhCheckGoldens) {
  for (const char* name : {"sphere_annihilation.ini", "sphere_creation.ini", "sphere_plain_sink.ini"}) {
    const CliRun r = run("ph-check --config " + sample(name));
    EXPECT_EQ(r.exit_code, 0) << name << r.out;
    EXPECT_EQ(r.out, "{\n  \"sum\": \"2(S1)-1(Z1)\",\n  \"holds\": true\n}\n") << name;
  }
  const CliRun saddle = run("ph-check --config " + sample("sphere_saddle.ini"));
  EXPECT_EQ(saddle.exit_code, 2);
  EXPECT_NE(saddle.out.find("UnsupportedZeroKind"), std::string::npos);
  EXPECT_EQ(run("ph-check --config " + sample("unit_ring_annihilation.ini")).exit_code, 1);
}

TEST(Cli, PhCheckOverlapMismatch) {
  const std::string path = std::string(DEGEN_TEST_WORK_DIR) + "/wrong_south.ini";
  std::ofstream(path) << "[analysis]\nmode = sphere\n"
                         "[north]\nf = 1\nE1 = -x2\nE2 = x1\n"
                         "[south]\nf = 1\nE1 = -x2\nE2 = x1\n[domain]\ngrid_n = 64\n";
  const CliRun r = run("ph-check --config " + path);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("OverlapMismatch"), std::string::npos);
}

TEST(Cli, PhCheckFailsWhenDomainMissesTheRing) {
  // neither chart sees |z| = 1 from [-0.5, 0.5]^2: the ring is lost and the
  // sum is 2(S1)+0(Z1)
  const std::string path = std::string(DEGEN_TEST_WORK_DIR) + "/small_domain.ini";
  std::ofstream(path) << "[analysis]\nmode = sphere\n"
                         "[fields]\nf = \"x1^2 + x2^2 - 1\"\nE1 = -x2\nE2 = x1\n"
                         "[domain]\nxmin = -0.5\nxmax = 0.5\nymin = -0.5\nymax = 0.5\ngrid_n = 64\n";
  const CliRun r = run("ph-check --config " + path);
  EXPECT_EQ(r.exit_code, 3);
  const auto j = nlohmann::ordered_json::parse(r.out);
  EXPECT_EQ(j["sum"], "2(S1)+0(Z1)");
  EXPECT_FALSE(j["holds"]);
  ASSERT_EQ(j["warnings"].size(), 1u);
  EXPECT_NE(j["warnings"][0].get<std::string>().find("unit disc"), std::string::npos);
}

TEST(Cli, IntegrateRingArrival) {
  const CliRun r = run("integrate --config " + sample("unit_ring_annihilation.ini") + " --x0 2,0");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = nlohmann::ordered_json::parse(r.out);
  EXPECT_EQ(j["termination"], "RingHit");
  EXPECT_EQ(j["ring_id"], 0);
  EXPECT_NEAR(j["t_end"].get<double>(), 1.5 - std::log(2.0), 1e-3);
  EXPECT_EQ(j["t"].size(), j["x"].size());
  const CliRun on = run("integrate --config " + sample("unit_ring_annihilation.ini") + " --x0 1,0");
  EXPECT_EQ(on.exit_code, 2);
  EXPECT_NE(on.out.find("StartsOnRing"), std::string::npos);
}

TEST(Cli, HomotopyFamilies) {
  const CliRun rot = run("homotopy --config " + sample("homotopy_rotation.ini") + " --samples 11");
  ASSERT_EQ(rot.exit_code, 0) << rot.err;
  const auto a = nlohmann::ordered_json::parse(rot.out);
  EXPECT_EQ(a["samples"].size(), 11u);
  EXPECT_TRUE(a["admissible"]);
  EXPECT_TRUE(a["rind_constant"]);
  const auto b = nlohmann::ordered_json::parse(run("homotopy --config " + sample("homotopy_to_constant.ini")).out);
  EXPECT_FALSE(b["admissible"]);
  EXPECT_EQ(b["samples"].size(), 21u);
  EXPECT_EQ(run("homotopy --config " + sample("unit_ring_annihilation.ini")).exit_code, 1);
}

TEST(Cli, PortraitWritesFileAndIsDeterministic) {
  const std::string dir = DEGEN_TEST_WORK_DIR;
  for (const char* name : {"unit_ring_annihilation", "unit_ring_creation", "plain_sink"}) {
    const std::string a = dir + "/" + name + ".a.svg", b = dir + "/" + name + ".b.svg";
    ASSERT_EQ(run("portrait --config " + sample(std::string(name) + ".ini") + " --out " + a).exit_code, 0);
    ASSERT_EQ(run("portrait --config " + sample(std::string(name) + ".ini") + " --out " + b).exit_code, 0);
    const std::string sa = slurp(a);
    EXPECT_EQ(sa.rfind("<?xml", 0), 0u) << name;
    EXPECT_NE(sa.find("<svg"), std::string::npos) << name;
    EXPECT_EQ(sa, slurp(b)) << name;
  }
  const CliRun lem = run("portrait --config " + sample("lemniscate.ini") + " --out " + dir + "/lem.svg");
  EXPECT_EQ(lem.exit_code, 2);
  EXPECT_NE(lem.out.find("NonRegularLevelSet"), std::string::npos);
}
