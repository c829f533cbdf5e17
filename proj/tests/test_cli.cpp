#include <gtest/gtest.h>

#include <sys/stat.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>

#include "fixtures.hpp"
#include "tptp_check.hpp"

namespace hyloc {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell with stdout captured and stderr appended.
CliRun hyloc(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " '" + std::string(HYLOC_CLI) + "' " + args + " 2>&1";
  CliRun r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return "'" + testing::data_path(name) + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hyloc-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    write("e.hspec",
          "spec E =\n"
          "  hlogic : HPROP\n"
          "  props p, q\n"
          "  nominals i\n"
          "  modality l : 2\n"
          "end\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return "'" + p.string() + "'";
  }
  std::string path(const std::string& name) const { return "'" + (dir_ / name).string() + "'"; }

  fs::path dir_;
};

TEST_F(Cli, ParseReportsCounts) {
  CliRun r = hyloc("parse " + data("calc.hspec"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ok: 2 specs, 7 axioms"), std::string::npos) << r.out;
}

TEST_F(Cli, ParseMissingFileAndMalformedAxiom) {
  EXPECT_EQ(hyloc("parse " + path("absent.hspec")).code, 2);
  std::string bad = write("bad.hspec", "spec B =\n  hlogic : HPROP\n  props p\n  . p /\\\nend\n");
  CliRun r = hyloc("parse " + bad);
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(std::regex_search(r.out, std::regex("bad\\.hspec:5:1: error: "))) << r.out;
  EXPECT_EQ(hyloc("").code, 2);
  EXPECT_EQ(hyloc("frobnicate").code, 2);
}

TEST_F(Cli, CheckZ5Model) {
  CliRun r = hyloc("check " + data("calc.hspec") + " " + data("calc_z5.hmodel"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("7/7 axioms hold"), std::string::npos) << r.out;
}

TEST_F(Cli, CheckMultiplicationModel) {
  CliRun r = hyloc("check " + data("calc.hspec") + " " + data("calc_mult.hmodel"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("axiom 5: fails at world s, m=1\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("axiom 6: fails at world s"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("4/7 axioms hold"), std::string::npos) << r.out;
}

TEST_F(Cli, CheckRigidityViolation) {
  CliRun r = hyloc("check " + data("calc.hspec") + " " + data("calc_rigidity.hmodel"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("violation: rigid sort Nat"), std::string::npos) << r.out;
}

TEST_F(Cli, CheckUsageErrors) {
  EXPECT_EQ(hyloc("check " + data("calc.hspec") + " " + path("none.hmodel")).code, 2);
  EXPECT_EQ(hyloc("check " + data("calc.hspec") + " " + data("calc_z5.hmodel") + " --spec Nope").code, 2);
  std::string model = write("e.hmodel", "worlds w\nnominal i = w\n");
  EXPECT_EQ(hyloc("check " + data("calc.hspec") + " " + model).code, 2);
}

TEST_F(Cli, EncodeAllAxiomsAndGoal) {
  CliRun r = hyloc("encode " + data("calc.hspec") + " --all-axioms");
  ASSERT_EQ(r.code, 0) << r.out;
  testing::TptpReport rep = testing::check_tptp(r.out);
  ASSERT_TRUE(rep.ok()) << rep.errors[0];
  EXPECT_EQ(rep.conjectures, 0);
  EXPECT_EQ(rep.axioms, 14);

  std::string out = (dir_ / "goal.p").string();
  r = hyloc("encode " + data("calc.hspec") + " --goal '@ sum : <shift> mult' --out '" + out + "' --dump-sorted " + path("sorted.txt"));
  ASSERT_EQ(r.code, 0) << r.out;
  std::string text = testing::read_file(out);
  rep = testing::check_tptp(text);
  ASSERT_TRUE(rep.ok()) << rep.errors[0];
  EXPECT_EQ(rep.conjectures, 1);
  EXPECT_NE(text.find("r_shift(n_sum,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "sorted.txt"));

  r = hyloc("encode " + path("e.hspec") + " --goal 'p \\/ not p'");
  ASSERT_EQ(r.code, 0) << r.out;
  rep = testing::check_tptp(r.out);
  ASSERT_TRUE(rep.ok()) << rep.errors[0];
  EXPECT_EQ(rep.conjectures, 1);
  EXPECT_EQ(hyloc("encode " + path("e.hspec") + " --goal 'p /\\'").code, 2);
}

TEST_F(Cli, ProveBoundedCountermodelRoundTrip) {
  std::string model = (dir_ / "cm.hmodel").string();
  CliRun r = hyloc("prove " + path("e.hspec") + " --goal '@ i p => p' --strategy bounded --model-out '" + model + "'");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_TRUE(std::regex_match(r.out, std::regex("COUNTERSAT bounded\\(worlds=2,carrier=1\\) model=\\S+ \\d+\\.\\d{3}s\n")))
      << r.out;
  r = hyloc("check " + path("e.hspec") + " '" + model + "' --goal '@ i p => p'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("goal 1: fails"), std::string::npos) << r.out;

  r = hyloc("prove " + path("e.hspec") + " --goal '@ i : i' --strategy bounded");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.out.rfind("UNKNOWN bounded(worlds=2,carrier=1)", 0), 0u) << r.out;
}

TEST_F(Cli, ProveExternalTimeoutAndErrors) {
  std::string script = (dir_ / "slow.sh").string();
  std::ofstream(script) << "#!/bin/sh\nsleep 20\n";
  ::chmod(script.c_str(), 0755);
  std::string reg = write("provers.conf", "id = slow\npath = " + script + "\n");
  std::string env = "HYLOC_PROVERS=" + reg;
  CliRun r = hyloc("prove " + path("e.hspec") + " --goal '@ i : i' --strategy external --timeout 0.001", env);
  EXPECT_EQ(r.code, 3) << r.out;
  EXPECT_EQ(r.out.rfind("UNKNOWN slow ", 0), 0u) << r.out;

  r = hyloc("prove " + path("e.hspec") + " --goal '@ i : i' --strategy external --prover nope", env);
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_EQ(hyloc("prove " + path("e.hspec") + " --goal '@ i : i' --strategy sideways").code, 2);
}

TEST_F(Cli, ProveExternalWithInstalledProver) {
  std::string reg = "'" + std::string(HYLOC_CONFIG_DIR) + "/provers.conf'";
  CliRun r = hyloc("prove " + data("calc.hspec") + " --goal '@ sum : <shift> mult' --strategy external --provers " + reg);
  if (r.out.find("not found") != std::string::npos || r.out.find("no available prover") != std::string::npos)
    GTEST_SKIP() << "no external prover installed: " << r.out;
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("PROVED ", 0), 0u) << r.out;
}

TEST_F(Cli, CountermodelClosedLoop) {
  std::string out = (dir_ / "found.hmodel").string();
  CliRun r = hyloc("countermodel " + path("e.hspec") + " --goal '@ i p => p' --max-worlds 2 --max-carrier 1 --out '" +
                out + "'");
  EXPECT_EQ(r.code, 1) << r.out;
  r = hyloc("check " + path("e.hspec") + " '" + out + "' --goal '@ i p => p'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("goal 1: fails"), std::string::npos) << r.out;

  CliRun a = hyloc("countermodel " + path("e.hspec") + " --goal '<l> p => p'");
  CliRun b = hyloc("countermodel " + path("e.hspec") + " --goal '<l> p => p'");
  EXPECT_EQ(a.code, 1);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("worlds w0, w1"), std::string::npos) << a.out;

  r = hyloc("countermodel " + path("e.hspec") + " --goal '@ i : i'");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.out, "none within bounds\n");

  EXPECT_EQ(hyloc("countermodel " + path("e.hspec") + " --goal p --max-worlds 0").code, 2);
  EXPECT_EQ(hyloc("countermodel " + path("e.hspec") + " --goal p --max-worlds 9").code, 2);
}

}  // namespace
}  // namespace hyloc
