#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <contactdyn/report_io.hpp>

#include "app.hpp"

namespace fs = std::filesystem;
using contactvir::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(CONTACTVIR_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

contactdyn::KeyValues read_report(const fs::path& file) {
  std::ifstream in(file);
  return contactdyn::read_key_values(in);
}

std::size_t count_lines(const fs::path& file) {
  std::ifstream in(file);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST(Cli, ListSystems) {
  const auto r = cli({"list-systems"});
  EXPECT_EQ(r.code, 0);
  for (const char* name : {"damped_oscillator", "parachute", "brownian_oscillator (stochastic)",
                           "gierer_meinhardt"}) {
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
  }
}

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  const auto v = cli({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(contactdyn::version()), std::string::npos);
}

TEST(Cli, MissingSubcommandIsAnError) {
  EXPECT_NE(cli({}).code, 0);
  EXPECT_NE(cli({"simulate", "--no-such-flag"}).code, 0);
}

TEST(Cli, SimulateWritesArtifacts) {
  const auto dir = scratch("simulate");
  const auto r = cli({"simulate", "--system", "damped_oscillator", "-p", "gamma=0.2", "-T", "10",
                      "--csv-stride", "100", "-o", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir / "running_averages.csv"));
  // Header plus samples 0, 100, ..., 10000.
  EXPECT_EQ(count_lines(dir / "trajectory.csv"), 102u);
  const auto kv = read_report(dir / "report.txt");
  EXPECT_EQ(contactdyn::lookup(kv, "param.gamma"), "0.20000000000000001");
  EXPECT_LT(std::abs(std::stod(contactdyn::lookup(kv, "residual_exact"))), 1e-8);
  EXPECT_EQ(contactdyn::lookup(kv, "samples"), "10001");
  EXPECT_NE(r.out.find("residual_exact"), std::string::npos);
}

TEST(Cli, VirialFromConfigFileWithOverride) {
  const auto dir = scratch("config");
  {
    std::ofstream cfg(dir / "exp.json");
    cfg << R"({
      // Lagrangian chart of the parachute
      "system": "parachute",
      "chart": "lagrangian",
      "horizon": 20,
      "params": {"lambda": 0.25}
    })";
  }
  const auto r = cli({"virial", "-c", (dir / "exp.json").string(), "-T", "5", "-o",
                      (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = read_report(dir / "out" / "report.txt");
  EXPECT_EQ(contactdyn::lookup(kv, "chart"), "lagrangian");
  EXPECT_EQ(std::stod(contactdyn::lookup(kv, "t_end")), 5.0);
  EXPECT_EQ(std::stod(contactdyn::lookup(kv, "param.lambda")), 0.25);
  EXPECT_FALSE(fs::exists(dir / "out" / "trajectory.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "running_averages.csv"));
}

TEST(Cli, ConfigErrors) {
  const auto dir = scratch("errors");
  EXPECT_EQ(cli({"virial", "--system", "pendulum", "-o", dir.string()}).code, 2);
  EXPECT_EQ(cli({"virial", "--system", "damped_oscillator", "-p", "gamma=-1", "-o", dir.string()})
                .code,
            2);
  EXPECT_EQ(cli({"virial", "--system", "damped_oscillator", "-p", "gamma", "-o", dir.string()})
                .code,
            2);
  EXPECT_EQ(cli({"virial", "--system", "damped_oscillator", "--chart", "extended", "-o",
                 dir.string()})
                .code,
            2);
  EXPECT_EQ(cli({"virial", "--system", "damped_oscillator", "--integrator", "euler-maruyama",
                 "-o", dir.string()})
                .code,
            2);
  EXPECT_EQ(cli({"check-identity", "--system", "brownian_oscillator", "-o", dir.string()}).code,
            2);
  EXPECT_EQ(cli({"ensemble", "--system", "damped_oscillator", "-o", dir.string()}).code, 2);
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"system": "damped_oscillator", "horizon": 10, "colour": "red"})";
  }
  const auto r = cli({"virial", "-c", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  EXPECT_EQ(cli({"virial", "-c", (dir / "missing.json").string()}).code, 2);
}

TEST(Cli, AbortWritesPartialOutputs) {
  const auto dir = scratch("abort");
  {
    std::ofstream cfg(dir / "exp.json");
    cfg << R"({"system": "parachute", "params": {"lambda": 3}, "initial_state": [0, 10, 0],
               "horizon": 10})";
  }
  const auto r = cli({"simulate", "-c", (dir / "exp.json").string(), "-o", dir.string()});
  EXPECT_EQ(r.code, 3);
  const auto kv = read_report(dir / "report.txt");
  EXPECT_EQ(contactdyn::lookup(kv, "status"), "aborted");
  EXPECT_FALSE(contactdyn::lookup(kv, "abort_reason").empty());
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));
}

TEST(Cli, IdentityBreachIsVerificationFailure) {
  const auto dir = scratch("breach");
  const auto r = cli({"check-identity", "--system", "damped_oscillator", "--dt", "0.1", "-T",
                      "20", "--residual-tolerance", "1e-300", "-o", dir.string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("exceeds tolerance"), std::string::npos);
  const auto ok = cli({"check-identity", "--system", "damped_oscillator", "-T", "20", "-o",
                       dir.string()});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("identity holds"), std::string::npos);
}

TEST(Cli, Ensemble) {
  const auto dir = scratch("ensemble");
  const auto r = cli({"ensemble", "--system", "brownian_oscillator", "--n-traj", "6", "-T", "2",
                      "--dt", "0.01", "--seed", "4", "-o", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto kv = read_report(dir / "ensemble_report.txt");
  EXPECT_EQ(contactdyn::lookup(kv, "n_traj"), "6");
  EXPECT_EQ(contactdyn::lookup(kv, "seed"), "4");
  EXPECT_NE(r.out.find("noise virial"), std::string::npos);
}

TEST(Cli, Gradcheck) {
  const auto r = cli({"gradcheck", "--system", "parachute", "--points", "2"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("all partials pass"), std::string::npos);
  EXPECT_EQ(cli({"gradcheck"}).code, 0);
  EXPECT_EQ(cli({"gradcheck", "--system", "nothing"}).code, 2);
  EXPECT_EQ(cli({"gradcheck", "-p", "m=2"}).code, 2);
}
