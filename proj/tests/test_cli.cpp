#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssqp/cli.hpp"

namespace ssqp {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ssqp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

ConfigError config_error(std::string_view text, const std::vector<std::string>& ov = {}) {
  try {
    parse_config_text(text, ov);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for " << text;
  return ConfigError(ConfigError::Kind::ParseError, "", "");
}

TEST(ParseConfig, EmptyObjectGivesDefaults) {
  const ParsedConfig c = parse_config_text("{}");
  EXPECT_EQ(c.solver.tau_init, 0.1);
  EXPECT_EQ(c.solver.sigma, 0.1);
  EXPECT_EQ(c.solver.gamma, 0.5);
  EXPECT_EQ(c.solver.theta, 1e-4);
  EXPECT_EQ(c.solver.eps_tau, 1e-2);
  EXPECT_EQ(c.solver.alpha0, 1.0);
  EXPECT_EQ(c.solver.alpha_max, 1.0);
  EXPECT_EQ(c.solver.max_iters, 1000u);
  EXPECT_EQ(c.solver.tol_infeas, 1e-6);
  EXPECT_EQ(c.solver.tol_kkt, 1e-4);
  EXPECT_FALSE(c.solver.eps_f_accept);
  EXPECT_EQ(c.oracle.eps_f_noise, 0.0);
  EXPECT_EQ(c.grid.replicates, 5u);
  EXPECT_EQ(c.grid.noise_pairs, default_noise_pairs());
  EXPECT_EQ(c.grid.eps_pp, 1e-3);
}

TEST(ParseConfig, RangeViolationNamesKey) {
  const ConfigError e = config_error(R"({"solver": {"theta": 2.0}})");
  EXPECT_EQ(e.kind(), ConfigError::Kind::ValidationError);
  EXPECT_EQ(e.key(), "solver.theta");
  EXPECT_NE(std::string(e.what()).find("theta"), std::string::npos);
}

TEST(ParseConfig, UnknownKeysAreErrors) {
  EXPECT_EQ(config_error(R"({"theta": 2.0})").key(), "theta");
  EXPECT_EQ(config_error(R"({"solver": {"thta": 0.5}})").key(), "solver.thta");
  EXPECT_EQ(config_error(R"({"oracle": {"noise": 0.5}})").key(), "oracle.noise");
  EXPECT_EQ(config_error(R"({"grid": {"reps": 2}})").key(), "grid.reps");
  EXPECT_EQ(config_error("{}", {"solver.nope=1"}).key(), "solver.nope");
}

TEST(ParseConfig, TypeErrors) {
  EXPECT_EQ(config_error(R"({"solver": {"gamma": "half"}})").key(), "solver.gamma");
  EXPECT_EQ(config_error(R"({"solver": {"max_iters": -3}})").key(), "solver.max_iters");
  EXPECT_EQ(config_error(R"({"grid": {"noise_pairs": [[0.1]]}})").key(), "grid.noise_pairs");
  EXPECT_EQ(config_error(R"({"solver": 3})").key(), "solver");
}

TEST(ParseConfig, ParseErrors) {
  EXPECT_EQ(config_error("{").kind(), ConfigError::Kind::ParseError);
  EXPECT_EQ(config_error("[1, 2]").kind(), ConfigError::Kind::ParseError);
  EXPECT_THROW(parse_config(fs::path("/nonexistent/config.json")), ConfigError);
}

TEST(ParseConfig, OverridesApplyLast) {
  const ParsedConfig c =
      parse_config_text(R"({"solver": {"gamma": 0.5}})", {"solver.gamma=0.25"});
  EXPECT_EQ(c.solver.gamma, 0.25);
  EXPECT_EQ(c.grid.params.gamma, 0.25);

  const ParsedConfig d = parse_config_text(
      "{}", {"grid.problems=[\"P1\",\"HS6\"]", "oracle.eps_g=1e-2", "oracle.seed=9",
             "solver.eps_f_accept=0", "grid.noise_pairs=[[0,0.1]]"});
  EXPECT_EQ(d.grid.problems, (std::vector<std::string>{"P1", "HS6"}));
  EXPECT_EQ(d.oracle.eps_g_noise, 1e-2);
  EXPECT_EQ(d.grid.seed, 9u);
  EXPECT_EQ(d.solver.eps_f_accept, 0.0);
  EXPECT_EQ(d.grid.noise_pairs, (std::vector<NoisePair>{{0.0, 0.1}}));

  EXPECT_EQ(config_error("{}", {"gamma=0.25"}).key(), "gamma");
  EXPECT_EQ(config_error("{}", {"solver.gamma"}).kind(), ConfigError::Kind::ValidationError);
}

TEST(Dispatch, ListProblems) {
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.subcommand = Subcommand::ListProblems;
  EXPECT_EQ(dispatch(cfg, out, err), 0);
  EXPECT_NE(out.str().find("P2\t2\t1\n"), std::string::npos);
  EXPECT_TRUE(err.str().empty());
}

TEST(Dispatch, CheckGradPassesOnSuite) {
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.subcommand = Subcommand::CheckGrad;
  EXPECT_EQ(dispatch(cfg, out, err), 0) << err.str();
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
}

TEST(Dispatch, RunP2) {
  const fs::path dir = fresh_dir("run");
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.subcommand = Subcommand::Run;
  cfg.problem = "P2";
  cfg.output_dir = dir;
  EXPECT_EQ(dispatch(cfg, out, err), 0) << err.str();
  const fs::path csv = dir / "P2__f0__g0__r0.csv";
  ASSERT_TRUE(fs::exists(csv));
  EXPECT_LE(count_lines(csv) - 1, 5u);
  EXPECT_TRUE(fs::exists(dir / "P2__f0__g0__r0.json"));
  EXPECT_NE(out.str().find("\"status\":\"Converged\""), std::string::npos);
  fs::remove_all(dir);
}

TEST(Dispatch, RunExitCodes) {
  const fs::path dir = fresh_dir("codes");
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.subcommand = Subcommand::Run;
  cfg.problem = "HS6";
  cfg.output_dir = dir;
  cfg.overrides = {"solver.max_iters=0"};
  EXPECT_EQ(dispatch(cfg, out, err), 2);

  cfg.overrides = {"solver.theta=2"};
  std::ostringstream err2;
  EXPECT_EQ(dispatch(cfg, out, err2), 1);
  EXPECT_NE(err2.str().find("theta"), std::string::npos);

  cfg.overrides = {};
  cfg.problem = "nonexistent";
  EXPECT_EQ(dispatch(cfg, out, err), 1);

  cfg.problem.reset();
  EXPECT_EQ(dispatch(cfg, out, err), 1);

  cfg.problem = "P2";
  cfg.config_path = dir / "missing.json";
  EXPECT_EQ(dispatch(cfg, out, err), 1);
  fs::remove_all(dir);
}

TEST(Dispatch, RunFailureStatusMapsToThree) {
  EXPECT_EQ(exit_code_for(RunStatus::Converged), 0);
  EXPECT_EQ(exit_code_for(RunStatus::BudgetExhausted), 2);
  EXPECT_EQ(exit_code_for(RunStatus::LinearAlgebraFailure), 3);
  EXPECT_EQ(exit_code_for(RunStatus::InvariantViolation), 3);
}

TEST(Dispatch, BenchThenProfile) {
  const fs::path dir = fresh_dir("bench");
  std::ostringstream out, err;
  CliConfig cfg;
  cfg.subcommand = Subcommand::Bench;
  cfg.output_dir = dir;
  cfg.seed = 4;
  cfg.overrides = {"grid.problems=[\"P1\",\"HS48\"]", "grid.replicates=2",
                   "grid.noise_pairs=[[0,0],[0,0.01],[0.01,0.01]]"};
  EXPECT_EQ(dispatch(cfg, out, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "timings.json"));
  EXPECT_TRUE(fs::exists(dir / "P1__f0__g0__r0.csv"));
  EXPECT_FALSE(fs::exists(dir / "P1__f0__g0__r1.csv"));
  EXPECT_TRUE(fs::exists(dir / "HS48__f0.01__g0.01__r1.csv"));

  std::ostringstream pout;
  cfg.subcommand = Subcommand::Profile;
  EXPECT_EQ(dispatch(cfg, pout, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(dir / "profiles" / "g0.01__kkt__work.csv"));
  EXPECT_TRUE(fs::exists(dir / "profiles" / "g0__infeas__iterations.csv"));
  EXPECT_NE(pout.str().find("profiles/g0.01__kkt__iterations.csv"), std::string::npos);

  cfg.output_dir = dir / "empty";
  EXPECT_EQ(dispatch(cfg, pout, err), 1);
  fs::remove_all(dir);
}

TEST(Subcommands, Parse) {
  EXPECT_EQ(parse_subcommand("check-grad"), Subcommand::CheckGrad);
  EXPECT_EQ(parse_subcommand("list-problems"), Subcommand::ListProblems);
  EXPECT_FALSE(parse_subcommand("nope"));
}

}  // namespace
}  // namespace ssqp
