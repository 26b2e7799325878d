#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bandit_lb/commands.hpp"

using namespace bandit_lb;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("bandit_lb_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Captured {
  std::ostringstream log, err;
  RunOptions opt() {
    RunOptions o;
    o.log = &log;
    o.err = &err;
    o.threads = 1;
    o.quick = true;
    return o;
  }
};

ExperimentConfig fig1_bounds(const fs::path& out) {
  ExperimentConfig c;
  c.command = Command::bounds;
  c.preset = "figure1";
  c.out = out.string();
  return c;
}
}  // namespace

TEST(Config, RoundTrip) {
  const char* text = R"(
# comment
[experiment]
command = simulate
horizon = 5000
runs = 20   ; inline comment
seed = 7
checkpoints = list:1,10,100,5000
out = results/x

[problem]
model = bounded_support
arm = finite 1 0:0.5 1:0.5
arm = finite 1 0:0.25 0.5:0.5 1:0.25

[strategy]
id = kl_ucb
upper = 1

[bounds]
ids = asymptotic, collective
c_psi = 16
omega = 0.1, 0.2
)";
  const auto c = parse_config(text);
  EXPECT_EQ(c.horizon, 5000u);
  EXPECT_EQ(c.runs, 20u);
  EXPECT_EQ(c.checkpoints.list, (std::vector<std::uint64_t>{1, 10, 100, 5000}));
  EXPECT_EQ(c.arms.size(), 2u);
  EXPECT_EQ(c.bound_ids, (std::vector<std::string>{"asymptotic", "collective"}));
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  EXPECT_NO_THROW(validate_config(c));
}

TEST(Config, RoundTripEveryArmFamily) {
  ExperimentConfig c;
  c.model = ModelTag::gaussian;
  c.arms = {Gaussian{0.1, 0.3}, Gaussian{-1.0 / 3.0, 0.3}};
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  for (const auto& arms : std::vector<std::vector<Distribution>>{
           {Bernoulli{0.1}, Bernoulli{0.7}}, {Poisson{2.5}, Poisson{1e-3}}, {Gamma{2.0, 1.5}, Gamma{2.0, 0.1}},
           {Binomial{7, 2.0}, Binomial{7, 3.5}}, {Dirac{0.0}, Dirac{1.0}}}) {
    ExperimentConfig d;
    d.arms = arms;
    EXPECT_EQ(parse_config(serialize_config(d)), d);
  }
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto message = [](const char* text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("[experiment]\nhorizon = -5\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("[nope]\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("[experiment]\ncolour = red\n").find("colour"), std::string::npos);
  EXPECT_NE(message("[problem]\narm = cauchy 0 1\n").find("cauchy"), std::string::npos);
  EXPECT_NE(message("horizon = 5\n").find("outside"), std::string::npos);
}

TEST(Config, ValidationFailures) {
  ExperimentConfig c;
  c.preset = "figure1";
  c.bound_ids = {"asymptotik"};
  EXPECT_THROW(validate_config(c), ConfigError);
  c.bound_ids.clear();
  c.runs = 0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c.runs = 1;
  c.omega = {1.0};
  EXPECT_THROW(validate_config(c), ConfigError);
  ExperimentConfig no_problem;
  EXPECT_THROW(validate_config(no_problem), ConfigError);
}

TEST(Grid, ShapesEndAtHorizon) {
  const auto g = make_grid({CheckpointSpec::Kind::log, 60, {}}, 10000);
  EXPECT_EQ(g.front(), 1u);
  EXPECT_EQ(g.back(), 10000u);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
  EXPECT_EQ(make_grid({CheckpointSpec::Kind::linear, 4, {}}, 10), (std::vector<std::uint64_t>{3, 5, 8, 10}));
  EXPECT_EQ(make_grid({CheckpointSpec::Kind::log, 60, {}}, 1), (std::vector<std::uint64_t>{1}));
  EXPECT_THROW(make_grid({CheckpointSpec::Kind::list, 0, {3, 2}}, 10), ConfigError);
}

TEST(Commands, BoundsWriteCurves) {
  const auto out = scratch("bounds");
  auto c = fig1_bounds(out);
  c.horizon = 1000000;
  c.checkpoints = {CheckpointSpec::Kind::list, 0, {1, 1000000}};
  c.bound_ids = {"asymptotic"};
  Captured cap;
  ASSERT_EQ(run_command(c, cap.opt()), exit_code::ok) << cap.err.str();
  const auto text = slurp(out / "bound_asymptotic.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), "bound_id,T,value,void,attained_by");
  EXPECT_NE(text.find("asymptotic,1,0,0,"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "bound_envelope.csv"));
  const auto row = text.substr(text.find("asymptotic,1000000,"));
  const double v = std::stod(row.substr(std::string("asymptotic,1000000,").size()));
  EXPECT_NEAR(v, asymptotic_curve(figure1_problem(), {1000000}).points[0].value, 1e-9 * v);
}

TEST(Commands, SingleCheckpointAtOneIsZero) {
  const auto out = scratch("t1");
  auto c = fig1_bounds(out);
  c.horizon = 1;
  c.bound_ids = {"asymptotic", "distribution_free"};
  Captured cap;
  ASSERT_EQ(run_command(c, cap.opt()), exit_code::ok) << cap.err.str();
  EXPECT_EQ(slurp(out / "bound_asymptotic.csv"), "bound_id,T,value,void,attained_by\nasymptotic,1,0,0,\n");
}

TEST(Commands, IncompatibleBoundLeavesNoOutput) {
  const auto out = scratch("incompatible");
  auto c = fig1_bounds(out);
  c.bound_ids = {"asymptotic", "bpr_known_gap"};
  Captured cap;
  EXPECT_EQ(run_command(c, cap.opt()), exit_code::incompatible);
  EXPECT_NE(cap.err.str().find("bpr_known_gap"), std::string::npos);
  EXPECT_FALSE(fs::exists(out / "bound_asymptotic.csv"));
}

TEST(Commands, ConfigErrorExitCode) {
  ExperimentConfig c;
  c.command = Command::bounds;
  Captured cap;
  EXPECT_EQ(run_command(c, cap.opt()), exit_code::config);
}

TEST(Commands, SimulateSingleRun) {
  const auto out = scratch("sim1");
  ExperimentConfig c;
  c.preset = "figure1";
  c.horizon = 10;
  c.runs = 1;
  c.checkpoints = {CheckpointSpec::Kind::linear, 10, {}};
  c.out = out.string();
  Captured cap;
  ASSERT_EQ(run_command(c, cap.opt()), exit_code::ok) << cap.err.str();
  std::istringstream in(slurp(out / "regret.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "T,mean_regret,stderr,runs");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",0,1"), std::string::npos) << line;
  }
  EXPECT_EQ(rows, 10);
  EXPECT_TRUE(fs::exists(out / "arm_counts.csv"));
  EXPECT_TRUE(fs::exists(out / "plot_regret.py"));
}

TEST(Commands, SimulationFailureExitCode) {
  const auto out = scratch("simfail");
  ExperimentConfig c;
  c.arms = {Gamma{1.0, 1.79e308}, Gamma{1.0, 1e308}};
  c.strategy = {"ucb", {}};
  c.horizon = 50;
  c.runs = 2;
  c.out = out.string();
  Captured cap;
  EXPECT_EQ(run_command(c, cap.opt()), exit_code::simulation);
  EXPECT_NE(cap.err.str().find("run 0"), std::string::npos);
}

TEST(Commands, RerunsAreByteIdentical) {
  ExperimentConfig c;
  c.preset = "figure1";
  c.horizon = 300;
  c.runs = 8;
  c.seed = 5;
  c.bound_ids = {"asymptotic", "collective"};
  std::string first;
  for (int i = 0; i < 2; ++i) {
    const auto out = scratch("rerun" + std::to_string(i));
    c.out = out.string();
    c.command = Command::simulate;
    Captured cap;
    ASSERT_EQ(run_command(c, cap.opt()), exit_code::ok);
    c.command = Command::bounds;
    ASSERT_EQ(run_command(c, cap.opt()), exit_code::ok);
    const auto all = slurp(out / "regret.csv") + slurp(out / "arm_counts.csv") + slurp(out / "bound_collective.csv") +
                     slurp(out / "bound_envelope.csv");
    if (i == 0) first = all;
    else EXPECT_EQ(all, first);
  }
}

TEST(Commands, VerifyQuickPassesAndFaultIsCaught) {
  const auto out = scratch("verify");
  ExperimentConfig c;
  c.command = Command::verify;
  c.out = out.string();
  {
    Captured cap;
    EXPECT_EQ(run_command(c, cap.opt()), exit_code::ok) << cap.err.str();
    EXPECT_EQ(slurp(out / "verify_report.csv").substr(0, 37), "instance_id,check,value,threshold,pas");
  }
  bandit_lb::testing::kl_sign_fault() = true;
  Captured cap;
  const int rc = run_command(c, cap.opt());
  bandit_lb::testing::kl_sign_fault() = false;
  EXPECT_EQ(rc, exit_code::verification);
  EXPECT_NE(cap.err.str().find("pinsker"), std::string::npos);
}

TEST(Csv, LocaleIndependentNumbers) {
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  // Uses a comma-decimal locale when one is installed; the default locale otherwise.
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1e-20), "1e-20");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(parse_config("[experiment]\nhorizon = 12\n[strategy]\nmu_star = 0.25\n").strategy.params.at("mu_star"), 0.25);
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(Commands, FigureOneConfigDefaults) {
  const auto c = figure1_config(ExperimentConfig{}, false);
  EXPECT_EQ(c.strategy.id, "thompson");
  EXPECT_EQ(c.horizon, 10000u);
  EXPECT_EQ(c.runs, 500u);
  EXPECT_EQ(figure1_config(ExperimentConfig{}, true).runs, 50u);
}
