#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "sgfopt/config.hpp"
#include "sgfopt/field_io.hpp"
#include "sgfopt/run.hpp"

namespace sgfopt {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class RunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sgfopt_run_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(const std::string& text, const std::string& out = "out") {
    RunConfig cfg = parse_config_text(text, dir_);
    cfg.out = dir_ / out;
    return cfg;
  }
  int run_quiet(const RunConfig& cfg) {
    std::ostringstream o, e;
    const int code = run(cfg, o, e);
    err_ = e.str();
    return code;
  }

  fs::path dir_;
  std::string err_;
};

const char* kSmall = R"(subcommand = simulate
snapshot_every = 5
[problem]
grid = 12
steps = 10
y0 = (1,1,0.05) (2,1,-0.02)
)";

TEST(Config, MinimalFileGetsDefaults) {
  const RunConfig cfg = parse_config_text("subcommand = simulate\n");
  ASSERT_TRUE(cfg.subcommand);
  EXPECT_EQ(*cfg.subcommand, Subcommand::simulate);
  EXPECT_EQ(cfg.params.alpha, 0.1);
  EXPECT_EQ(cfg.params.grid_n, 32);
  EXPECT_EQ(cfg.params.m_steps, 50);
  EXPECT_EQ(cfg.out, fs::path("sgfopt-out"));
  EXPECT_TRUE(cfg.y0_modes.empty());
}

TEST(Config, ParsesModesAndRunKeys) {
  const RunConfig cfg = parse_config_text(
      "subcommand = estimate-constants\nseed = 42\nsamples = 7\nlambda3_reading = from_proof\n"
      "[problem]\nalpha = 0.25\nu = (1,2,0.5) (3, 1, -1e-2)\n");
  EXPECT_EQ(*cfg.subcommand, Subcommand::estimate_constants);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.samples, 7);
  EXPECT_EQ(cfg.lambda3_reading, Lambda3Reading::from_proof);
  EXPECT_EQ(cfg.params.alpha, 0.25);
  ASSERT_EQ(cfg.u_modes.size(), 2u);
  EXPECT_EQ(cfg.u_modes[1], (ModeTerm{3, 1, -1e-2}));
}

TEST(Config, TypoGetsASuggestionAndLine) {
  try {
    parse_config_text("subcommand = simulate\n[problem]\nalpah = 0.2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("alpha"), std::string::npos) << e.what();
  }
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config_text("subcommand = fly\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[problem]\ngrid = 3.5\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[problem]\nalpha = 1\nalpha = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[problem]\ny0 = (1,1)\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[solver]\ntol = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[problem]\nyd = (1,1,1)\nyd_reference = ref\n"), ConfigError);
}

TEST(Config, InvalidProblemNamesFieldAndLine) {
  const RunConfig cfg = parse_config_text("subcommand = simulate\n[problem]\ngrid = 8\nalpha = -0.1\n");
  try {
    build_problem(cfg);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "alpha");
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Config, EveryKnownKeyIsSectioned) {
  for (const auto& k : known_config_keys())
    EXPECT_TRUE(k.rfind("run.", 0) == 0 || k.rfind("problem.", 0) == 0) << k;
}

TEST_F(RunTest, SimulateWritesSnapshotsAndLog) {
  ASSERT_EQ(run_quiet(config(kSmall)), kExitOk) << err_;
  for (int n : {0, 5, 10}) {
    char name[32];
    std::snprintf(name, sizeof name, "y_%05d.bin", n);
    EXPECT_TRUE(fs::exists(dir_ / "out" / "fields" / name)) << name;
  }
  EXPECT_FALSE(fs::exists(dir_ / "out" / "fields" / "y_00003.bin"));
  const std::string log = slurp(dir_ / "out" / "log.csv");
  EXPECT_EQ(log.rfind("step,t,norm_H1,norm_H3,norm_V,energy\n", 0), 0u);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 12);
}

TEST_F(RunTest, ZeroDataGivesZeroFields) {
  ASSERT_EQ(run_quiet(config("subcommand = simulate\n[problem]\ngrid = 8\nsteps = 4\n")), kExitOk) << err_;
  const VectorField2D y = read_vector_field(dir_ / "out" / "fields" / "y_00004.bin");
  EXPECT_EQ(y.u1().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(y.u2().cwiseAbs().maxCoeff(), 0.0);
}

TEST_F(RunTest, ConfigErrorWritesNothing) {
  const RunConfig cfg = config("subcommand = simulate\n[problem]\ngrid = 8\nnu = 0\n");
  EXPECT_EQ(run_quiet(cfg), kExitConfigError);
  EXPECT_NE(err_.find("nu"), std::string::npos) << err_;
  EXPECT_FALSE(fs::exists(cfg.out));

  RunConfig missing = config("subcommand = certify\nconstants = nowhere.txt\n[problem]\ngrid = 8\n");
  EXPECT_EQ(run_quiet(missing), kExitConfigError);
  EXPECT_FALSE(fs::exists(missing.out));
}

TEST_F(RunTest, RunsAreBitwiseReproducible) {
  const std::string text = std::string(kSmall) + "u = (1,2,0.3)\n";
  ASSERT_EQ(run_quiet(config(text, "a")), kExitOk);
  ASSERT_EQ(run_quiet(config(text, "b")), kExitOk);
  for (const char* f : {"log.csv", "report.txt", "fields/y_00010.bin", "fields/y_00005.csv"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}

TEST_F(RunTest, GradcheckReportsThreeStepSizes) {
  const RunConfig cfg = config(
      "subcommand = gradcheck\nseed = 3\n[problem]\ngrid = 12\nsteps = 10\nlambda = 0.01\n"
      "y0 = (1,1,0.05)\nyd = (1,2,0.1)\nu = (2,1,0.2)\n");
  ASSERT_EQ(run_quiet(cfg), kExitOk) << err_;
  std::istringstream log(slurp(cfg.out / "log.csv"));
  std::string line;
  std::getline(log, line);
  EXPECT_EQ(line, "epsilon,fd,adjoint,rel_error");
  int rows = 0;
  double last_err = 1.0;
  while (std::getline(log, line)) {
    ++rows;
    last_err = std::stod(line.substr(line.rfind(',') + 1));
  }
  EXPECT_EQ(rows, 3);
  EXPECT_LT(last_err, 1e-6);
}

TEST_F(RunTest, CertifyMarksDefaultConstantsAsIllustrative) {
  const RunConfig cfg = config("subcommand = certify\n[problem]\ngrid = 8\nsteps = 4\nalpha = 1\nnu = 1\nL = 0.1\n");
  ASSERT_EQ(run_quiet(cfg), kExitOk) << err_;
  EXPECT_TRUE(read_certificate(cfg.out / "certificate.txt").illustrative);
  EXPECT_NE(slurp(cfg.out / "report.txt").find("advisory"), std::string::npos);

  std::ofstream(dir_ / "consts.txt") << "K = 1\nK_tilde = 1\nK_hat = 1\nC1 = 1\nC2 = 1\nC3 = 1\nC4 = 1\n";
  const RunConfig supplied = config(
      "subcommand = certify\nconstants = consts.txt\n[problem]\ngrid = 8\nsteps = 4\nalpha = 1\nnu = 1\nL = 0.1\n",
      "supplied");
  ASSERT_EQ(run_quiet(supplied), kExitOk) << err_;
  EXPECT_FALSE(read_certificate(supplied.out / "certificate.txt").illustrative);
}

TEST_F(RunTest, EstimateConstantsWritesAReadableConstantsFile) {
  const RunConfig cfg = config("subcommand = estimate-constants\nsamples = 2\n[problem]\ngrid = 10\n");
  ASSERT_EQ(run_quiet(cfg), kExitOk) << err_;
  const DomainConstants c = read_constants(cfg.out / "report.txt");
  EXPECT_EQ(c.K.source, ConstantSource::estimated);
  EXPECT_EQ(c.K_hat.source, ConstantSource::estimated);
  EXPECT_EQ(c.C1.source, ConstantSource::default_unit);
  EXPECT_GE(c.K.value, 1.0);
}

TEST_F(RunTest, ReferenceTargetIsTrackedExactly) {
  const std::string sim =
      "subcommand = simulate\nsnapshot_every = 1\n[problem]\ngrid = 10\nsteps = 6\ny0 = (1,1,0.05) (1,2,0.02)\n";
  ASSERT_EQ(run_quiet(config(sim, "ref")), kExitOk) << err_;
  const RunConfig opt = config(
      "subcommand = optimize\n[problem]\ngrid = 10\nsteps = 6\nlambda = 0.1\ny0 = (1,1,0.05) (1,2,0.02)\n"
      "yd_reference = ref\n",
      "opt");
  ASSERT_EQ(run_quiet(opt), kExitOk) << err_;
  const std::string rep = slurp(opt.out / "report.txt");
  EXPECT_NE(rep.find("J_final = 0\n"), std::string::npos) << rep;
}

TEST_F(RunTest, MultistartWritesPerRunControls) {
  const RunConfig cfg = config(
      "subcommand = multistart\nstarts = 2\nmax_iter = 3\n[problem]\ngrid = 8\nsteps = 4\nlambda = 1\n"
      "yd = (1,1,0.1)\n");
  ASSERT_EQ(run_quiet(cfg), kExitOk) << err_;
  EXPECT_TRUE(fs::exists(cfg.out / "fields" / "u_run1_00004.bin"));
  EXPECT_TRUE(fs::exists(cfg.out / "certificate.txt"));
  EXPECT_NE(slurp(cfg.out / "report.txt").find("starts = 2"), std::string::npos);
}

}  // namespace
}  // namespace sgfopt
