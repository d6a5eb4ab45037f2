#include "runner.hpp"

#include "anosov/error.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace anosov::lab;
namespace fs = std::filesystem;

namespace {

const std::string kLinear = "[run]\nseed = 3\n[endomorphism]\nmatrix = 3 1; 1 1\n[cones]\ngrid = 32\n";
const std::string kShear = kLinear + "[shear]\naxis = 0\ndriver = 1\namplitude = 0.05\nfrequency = 1\nphase = 0\n";

class RunnerTest : public ::testing::Test {
  protected:
    fs::path dir(const std::string& name)
    {
        const fs::path p = fs::temp_directory_path() / ("anosov-runner-test-" + std::to_string(::getpid())) / name;
        fs::remove_all(p);
        return p;
    }
    void TearDown() override { fs::remove_all(fs::temp_directory_path() / ("anosov-runner-test-" + std::to_string(::getpid()))); }

    RunOutcome run_in(const std::string& sub, const std::string& text, const fs::path& out,
                      std::optional<int> threads = std::nullopt)
    {
        RunRequest req;
        req.subcommand = sub;
        req.out = out;
        req.threads = threads;
        std::ostringstream log;
        return run_text(req, text, log);
    }
    static std::string slurp(const fs::path& p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }
};

}  // namespace

TEST_F(RunnerTest, EightSubcommands)
{
    EXPECT_EQ(subcommands().size(), 8u);
    EXPECT_FALSE(tool_version().empty());
}

TEST_F(RunnerTest, VerifyAnosovOnTheLinearModel)
{
    const fs::path out = dir("verify");
    const RunOutcome o = run_in("verify-anosov", kLinear, out);
    EXPECT_EQ(o.verdict, Verdict::pass);
    EXPECT_EQ(exit_code(o), 0);
    const auto s = nlohmann::json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(s["tool"], "anosov-lab");
    EXPECT_EQ(s["subcommand"], "verify-anosov");
    EXPECT_EQ(s["seed"], 3);
    EXPECT_EQ(s["verdict"], "pass");
    EXPECT_EQ(s["config_hash"], "fnv1a64:" + [] {
        std::ostringstream h;
        h << std::hex;
        h.width(16);
        h.fill('0');
        h << fnv1a64(kLinear);
        return h.str();
    }());
    EXPECT_TRUE(s["parameters"].contains("cones.grid"));
    EXPECT_TRUE(s["parameters"].contains("cones.angular_samples"));
    EXPECT_EQ(slurp(out / "config.txt"), kLinear);
}

TEST_F(RunnerTest, DispersionOfTheLinearModelIsSpecial)
{
    const fs::path out = dir("dispersion");
    const RunOutcome o = run_in("dispersion", kLinear + "[dispersion]\npoints = 5\nsamples = 20\nexpect = special\n", out);
    EXPECT_EQ(o.verdict, Verdict::pass);
    const auto s = nlohmann::json::parse(slurp(out / "summary.json"));
    EXPECT_LT(s["results"]["dispersion"]["max"].get<double>(), 1e-9);
    const std::string csv = slurp(out / "points.csv");
    EXPECT_NE(csv.find("# config_hash fnv1a64:"), std::string::npos);
    EXPECT_NE(csv.find("# param dispersion.samples = 20"), std::string::npos);
}

TEST_F(RunnerTest, DichotomyScanLinearFractionIsZero)
{
    const fs::path out = dir("scan");
    const RunOutcome o =
        run_in("dichotomy-scan", kLinear + "[dichotomy-scan]\npoints = 10\nsamples = 20\nmax_nonspecial_fraction = 0\n", out);
    EXPECT_EQ(o.verdict, Verdict::pass);
    const auto s = nlohmann::json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(s["results"]["nonspecial_fraction"].get<double>(), 0.0);
}

TEST_F(RunnerTest, QuasiIsoLinearIsExact)
{
    const fs::path out = dir("qi");
    const RunOutcome o = run_in("quasi-iso", kLinear + "[quasi-iso]\narclength = 50\npairs = 50\n", out);
    EXPECT_EQ(o.verdict, Verdict::pass);
    const auto s = nlohmann::json::parse(slurp(out / "summary.json"));
    EXPECT_NEAR(s["results"]["quasi_isometry"]["q_fit"].get<double>(), 1.0, 1e-10);
    EXPECT_NEAR(s["results"]["growth_ratio"]["max_deviation"].get<double>(), 0.0, 1e-10);
}

TEST_F(RunnerTest, OutputsAreBitIdenticalAcrossRunsAndThreadCounts)
{
    const std::string text = kShear + "[lyapunov-census]\npoints = 12\nsteps = 300\n";
    const fs::path a = dir("a"), b = dir("b");
    run_in("lyapunov-census", text, a, 1);
    run_in("lyapunov-census", text, b, 4);
    for (const char* name : {"summary.json", "exponents.csv", "config.txt"}) {
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
    const std::string angle = kShear + "[angle-decay]\npoints = 3\nsamples = 6\n";
    run_in("angle-decay", angle, a, 1);
    run_in("angle-decay", angle, b, 3);
    EXPECT_EQ(slurp(a / "decay.csv"), slurp(b / "decay.csv"));
}

TEST_F(RunnerTest, SeedOverrideChangesResults)
{
    const std::string text = kShear + "[lyapunov-census]\npoints = 4\nsteps = 300\n";
    const fs::path a = dir("s1"), b = dir("s2");
    run_in("lyapunov-census", text, a);
    RunRequest req;
    req.subcommand = "lyapunov-census";
    req.out = b;
    req.seed = 99;
    std::ostringstream log;
    run_text(req, text, log);
    const auto sb = nlohmann::json::parse(slurp(b / "summary.json"));
    EXPECT_EQ(sb["seed"], 99);
    EXPECT_NE(slurp(a / "exponents.csv"), slurp(b / "exponents.csv"));
}

TEST_F(RunnerTest, UnknownKeysAndSectionsAreRejected)
{
    EXPECT_THROW(run_in("verify-anosov", kLinear + "[cones]\ngird = 3\n", dir("x")), ConfigError);
    try {
        run_in("verify-anosov", "[run]\nsed = 1\n[endomorphism]\nmatrix = 3 1; 1 1\n", dir("x"));
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 2);
    }
    EXPECT_THROW(run_in("verify-anosov", kLinear + "[plot]\n", dir("x")), ConfigError);
    EXPECT_THROW(run_in("no-such-thing", kLinear, dir("x")), ConfigError);
    EXPECT_THROW(run_in("verify-anosov", "[run]\nseed = 1\n", dir("x")), ConfigError);
}

TEST_F(RunnerTest, BadMatricesAndShearsAreConfigErrors)
{
    EXPECT_THROW(run_in("verify-anosov", "[endomorphism]\nmatrix = 2 0; 0 2\n", dir("x")), ConfigError);
    EXPECT_THROW(run_in("verify-anosov", "[endomorphism]\nmatrix = 3 1; 1\n", dir("x")), ConfigError);
    EXPECT_THROW(run_in("verify-anosov", kLinear + "[shear]\naxis = 0\ndriver = 0\namplitude = 0.1\n", dir("x")),
                 ConfigError);
    EXPECT_THROW(run_in("verify-anosov", kLinear + "[shear]\naxis = 0\ndriver = 1\namplitude = 0.1\nphase = 1.5\n",
                        dir("x")),
                 ConfigError);
}

TEST_F(RunnerTest, ConeFailureBlocksExperimentsButIsAVerdictForVerify)
{
    const std::string big = kLinear + "[shear]\naxis = 0\ndriver = 1\namplitude = 10\n";
    const RunOutcome o = run_in("verify-anosov", big, dir("v"));
    EXPECT_EQ(o.verdict, Verdict::fail);
    EXPECT_EQ(exit_code(o), 1);
    EXPECT_THROW(run_in("lyapunov-census", big, dir("l")), anosov::NotHyperbolic);
}
