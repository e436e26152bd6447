#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gmhd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Result run(const std::string& args) {
        const std::string cmd = "GMHD_OUT='" + dir_.string() + "' '" GMHD_CLI_PATH "' " + args + " 2>&1";
        Result r{0, {}};
        FILE* p = popen(cmd.c_str(), "r");
        char buf[512];
        while (fgets(buf, sizeof buf, p)) r.out += buf;
        const int status = pclose(p);
        r.code = WEXITSTATUS(status);
        return r;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, TstarPrintsEulerTime) {
    auto r = run("tstar --lambda 1 --u0 quadratic");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1.644934\n");
}

TEST_F(Cli, TstarInfinite) {
    auto r = run("tstar --lambda 0.4 --u0 quadratic");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "infinite\n");
}

TEST_F(Cli, TstarRecordsKappaMinusLambda) {
    auto r = run("tstar --lambda 0.4");
    EXPECT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(slurp(dir_ / "tstar" / "manifest.json"));
    EXPECT_EQ(j["kappa"].get<double>(), -0.4);
}

TEST_F(Cli, VerifyZeroParamsWritesPassingReport) {
    auto r = run("verify --scenario thm8.1");
    EXPECT_EQ(r.code, 0) << r.out;
    const auto report = nlohmann::json::parse(slurp(dir_ / "verify-thm8.1" / "report.json"));
    EXPECT_EQ(report["status"], "pass");
    for (const auto& a : report["assertions"]) EXPECT_TRUE(a["pass"].get<bool>()) << a.dump();
    EXPECT_TRUE(fs::exists(dir_ / "verify-thm8.1" / "series.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "verify-thm8.1" / "trajectories.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "verify-thm8.1" / "manifest.json"));
}

TEST_F(Cli, VerifyUnmetHypothesesExitsOne) {
    auto r = run("verify --scenario thm8.1 --lambda 1");
    EXPECT_EQ(r.code, 1) << r.out;
    const auto report = nlohmann::json::parse(slurp(dir_ / "verify-thm8.1" / "report.json"));
    EXPECT_EQ(report["status"], "hypotheses_unmet");
}

TEST_F(Cli, SimulateZeroDataGivesZeroSeries) {
    auto r = run("simulate --u0 zero --b0 zero --horizon 0.05 --n 64");
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream in(dir_ / "simulate" / "series.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line[0], '#');
    std::getline(in, line);
    EXPECT_EQ(line.rfind("t,energy,I", 0), 0u);
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // t
        while (std::getline(ss, cell, ',')) EXPECT_EQ(std::stod(cell), 0.0) << line;
        ++rows;
    }
    EXPECT_GT(rows, 1);
}

TEST_F(Cli, ManifestRoundTripReproducesSeries) {
    ASSERT_EQ(run("simulate --lambda -0.5 --kappa 0.25 --b0 bump2:0.5 --horizon 0.2 --n 128").code, 0);
    const fs::path first = dir_ / "simulate";
    const fs::path again = dir_ / "again";
    auto r = run("simulate --config '" + (first / "manifest.json").string() + "' --out '" + again.string() + "'");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(slurp(first / "series.csv"), slurp(again / "series.csv"));
    EXPECT_EQ(slurp(first / "trajectories.csv"), slurp(again / "trajectories.csv"));
    const auto m = nlohmann::json::parse(slurp(first / "manifest.json"));
    EXPECT_EQ(m["config_version"], 1);
    EXPECT_TRUE(m.contains("versions"));
    EXPECT_TRUE(m.contains("verdicts"));
}

TEST_F(Cli, CsvUsesSeventeenDigitScientific) {
    ASSERT_EQ(run("simulate --horizon 0.02 --n 64").code, 0);
    std::ifstream in(dir_ / "simulate" / "series.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    const std::string first = line.substr(0, line.find(','));
    EXPECT_EQ(first, "0.0000000000000000e+00");
}

TEST_F(Cli, ConfigErrorsExitTwo) {
    EXPECT_EQ(run("simulate --u0 bogus").code, 2);
    EXPECT_EQ(run("simulate --u0 cos:1").code, 2);
    EXPECT_EQ(run("simulate --bc periodic --u0 quadratic").code, 2);
    EXPECT_EQ(run("verify --scenario nope").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("simulate --n 4").code, 2);
}

TEST_F(Cli, BadConfigFilesExitTwo) {
    std::ofstream(dir_ / "v2.json") << R"({"config_version": 2, "mode": "simulate"})";
    std::ofstream(dir_ / "junk.json") << "{not json";
    std::ofstream(dir_ / "key.json") << R"({"config_version": 1, "mode": "simulate", "lamda": 1})";
    EXPECT_EQ(run("simulate --config '" + (dir_ / "v2.json").string() + "'").code, 2);
    EXPECT_EQ(run("simulate --config '" + (dir_ / "junk.json").string() + "'").code, 2);
    EXPECT_EQ(run("simulate --config '" + (dir_ / "key.json").string() + "'").code, 2);
}

TEST_F(Cli, UnwritableOutputExitsTwo) {
    std::ofstream(dir_ / "file") << "x";
    EXPECT_EQ(run("tstar --lambda 1 --out '" + (dir_ / "file" / "sub").string() + "'").code, 2);
}

TEST_F(Cli, SweepWritesRowsInGridOrder) {
    auto r = run("sweep --scenario thm8.1 --lambdas 0 --kappas 0,1 --threads 2");
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream in(dir_ / "sweep-thm8.1" / "sweep.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    EXPECT_NE(line.find(",pass,"), std::string::npos) << line;
    std::getline(in, line);
    EXPECT_NE(line.find("1.0000000000000000e+00,hypotheses_unmet"), std::string::npos) << line;
}

TEST_F(Cli, ClosedFormAndCompare) {
    EXPECT_EQ(run("closed-form --lambda 1 --points 4").code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "closed-form" / "closed_form.csv"));
    EXPECT_EQ(run("compare-euler --n 128 --horizon 0.3").code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "compare-euler" / "comparison.csv"));
    EXPECT_EQ(run("compare-euler --n 128 --horizon 1").code, 1);
}
