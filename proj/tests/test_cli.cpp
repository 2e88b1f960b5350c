#include "cli.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using thermoporo::cli::run;

namespace {

struct Captured {
    int code = 0;
    std::string out;
    std::string err;
};

Captured invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("thermoporo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    fs::path dir;
};

}  // namespace

TEST_F(CliTest, HelpAndUsageErrors) {
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"verify", "bogus"}).code, 2);
    EXPECT_EQ(invoke({"geom", "generate", "--preset", "laminate", "--fraction", "1.5", "--out",
                      (dir / "g.txt").string()})
                  .code,
              2);
}

TEST_F(CliTest, GenerateAndValidate) {
    const auto path = (dir / "cube.txt").string();
    const auto gen = invoke({"geom", "generate", "--preset", "cube", "--dim", "3", "--n", "8", "--out", path});
    ASSERT_EQ(gen.code, 0) << gen.err;
    EXPECT_NE(gen.out.find("porosity = 0.875"), std::string::npos);
    const auto val = invoke({"geom", "validate", path});
    EXPECT_EQ(val.code, 0);
    EXPECT_NE(val.out.find("dim = 3"), std::string::npos);

    write("bad.txt", "2 2 2\n1 0 1 9\n");
    const auto bad = invoke({"geom", "validate", (dir / "bad.txt").string()});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("byte offset"), std::string::npos);
}

TEST_F(CliTest, UpscaleThenMacro) {
    write("up.cfg", "geometry.preset = cube\ngeometry.dim = 2\ngeometry.n = 8\ngeometry.fraction = 0.5\n"
                    "tau0 = 0\nkappa0s = 2\n");
    const auto up = invoke({"upscale", "--config", (dir / "up.cfg").string(), "--out", (dir / "up").string()});
    ASSERT_EQ(up.code, 0) << up.err;
    EXPECT_NE(up.out.find("regime = SteadyDarcy"), std::string::npos);
    ASSERT_TRUE(fs::exists(dir / "up" / "medium.txt"));

    write("macro.cfg", "medium = up/medium.txt\ndomain.N = 8\ndt = 0.01\nT = 0.05\noutput_every = 2\n"
                       "boundary.preset = ramp\nboundary.amplitude = 1\nboundary.ramp_time = 0.02\n");
    const auto mac = invoke({"macro", "--config", (dir / "macro.cfg").string(), "--out", (dir / "run").string()});
    ASSERT_EQ(mac.code, 0) << mac.err;
    for (const char* f : {"snapshot_000000.vtk", "snapshot_000002.vtk", "snapshot_000004.vtk", "snapshot_000005.vtk"})
        EXPECT_TRUE(fs::exists(dir / "run" / f)) << f;
    const std::string csv = slurp(dir / "run" / "diagnostics.csv");
    EXPECT_EQ(csv.rfind("step,t,picard_iterations,mass_residual", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST_F(CliTest, ConfigErrorsAreUsageErrors) {
    write("typo.cfg", "geometry.preset = cube\ngeometry.dim = 2\ngeometry.n = 8\ngeometry.fraction = 0.5\nkapa0s = 2\n");
    EXPECT_EQ(invoke({"upscale", "--config", (dir / "typo.cfg").string(), "--out", (dir / "o").string()}).code, 2);
    EXPECT_EQ(invoke({"upscale", "--config", (dir / "missing.cfg").string(), "--out", (dir / "o").string()}).code, 2);
}

TEST_F(CliTest, TwoScaleTable) {
    const auto r = invoke({"two-scale", "--preset", "trig-product", "--eps", "0.5,0.25", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("trig-product"), std::string::npos);
    EXPECT_EQ(invoke({"two-scale", "--eps", "0.25,0.5"}).code, 2);
}

TEST_F(CliTest, VerifySuiteWritesReport) {
    const auto r = invoke({"verify", "two-scale", "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "verify_two-scale.txt"));
    EXPECT_NE(r.out.find("result PASS"), std::string::npos);
}
