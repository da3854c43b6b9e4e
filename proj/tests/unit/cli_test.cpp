// Runs the rotsol binary and checks exit codes and the files it writes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "rotsol/manifest.hpp"

namespace fs = std::filesystem;
using rotsol::json;

namespace {

// One directory per test: ctest runs the tests of this file as separate, concurrent processes.
fs::path kWork;

int run(const std::string& args)
{
    const std::string cmd = std::string(ROTSOL_CLI_PATH) + " " + args + " > " + (kWork / "stdout.txt").string()
                            + " 2> " + (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    return rotsol::read_file(p.string());
}

/// Writes a gallery manifest with a shortened run, optionally edited.
fs::path manifest(const std::string& id, const std::string& name, const auto& edit)
{
    const fs::path file = kWork / (name + ".json");
    if (run("make-manifest --gallery " + id + " --out-dir " + (kWork / name).string() + " --file " + file.string())
        != 0)
        return {};
    json j = json::parse(slurp(file));
    j.erase("content_hash");
    j["integrator"]["s_max"] = 60.0;
    edit(j);
    std::ofstream(file) << j.dump(2);
    return file;
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        kWork = fs::temp_directory_path() / (std::string("rotsol_cli_test_") + info->name());
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
    void TearDown() override { fs::remove_all(kWork); }
};

} // namespace

TEST_F(Cli, HelpAndUsage)
{
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("no-such-command"), 1);
    EXPECT_EQ(run("integrate"), 1);
    EXPECT_EQ(run("integrate " + (kWork / "missing.json").string()), 1);
}

TEST_F(Cli, IntegrateWritesRunDirectory)
{
    const fs::path m = manifest("torus-1b", "integ", [](json&) {});
    ASSERT_FALSE(m.empty());
    EXPECT_EQ(run("integrate " + m.string()), 0);
    for (const char* f : {"trajectory.csv", "report.txt", "curve.obj", "manifest_echo.json"})
        EXPECT_TRUE(fs::exists(kWork / "integ" / f)) << f;
    EXPECT_EQ(run("verify --run-dir " + (kWork / "integ").string()), 0);
}

TEST_F(Cli, InvalidInputExitsOne)
{
    const fs::path m = manifest("torus-1a", "bad", [](json& j) { j["integrator"]["s_max"] = 0.0; });
    EXPECT_EQ(run("integrate " + m.string()), 1);
    EXPECT_NE(slurp(kWork / "stderr.txt").find("integrator.s_max"), std::string::npos);
    const fs::path t = manifest("torus-1a", "tampered", [](json& j) { j["content_hash"] = "00"; });
    EXPECT_EQ(run("integrate " + t.string()), 1);
}

TEST_F(Cli, NumericalFailureExitsTwo)
{
    const fs::path m = manifest("torus-2b", "underflow", [](json& j) {
        j["integrator"]["abs_tol"] = 1e-18;
        j["integrator"]["rel_tol"] = 1e-18;
        j["integrator"]["min_step"] = 0.05;
    });
    EXPECT_EQ(run("integrate " + m.string()), 2);
}

TEST_F(Cli, VerifyPassesAndDetectsCorruption)
{
    const fs::path m = manifest("torus-3a", "ver", [](json&) {});
    EXPECT_EQ(run("verify " + m.string()), 0);
    EXPECT_NE(slurp(kWork / "stdout.txt").find("PASS unit_speed"), std::string::npos);
    ASSERT_EQ(run("integrate " + m.string()), 0);
    std::ofstream(kWork / "ver" / "report.txt", std::ios::app) << "edited\n";
    EXPECT_EQ(run("verify --run-dir " + (kWork / "ver").string()), 3);
}

TEST_F(Cli, GalleryTorus)
{
    const fs::path out = kWork / "gallery";
    EXPECT_EQ(run("gallery --surface torus --jobs 4 --out " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / "summary.csv"));
    for (const char* id : {"torus-1a", "torus-2b", "torus-4b"})
        EXPECT_TRUE(fs::exists(out / id / "trajectory.csv")) << id;
}

TEST_F(Cli, ProbeReportsNoConstantCurvature)
{
    EXPECT_EQ(run("probe --a 0.5 --n-u 4 --n-dir 4"), 0);
    EXPECT_NE(slurp(kWork / "stdout.txt").find("no constant non-zero curvature"), std::string::npos);
    EXPECT_EQ(run("probe --a 0"), 1);
}
