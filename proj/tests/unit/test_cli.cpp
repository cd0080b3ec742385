#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "bomdiff/bomdiff.hpp"
#include "bomdiff_viewer_bundle.hpp"
#include "cli.hpp"
#include "generators.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = bomdiff::cli::run(args, out, err, bomdiff::kViewerBundle);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("bomdiff-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string out_path(const std::string& name) const { return (dir / name).string(); }

    std::vector<std::string> leftovers() const
    {
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(dir))
            names.push_back(entry.path().filename().string());
        return names;
    }

    fs::path dir;
};

std::string read(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_F(CliTest, SelfCompareExitsZero)
{
    const auto f = gen::fixture_path("saas_bom.cdx.json");
    const auto r = run({f, f, "--attr", "name", "--attr", "version", "--report", out_path("r.json")});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto report = json::parse(read(out_path("r.json")));
    EXPECT_EQ(report["counts"]["nodes"]["BOTH"], 7);
}

TEST_F(CliTest, VersionBumpsExitOne)
{
    const auto r = run({gen::fixture_path("proton-bridge-1.6.3.cdx.json"), gen::fixture_path("proton-bridge-1.8.0.cdx.json"),
                        "--attr", "hash:SHA-256", "--metric", "exact", "--report", out_path("r.json")});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_NE(r.out.find("only_a 12"), std::string::npos);
}

TEST_F(CliTest, WritesAllOutputs)
{
    const auto r = run({gen::fixture_path("pipeline_graph1.json"), gen::fixture_path("pipeline_graph2.json"), "--suggest",
                        "--collapse", "--gml", out_path("m.gml"), "--report", out_path("r.json"), "--html",
                        out_path("v.html")});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_EQ(read(out_path("m.gml")).rfind("graph [", 0), 0u);
    const auto report = json::parse(read(out_path("r.json")));
    EXPECT_EQ(report["counts"]["supernodes"], 1);
    EXPECT_EQ(report["counts"]["suggestions"], 1);
    EXPECT_NE(read(out_path("v.html")).find("\"initial_view\":\"collapsed\""), std::string::npos);
    EXPECT_EQ(leftovers().size(), 3u);
}

TEST_F(CliTest, WithoutSuggestFlagNoSuggestions)
{
    const auto r = run({gen::fixture_path("pipeline_graph1.json"), gen::fixture_path("pipeline_graph2.json"), "--report",
                        out_path("r.json")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(json::parse(read(out_path("r.json")))["counts"]["suggestions"], 0);
}

TEST_F(CliTest, MissingInputExitsTwo)
{
    const auto r = run({out_path("absent.json"), gen::fixture_path("saas_bom.cdx.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, BadSeedExitsTwoAndWritesNothing)
{
    const auto f = gen::fixture_path("pipeline_graph1.json");
    const auto r = run({f, f, "--seed", "nope=C", "--gml", out_path("m.gml"), "--report", out_path("r.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("nope"), std::string::npos);
    EXPECT_TRUE(leftovers().empty());
}

TEST_F(CliTest, MalformedSeedSyntax)
{
    const auto f = gen::fixture_path("pipeline_graph1.json");
    EXPECT_EQ(run({f, f, "--seed", "C"}).code, 2);
}

TEST_F(CliTest, UnwritableOutputLeavesNoPartialFiles)
{
    const auto f = gen::fixture_path("pipeline_graph1.json");
    const auto r = run({f, f, "--report", out_path("r.json"), "--gml", (dir / "missing-dir" / "m.gml").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(leftovers().empty());
}

TEST_F(CliTest, MalformedDocumentExitsTwo)
{
    std::ofstream(out_path("bad.json")) << "{\"spdxVersion\": \"SPDX-2.3\"}";
    const auto f = gen::fixture_path("saas_bom.cdx.json");
    const auto r = run({out_path("bad.json"), f, "--format-a", "cyclonedx"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("SPDX"), std::string::npos);
}

TEST_F(CliTest, DanglingReferencesWarn)
{
    std::ofstream(out_path("a.json")) << R"({"bomFormat":"CycloneDX","components":[{"bom-ref":"X","name":"x"}],
        "dependencies":[{"ref":"X","dependsOn":["Z"]}]})";
    const auto r = run({out_path("a.json"), out_path("a.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("Z"), std::string::npos);
}

TEST_F(CliTest, Version)
{
    const auto r = run({"--version"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}
