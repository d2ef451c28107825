#include "tlapbt/ir_json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using tlapbt::Json;

namespace {

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run(const std::string& args)
{
    std::string command = std::string(TLAPBT_CLI_PATH) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        return r;
    }
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.out.append(buf, n);
    }
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<Json> json_lines(const std::string& text)
{
    std::vector<Json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(Json::parse(line));
        }
    }
    return out;
}

std::string spec_file(const std::string& name) { return std::string(TLAPBT_SOURCE_DIR) + "/specs/" + name; }

std::string sut(const std::string& mutant) { return "'" + std::string(TLAPBT_SUT_PATH) + " --mutant " + mutant + "'"; }

} // namespace

TEST(Cli, CheckOneBit)
{
    CliRun r = run("check onebit");
    ASSERT_EQ(r.status, 0);
    auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0]["diameter"], 1);
    EXPECT_EQ(lines[0]["states_found"], 4);
    EXPECT_EQ(lines[0]["distinct_states"], 2);
}

TEST(Cli, CheckFromTlaFileAndJsonIr)
{
    CliRun direct = run("check --spec " + spec_file("diehard.tla"));
    ASSERT_EQ(direct.status, 0);
    std::string ir = ::testing::TempDir() + "/diehard.json";
    ASSERT_EQ(run("translate " + spec_file("diehard.tla") + " -o " + ir).status, 0);
    CliRun via_ir = run("check " + ir);
    ASSERT_EQ(via_ir.status, 0);
    EXPECT_EQ(json_lines(via_ir.out), json_lines(direct.out));
}

TEST(Cli, DieHardViolationExitsOne)
{
    CliRun r = run("check diehard --invariant big_ne_4");
    EXPECT_EQ(r.status, 1);
    auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[1]["invariant"], "big_ne_4");
    EXPECT_EQ(lines[1]["trace"].size(), 7u);
    EXPECT_EQ(lines[1]["trace"].back()["big"], 4);
}

TEST(Cli, HumanFormat)
{
    CliRun r = run("check euclid --param M=9 --param N=6 --format human");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("Euclid"), std::string::npos);
    EXPECT_NE(r.out.find("no invariant violated"), std::string::npos);
}

TEST(Cli, InputErrorsExitTwo)
{
    EXPECT_EQ(run("check nosuch").status, 2);
    EXPECT_EQ(run("check --spec " + spec_file("euclid.tla")).status, 2);
    EXPECT_EQ(run("check euclid --param Q=3").status, 2);
    EXPECT_EQ(run("check euclid --param M=x").status, 2);
    EXPECT_EQ(run("check onebit --invariant Nope").status, 2);
    EXPECT_EQ(run("check /nonexistent.tla").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("").status, 2);
}

TEST(Cli, TruncatedExplorationExitsTwo)
{
    CliRun r = run("check steamboiler --max-distinct 10");
    EXPECT_EQ(r.status, 2);
    auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0]["truncated"], true);
}

TEST(Cli, BehaviorsAreJsonLines)
{
    CliRun r = run("behaviors onebit --count 2 --max-len 4 --seed 1");
    ASSERT_EQ(r.status, 0);
    auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 2u);
    for (const auto& b : lines) {
        EXPECT_EQ(b["states"].size(), 4u);
    }
    EXPECT_EQ(run("behaviors onebit --count 2 --max-len 4 --seed 1").out, r.out);
}

TEST(Cli, TranslateWritesIr)
{
    CliRun r = run("translate " + spec_file("onebit.tla"));
    ASSERT_EQ(r.status, 0);
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["variables"], Json::array({"b"}));
    EXPECT_EQ(j["actions"].size(), 2u);
}

TEST(Cli, TestAgainstSubprocessSut)
{
    CliRun ok = run("test steamboiler --sut " + sut("none") + " --cases 100 --seed 3");
    EXPECT_EQ(ok.status, 0);
    Json report = Json::parse(ok.out);
    EXPECT_EQ(report["verdict"], "pass");
    EXPECT_EQ(report["cases_run"], 100);

    CliRun bad = run("test steamboiler --sut " + sut("level-band") + " --seed 3");
    EXPECT_EQ(bad.status, 1);
    Json failing = Json::parse(bad.out)["failing"];
    ASSERT_TRUE(failing.is_object());
    EXPECT_LE(failing["shrunk"].size(), failing["commands"].size());

    CliRun human = run("test steamboiler --sut " + sut("pump-ignore") + " --seed 3 --format human");
    EXPECT_EQ(human.status, 1);
    EXPECT_NE(human.out.find("FAIL"), std::string::npos);
    EXPECT_NE(human.out.find("shrunk to"), std::string::npos);
}

TEST(Cli, MissingSutIsInputError)
{
    EXPECT_EQ(run("test steamboiler --sut /nonexistent/sut --cases 3").status, 2);
    EXPECT_EQ(run("test onebit --cases 3").status, 2);
}

TEST(Cli, TranslateHumanPrintsModuleThatChecksTheSame)
{
    std::string path = ::testing::TempDir() + "/diehard_printed.tla";
    ASSERT_EQ(run("translate diehard --format human -o " + path).status, 0);
    CliRun printed = run("check " + path);
    ASSERT_EQ(printed.status, 0);
    EXPECT_EQ(json_lines(printed.out), json_lines(run("check diehard").out));
}
