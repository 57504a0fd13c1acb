#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + LTO_VERIFY_BIN + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string write_config(const std::string& name, const json& j) {
    auto path = std::filesystem::temp_directory_path() / ("lto_cli_" + name + ".json");
    std::ofstream(path) << j.dump();
    return path.string();
}

json toric_model(int w = 4, int h = 4) {
    return {{"kind", "toric"}, {"patch", {w, h}}, {"cut", 1.5}, {"layout", "edge"}};
}

}  // namespace

TEST(Cli, EmptyCheckListPasses) {
    auto cfg = write_config("empty", {{"models", json::array({toric_model()})}});
    auto r = run("check --json --config " + cfg);
    EXPECT_EQ(r.status, 0);
    auto doc = json::parse(r.out);
    EXPECT_TRUE(doc["pass"].get<bool>());
    EXPECT_TRUE(doc["reports"].empty());
}

TEST(Cli, LtoSuiteOnToricPatch) {
    auto r = run("check --model toric --patch 4x4 --suite lto");
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("ALL PASS"), std::string::npos);
    EXPECT_NE(r.out.find("PASS lto1"), std::string::npos);
    EXPECT_NE(r.out.find("PASS lto3_lto4"), std::string::npos);
}

TEST(Cli, FibonacciModularSuite) {
    auto r = run("skein --cat fibonacci --n 3 --suite modular --json");
    ASSERT_EQ(r.status, 0) << r.out;
    auto doc = json::parse(r.out);
    ASSERT_EQ(doc["reports"].size(), 1u);
    EXPECT_EQ(doc["reports"][0]["check"], "skein_modular");
    EXPECT_TRUE(doc["reports"][0]["pass"].get<bool>());
}

TEST(Cli, ReportsAreByteIdentical) {
    auto cfg = write_config("det", {{"models", json::array({toric_model()})}, {"suite", {"lto", "dense"}}});
    auto a = run("check --json --config " + cfg);
    auto b = run("check --json --config " + cfg);
    auto c = run("check --json --jobs 3 --config " + cfg);
    EXPECT_EQ(a.status, b.status);
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out);
    // the worker count only changes the config echo
    auto ja = json::parse(a.out), jc = json::parse(c.out);
    ja.erase("config");
    jc.erase("config");
    EXPECT_EQ(ja.dump(), jc.dump());
}

TEST(Cli, InvalidConfigExitsTwo) {
    auto bad = write_config("bad", {{"models", json::array({toric_model()})}, {"dense_budget", -5}});
    EXPECT_EQ(run("check --config " + bad).status, 2);
    auto unknown = write_config("unknown", {{"models", json::array({toric_model()})}, {"suite", {"nope"}}});
    EXPECT_EQ(run("check --config " + unknown).status, 2);
    EXPECT_EQ(run("check --config /nonexistent/lto.json").status, 2);
    EXPECT_EQ(run("check --model toric --patch 4by4 --suite lto").status, 2);
}

TEST(Cli, ExitStatusIsConjunctionOfPasses) {
    json checks = json::array();
    checks.push_back({{"check", "lto1"}, {"R", {{"rect", {1, 1, 1, 1}}}}, {"S", {{"rect", {0, 0, 3, 3}}}}});
    auto ok = write_config("ok", {{"models", json::array({toric_model()})}, {"checks", checks}});
    EXPECT_EQ(run("check --config " + ok).status, 0);
    // a region without terms cannot satisfy LTO1 against itself
    checks.push_back({{"check", "lto1"}, {"R", {{"rect", {1, 1, 1, 1}}}}, {"S", {{"rect", {1, 1, 1, 1}}}}});
    auto mixed = write_config("mixed", {{"models", json::array({toric_model()})}, {"checks", checks}});
    auto r = run("check --json --config " + mixed);
    EXPECT_EQ(r.status, 1);
    auto doc = json::parse(r.out);
    bool all = true;
    for (auto& rep : doc["reports"]) all = all && rep["pass"].get<bool>();
    EXPECT_FALSE(all);
    EXPECT_EQ(doc["pass"].get<bool>(), all);
    EXPECT_EQ(doc["reports"].size(), 2u);
}

TEST(Cli, PerCheckErrorsStayInReport) {
    json checks = json::array();
    checks.push_back({{"check", "hd"}, {"R", {{"rect", {0, 0, 0, 0}}}}, {"S", {{"rect", {0, 0, 3, 3}}}}});
    checks.push_back({{"check", "lto1"}, {"R", {{"rect", {1, 1, 1, 1}}}}, {"S", {{"rect", {0, 0, 3, 3}}}}});
    auto cfg = write_config("errs", {{"models", json::array({toric_model()})}, {"checks", checks}});
    auto r = run("check --json --config " + cfg);
    EXPECT_EQ(r.status, 1);
    auto doc = json::parse(r.out);
    ASSERT_EQ(doc["reports"].size(), 2u);
    int errors = 0;
    for (auto& rep : doc["reports"]) errors += rep.value("error", "") == "BAD_AXIS";
    EXPECT_EQ(errors, 1);
}

TEST(Cli, FlagsOverrideConfig) {
    auto cfg = write_config("override", {{"models", json::array({toric_model()})}, {"suite", {"lto"}}, {"tol", 0.5}});
    auto r = run("check --json --tol 1e-7 --patch 5x4 --config " + cfg);
    auto doc = json::parse(r.out);
    EXPECT_DOUBLE_EQ(doc["config"]["tol"].get<double>(), 1e-7);
    EXPECT_EQ(doc["config"]["models"][0]["patch"], json({5, 4}));
    EXPECT_EQ(doc["config"]["models"][0]["kind"], "toric");
}

TEST(Cli, BudgetFromEnvironment) {
    auto cfg = write_config("budget", {{"models", json::array({toric_model()})}, {"dense_budget", 4096}});
    auto doc = json::parse(run("check --json --config " + cfg, "LTO_VERIFY_BUDGET=1234").out);
    EXPECT_EQ(doc["config"]["dense_budget"].get<long>(), 1234);
    // a tiny budget makes the dense route refuse
    auto small = run("check --json --model toric --patch 4x4 --suite dense", "LTO_VERIFY_BUDGET=16");
    auto sd = json::parse(small.out);
    EXPECT_EQ(small.status, 1);
    for (auto& rep : sd["reports"]) EXPECT_EQ(rep["error"], "BUDGET_EXCEEDED");
    EXPECT_EQ(run("check --config " + cfg, "LTO_VERIFY_BUDGET=lots").status, 2);
}

TEST(Cli, ReportRoundTrip) {
    auto out = (std::filesystem::temp_directory_path() / "lto_cli_report.json").string();
    auto r = run("skein --cat vec_z2 --n 2 --suite modular,haag --out " + out);
    ASSERT_EQ(r.status, 0);
    auto back = run("report " + out);
    EXPECT_EQ(back.status, 0);
    EXPECT_EQ(back.out, r.out);
}

TEST(Cli, TomitaSelfTest) {
    auto r = run("tomita --n 5 --seed 3");
    EXPECT_EQ(r.status, 0) << r.out;
}
