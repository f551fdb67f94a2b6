#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "helpers.hpp"

using nlohmann::json;
using pakmarket::testing::data_file;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(PAKMARKET_CLI) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), static_cast<int>(buf.size()), pipe))
        res.output += buf.data();
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

} // namespace

TEST_CASE("solve emits the welfare certificate") {
    auto res = run_cli("solve " + q(data_file("running_example.json")));
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["swp"] == 16);
    CHECK(doc["integral"] == true);
    CHECK(doc["certificate"]["allocation"]["4"] == json::array({"AB"}));
}

TEST_CASE("verify distinguishes equilibria from non-equilibria") {
    std::string file = q(data_file("running_example.json"));
    std::string alloc = R"('{"1": ["B"], "3": ["A"], "4": ["AB"]}')";
    auto good = run_cli("verify " + file + " --prices '" +
                        R"({"A": 4, "B": 5, "AB": 9})" + "' --alloc " + alloc);
    CHECK(good.exit_code == 0);
    CHECK(json::parse(good.output)["ok"] == true);

    auto bad = run_cli("verify " + file + " --prices '" +
                       R"({"A": 1, "B": 1, "AB": 1})" + "' --alloc " + alloc);
    CHECK(bad.exit_code == 1);
    json doc = json::parse(bad.output);
    CHECK(doc["ok"] == false);
    CHECK(doc["violations"].size() > 0);
}

TEST_CASE("prices enumerates the equilibrium set, exit 3 when empty") {
    auto res = run_cli("prices " + q(data_file("running_example.json")) + " --bound 12");
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["count"] == 4);
    CHECK(doc["prices"][0] == json::array({4, 5, 9}));

    auto empty = run_cli("prices " + q(data_file("three_buyers_no_equilibrium.json")) +
                         " --bound 16");
    CHECK(empty.exit_code == 3);
    CHECK(json::parse(empty.output)["count"] == 0);
}

TEST_CASE("auction subcommand reproduces the golden outcome") {
    auto res =
        run_cli("auction " + q(data_file("six_buyers_revenue.json")) + " --trace");
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["rounds"] == 4);
    CHECK(doc["prices"] == json({{"A", 5}, {"B", 7}, {"AB", 11}}));
    CHECK(doc["trace"][0]["prices"] == json({{"A", 2}, {"B", 4}, {"AB", 8}}));
}

TEST_CASE("extended-auction runs with auxiliary costs") {
    auto res = run_cli("extended-auction " + q(data_file("six_buyers_revenue.json")) +
                       " --aux-costs '" + R"({"A": 4, "B": 6, "AB": 8})" + "'");
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["allocation"]["L5"] == json::array({"AB"}));
}

TEST_CASE("dual prints the set-function dual") {
    auto res = run_cli("dual " + q(data_file("three_goods_values.json")));
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["dual_is"] == "cost");
    CHECK(doc["table"] == json({{"A", 2}, {"B", 2}, {"C", 0}, {"AB", 4},
                                {"AC", 2}, {"BC", 3}, {"ABC", 4}}));
}

TEST_CASE("check reports super/subadditivity") {
    auto res = run_cli("check " + q(data_file("three_goods_values.json")));
    CHECK(res.exit_code == 0);
    json doc = json::parse(res.output);
    CHECK(doc["seller"]["superadditive"] == true);
    CHECK(doc["seller"]["set_cover_supermodular"] == false);
}

TEST_CASE("validation failures exit 2") {
    auto res = run_cli("solve " + q(data_file("bad_float.json")));
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("error:") != std::string::npos);

    auto missing = run_cli("solve /nonexistent/file.json");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("usage errors exit 64") {
    CHECK(run_cli("").exit_code == 64);
    CHECK(run_cli("frobnicate x.json").exit_code == 64);
    CHECK(run_cli("prices " + q(data_file("running_example.json"))).exit_code == 64);
    CHECK(run_cli("--help").exit_code == 0);
}
