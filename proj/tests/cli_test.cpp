#include <gtest/gtest.h>

#include <sstream>

#include "wiener_cli.hpp"

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "wiener");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = wiener::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string set_path(const std::string& name) { return std::string(WIENER_SETS_DIR) + "/" + name; }

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Cli, OracleOneSided) {
    const auto r = run({"oracle", "--one-sided", "1.0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0.6826894921\n");
    EXPECT_EQ(run({"oracle", "--two-sided", "0"}).code, 2);
    EXPECT_EQ(run({"oracle"}).code, 2);
}

TEST(Cli, ConvergeNineNonincreasingRows) {
    const auto r = run({"converge", "--set", set_path("onesided_a1.json"), "--levels", "0..8", "--samples", "2000"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 10u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"level", "n_times", "alpha", "delta_prev", "quad_err", "mc_phat",
                                                 "mc_se", "runtime_ms"}));
    double prev = 2.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ASSERT_EQ(rows[i].size(), 8u);
        EXPECT_EQ(rows[i][0], std::to_string(i - 1));
        EXPECT_EQ(rows[i][1], std::to_string(1 << (i - 1)));
        const double a = std::stod(rows[i][2]);
        EXPECT_LE(a, prev);
        prev = a;
        EXPECT_FALSE(rows[i][5].empty());
        EXPECT_TRUE(rows[i][7].empty());
    }
}

TEST(Cli, EmptyBandEstimatesZero) {
    const auto r = run({"estimate", "--set", set_path("empty_band.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["value"].get<double>(), 0.0);
}

TEST(Cli, MalformedInput) {
    EXPECT_EQ(run({"estimate"}).code, 2);
    EXPECT_EQ(run({"estimate", "--set", set_path("missing.json")}).code, 2);
    EXPECT_EQ(run({"estimate", "--set", set_path("onesided_a1.json"), "--levels", "3..1"}).code, 2);
    EXPECT_EQ(run({"estimate", "--set", set_path("onesided_a1.json"), "--space-points", "4"}).code, 2);
    EXPECT_EQ(run({"estimate", "--set", set_path("onesided_a1.json"), "--no-such-flag"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SameSeedSameBytes) {
    const std::vector<std::string> args{"converge", "--set", set_path("twosided_a1.json"), "--levels", "0..4",
                                        "--samples", "20000", "--seed", "7"};
    auto a = args, b = args;
    a.insert(a.end(), {"--workers", "1"});
    b.insert(b.end(), {"--workers", "4"});
    const auto ra = run(a), rb = run(b);
    EXPECT_EQ(ra.code, 0);
    EXPECT_EQ(ra.out, rb.out);
}

TEST(Cli, SampleCsv) {
    const auto r = run({"sample", "--mode", "bridge", "--level", "2", "--samples", "5"});
    ASSERT_EQ(r.code, 0);
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"row", "W(1/4)", "W(1/2)", "W(3/4)", "W(1)"}));
}

TEST(Cli, VerifySubsetIsWorkerIndependent) {
    const auto a = run({"verify", "--criteria", "4", "5", "--workers", "1"});
    const auto b = run({"verify", "--criteria", "4", "5", "--workers", "4"});
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("[PASS] C4"), std::string::npos);
}
