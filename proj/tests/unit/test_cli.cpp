#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    const auto capture = fs::temp_directory_path() / ("mqsr_cli_out_" + std::to_string(::getpid()));
    const std::string cmd = std::string(MQSR_CLI_PATH) + " " + args + " > " + capture.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    fs::remove(capture);
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("mqsr_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Cli, GenSolveLassoRoundTrip) {
    const auto dir = scratch("data");
    auto r = run("gen --p 8 --s 2 --n1 30 --n2 30 --sigma1-sq 0.05 --sigma2-sq 0.2 --seed 3 --out " + dir.string());
    ASSERT_EQ(r.code, 0);
    const auto gen = nlohmann::json::parse(r.out);
    r = run("solve --data " + dir.string());
    ASSERT_EQ(r.code, 0);
    const auto solve = nlohmann::json::parse(r.out);
    EXPECT_EQ(solve["support"], gen["support"]);
    EXPECT_EQ(solve["support_error"], 0);
    r = run("lasso --data " + dir.string());
    ASSERT_EQ(r.code, 0);
    const auto las = nlohmann::json::parse(r.out);
    EXPECT_TRUE(las["converged"].get<bool>());
    EXPECT_TRUE(las.contains("witness"));
    fs::remove_all(dir);
}

TEST(Cli, PlanAndBound) {
    auto r = run("plan --p 100 --s 8 --delta 0.5 --epsilon 0 --sigma1-sq 1 --sigma2-sq 4 --frontier 0");
    ASSERT_EQ(r.code, 0);
    const auto plan = nlohmann::json::parse(r.out);
    EXPECT_EQ(plan["agnostic"]["frontier"][0]["n2"], 100);
    EXPECT_NEAR(plan["agnostic"]["price_of_quality"].get<double>(), 1.5504, 1e-4);
    r = run("bound --n1 10 --n2 10 --sigma1-sq 1 --sigma2-sq 4 --m 8");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(r.out)["bound"].get<double>(), 5.683e-3, 1e-6);
}

TEST(Cli, SweepWritesFilesAndIsDeterministic) {
    const auto a = scratch("sweep_a"), b = scratch("sweep_b");
    const std::string base =
        "sweep --decoder AgnosticScan --p 12 --s 2 --sigma1-sq 0.1 --sigma2-sq 0.5 --grid 5:5,10:10 "
        "--trials 8 --delta 0.25 --seed 4 --formats csv,svg";
    ASSERT_EQ(run(base + " --threads 1 --out " + a.string()).code, 0);
    ASSERT_EQ(run(base + " --threads 3 --out " + b.string()).code, 0);
    for (const char* f : {"summary.csv", "trials.csv", "phase.svg", "config.json"}) {
        EXPECT_TRUE(fs::exists(a / f)) << f;
    }
    std::ifstream fa(a / "summary.csv"), fb(b / "summary.csv");
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("sweep --decoder Nope --p 5 --s 1").code, 2);
    EXPECT_EQ(run("plan --p 10 --s 2 --sigma1-sq 1 --sigma2-sq 1 --delta 1.5").code, 2);
    EXPECT_EQ(run("bogus").code, 2);
    EXPECT_EQ(run("sweep --decoder AgnosticScan --p 100 --s 6 --sigma1-sq 1 --sigma2-sq 1 --grid 5:5 --trials 1 --out " +
                  scratch("cap").string())
                  .code,
              3);
    EXPECT_EQ(run("solve --data /nonexistent/dataset").code, 4);
    const auto cfg = scratch("cfg.json");
    std::ofstream(cfg) << "{ not json";
    EXPECT_EQ(run("sweep --config " + cfg.string()).code, 2);
    fs::remove(cfg);
}
