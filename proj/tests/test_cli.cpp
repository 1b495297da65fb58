#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <jetmorse/cli.hpp>

#include "oracles.hpp"

using namespace jetmorse;
namespace fs = std::filesystem;

namespace
{

const std::string scenario_dir = JETMORSE_SCENARIO_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "jetmorse");
    std::vector<char *> argv;
    for (auto &a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("jetmorse_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override
    {
        fs::remove_all(dir_);
    }
    std::string path(const std::string &name) const
    {
        return (dir_ / name).string();
    }
    std::string write(const std::string &name, const std::string &text) const
    {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name);
    }

    fs::path dir_;
};

std::string minimal = scenario_dir + "/minimal.json";

} // namespace

TEST_F(Cli, MinimalScenarioParses)
{
    const BaseScenario sc = parse_scenario(minimal);
    EXPECT_EQ(sc.n, 2);
    EXPECT_EQ(sc.r, 2);
    EXPECT_EQ(sc.samples.size(), 1u);
    EXPECT_EQ(sc.delta, 0.0);
    EXPECT_EQ(sc.theta_L.matrix(), Eigen::MatrixXcd::Identity(2, 2));
}

TEST_F(Cli, RejectsBadWeights)
{
    auto doc = io::scenario_to_json(parse_scenario(minimal));
    doc["samples"][0]["weight"] = 0.9;
    const std::string p = write("w.json", doc.dump());
    try {
        parse_scenario(p);
        FAIL();
    } catch (const validation_error &e) {
        EXPECT_NE(std::string(e.what()).find("weights"), std::string::npos) << e.what();
    }
}

TEST_F(Cli, RejectsNonHermitianTensorNamingIndex)
{
    auto doc = io::scenario_to_json(parse_scenario(minimal));
    doc["samples"][0]["c"][0][1][0][1] = nlohmann::json::array({0.25, 0.0});
    const std::string p = write("h.json", doc.dump());
    try {
        parse_scenario(p);
        FAIL();
    } catch (const validation_error &e) {
        EXPECT_NE(std::string(e.what()).find("(1,2,1,2)"), std::string::npos) << e.what();
    }
}

TEST_F(Cli, ParseErrorsNameTheField)
{
    const std::string broken = write("b.json", "{\"n\": 2, \"r\": 2,");
    EXPECT_THROW(parse_scenario(broken), validation_error);
    const std::string missing = write("m.json", R"({"n": 2, "r": 2, "samples": []})");
    try {
        parse_scenario(missing);
        FAIL();
    } catch (const validation_error &e) {
        EXPECT_NE(std::string(e.what()).find("samples"), std::string::npos);
    }
    const std::string short_theta =
        write("t.json", R"({"n": 1, "r": 1, "samples": [{"weight": 1, "c": [[[[0.5]]]]}], "theta_L": [[1, 2]]})");
    try {
        parse_scenario(short_theta);
        FAIL();
    } catch (const validation_error &e) {
        EXPECT_NE(std::string(e.what()).find("theta_L"), std::string::npos) << e.what();
    }
}

TEST_F(Cli, ScenarioRoundTripIsExact)
{
    std::mt19937_64 g(1);
    BaseScenario sc;
    sc.n = 3;
    sc.r = 2;
    sc.samples.push_back({0.3, oracle::random_model(3, 2, g)});
    sc.samples.push_back({0.7, oracle::random_model(3, 2, g)});
    Eigen::MatrixXcd t(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            t(i, j) = 0.1 * oracle::random_complex(g);
        }
    }
    sc.theta_L = HermitianForm::symmetrized(t + t.adjoint() + 3.0 * Eigen::MatrixXcd::Identity(3, 3));
    sc.delta = 0.123456789;
    write_scenario(sc, path("rt.json"));
    const BaseScenario back = parse_scenario(path("rt.json"));
    EXPECT_EQ(back.n, sc.n);
    EXPECT_EQ(back.r, sc.r);
    EXPECT_EQ(back.delta, sc.delta);
    EXPECT_EQ(back.theta_L.matrix(), sc.theta_L.matrix());
    ASSERT_EQ(back.samples.size(), 2u);
    for (std::size_t s = 0; s < 2; ++s) {
        EXPECT_EQ(back.samples[s].weight, sc.samples[s].weight);
        EXPECT_EQ(back.samples[s].model, sc.samples[s].model);
    }
}

TEST_F(Cli, MorseWritesOneRowAndSummary)
{
    const Result r = invoke({"morse", "--scenario", minimal, "--metric", "gg", "--k", "3", "--q", "atmost:1",
                          "--samples", "5000", "--seed", "42", "--out", path("m")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(path("m.csv"));
    std::istringstream lines(csv);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    EXPECT_FALSE(std::getline(lines, extra));
    EXPECT_EQ(header, cli::csv_header);
    EXPECT_EQ(row.rfind("gg,3,2,2,atmost:1,0,5000,42,", 0), 0u) << row;
    const auto doc = nlohmann::json::parse(slurp(path("m.json")));
    EXPECT_EQ(doc["N"], 5000);
    EXPECT_EQ(doc["seed"], 42);
    EXPECT_TRUE(doc.contains("mean"));
    EXPECT_TRUE(doc.contains("lower_bound"));
}

TEST_F(Cli, MorseIsByteIdentical)
{
    const std::vector<std::string> base{"morse", "--scenario", scenario_dir + "/anisotropic.json", "--metric", "test1",
                                        "--k", "3", "--q", "atmost:1", "--samples", "6000", "--seed",
                                        "18446744073709551615"};
    auto a = base, b = base;
    a.insert(a.end(), {"--out", path("a")});
    b.insert(b.end(), {"--out", path("b")});
    ASSERT_EQ(invoke(a).code, 0);
    ASSERT_EQ(invoke(b).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_NE(slurp(path("a.csv")).find("18446744073709551615"), std::string::npos);
}

TEST_F(Cli, ExitCodes)
{
    // validation failures
    EXPECT_EQ(invoke({"morse", "--scenario", minimal, "--metric", "gg", "--k", "3", "--q", "atmost:1", "--samples",
                   "5000", "--out", path("x")})
                  .code,
              2); // no seed
    EXPECT_EQ(invoke({"morse", "--scenario", minimal, "--metric", "fs", "--k", "3", "--q", "atmost:1", "--samples",
                   "5000", "--seed", "1", "--out", path("x")})
                  .code,
              2);
    EXPECT_EQ(invoke({"morse", "--scenario", minimal, "--metric", "gg", "--k", "3", "--p", "5", "--q", "atmost:1",
                   "--samples", "5000", "--seed", "1", "--out", path("x")})
                  .code,
              2);
    EXPECT_EQ(invoke({"morse", "--scenario", path("nope.json"), "--metric", "gg", "--k", "3", "--q", "atmost:1",
                   "--samples", "5000", "--seed", "1", "--out", path("x")})
                  .code,
              2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"morse", "--seed", "-3"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
    // numerical guards
    const Result degenerate = invoke({"invariants", "--jet", scenario_dir + "/jet_degenerate.json"});
    EXPECT_EQ(degenerate.code, 3);
    EXPECT_NE(degenerate.err.find("component 2"), std::string::npos) << degenerate.err;
}

TEST_F(Cli, FdCheckThreshold)
{
    const Result ok = invoke({"fd-check", "--scenario", scenario_dir + "/anisotropic.json", "--metric", "gg", "--k", "3",
                           "--seed", "7"});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_NE(ok.err.find("max deviation"), std::string::npos);
    const Result coarse = invoke({"fd-check", "--scenario", scenario_dir + "/anisotropic.json", "--metric", "gg", "--k",
                               "3", "--seed", "7", "--step", "0.5"});
    EXPECT_EQ(coarse.code, 3);
    EXPECT_NE(coarse.err.find("max deviation"), std::string::npos);
    EXPECT_EQ(invoke({"fd-check", "--scenario", minimal, "--metric", "test1", "--k", "3", "--seed", "7"}).code, 2);
}

TEST_F(Cli, JetCommands)
{
    const std::string jet = scenario_dir + "/jet_k3_r2.json";
    const Result a = invoke({"act", "--jet", jet});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto doc = nlohmann::json::parse(a.out);
    const auto src = nlohmann::json::parse(slurp(jet));
    const Jet j = io::jet_from_json(src);
    const Jet moved = act(io::reparam_from_json(src["alpha"]), j);
    EXPECT_EQ(io::matrix_from_json(doc["xi"], 3, 2, "xi"), moved.xi());

    const Result w = invoke({"wronskian", "--jet", jet, "--out", path("w")});
    ASSERT_EQ(w.code, 0) << w.err;
    EXPECT_TRUE(fs::exists(path("w.json")));
    EXPECT_EQ(nlohmann::json::parse(w.out)["levels"].size(), 2u);

    const Result inv = invoke({"invariants", "--jet", jet});
    ASSERT_EQ(inv.code, 0) << inv.err;
    EXPECT_EQ(nlohmann::json::parse(inv.out)["numerators"].size(), 2u);
}

TEST_F(Cli, CurvatureAndSympow)
{
    const Result c = invoke({"curvature", "--scenario", minimal, "--metric", "gg", "--k", "2", "--q", "atmost:0"});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto doc = nlohmann::json::parse(c.out);
    EXPECT_NEAR(doc["closed_form"].get<double>(), std::pow(1.5 * 0.8, 2), 1e-12);
    const Result s = invoke({"sympow", "--scenario", minimal, "--lmax", "3"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto sd = nlohmann::json::parse(s.out);
    EXPECT_EQ(sd["samples"][0]["levels"][2]["dim"], 4);
}

TEST_F(Cli, DeltaScanAndConverge)
{
    const Result d = invoke({"delta-scan", "--scenario", minimal, "--metric", "gg", "--k", "2", "--q", "atmost:1",
                          "--samples", "2000", "--seed", "3", "--delta-grid", "0:1:0.25", "--out", path("d")});
    ASSERT_EQ(d.code, 0) << d.err;
    const auto doc = nlohmann::json::parse(slurp(path("d.json")));
    EXPECT_EQ(doc["points"].size(), 5u);
    EXPECT_TRUE(doc["best_delta"].is_number());
    EXPECT_NEAR(doc["log_k_over_k"].get<double>(), std::log(2.0) / 2.0, 1e-15);
    EXPECT_EQ(invoke({"delta-scan", "--scenario", minimal, "--metric", "gg", "--k", "2", "--q", "atmost:1", "--samples",
                   "2000", "--seed", "3", "--delta-grid", "1:0:0.25", "--out", path("d")})
                  .code,
              2);

    const Result c = invoke({"converge", "--scenario", minimal, "--metric", "gg", "--k", "2", "--q", "atmost:1",
                          "--samples", "20000", "--batches", "10", "--seed", "3", "--out", path("c")});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto cd = nlohmann::json::parse(slurp(path("c.json")));
    EXPECT_EQ(cd["batch_means"].size(), 10u);
    EXPECT_TRUE(cd["converged"].is_boolean());
    EXPECT_TRUE(cd["ci_half_width"].is_number());
}

TEST_F(Cli, ReportAddsHarmonicReference)
{
    for (int k : {2, 4, 3}) {
        const std::string ks = std::to_string(k);
        ASSERT_EQ(invoke({"morse", "--scenario", minimal, "--metric", "gg", "--k", ks, "--q", "atmost:1", "--samples",
                       "2000", "--seed", "5", "--out", path("k" + ks)})
                      .code,
                  0);
    }
    const Result r = invoke({"report", path("k2.csv"), path("k3.csv"), path("k4.csv"), "--out", path("rep")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream plot(slurp(path("rep_plot.csv")));
    std::string line;
    std::getline(plot, line);
    EXPECT_EQ(line, "metric_kind,k,mean,stderr,hk_pow_n");
    std::vector<int> ks;
    while (std::getline(plot, line)) {
        ks.push_back(std::stoi(line.substr(line.find(',') + 1)));
        const double ref = std::stod(line.substr(line.rfind(',') + 1));
        EXPECT_NEAR(ref, std::pow(harmonic(ks.back()), 2), 1e-12);
    }
    EXPECT_EQ(ks, (std::vector<int>{2, 3, 4}));
    EXPECT_TRUE(fs::exists(path("rep.csv")));
    EXPECT_EQ(invoke({"report", minimal, "--out", path("bad")}).code, 2);
}

TEST(CliHelpers, ThreadsAndGrid)
{
    EXPECT_EQ(cli::threads_from_env(nullptr), 1);
    EXPECT_EQ(cli::threads_from_env("0"), 0);
    EXPECT_EQ(cli::threads_from_env("4"), 4);
    EXPECT_THROW(cli::threads_from_env("four"), validation_error);
    EXPECT_THROW(cli::threads_from_env("-1"), validation_error);
    EXPECT_EQ(cli::parse_delta_grid("0:0.5:0.25"), (std::vector<double>{0.0, 0.25, 0.5}));
    EXPECT_THROW(cli::parse_delta_grid("0:1"), validation_error);
    EXPECT_THROW(cli::parse_delta_grid("0:1:0"), validation_error);
    EXPECT_EQ(cli::parse_p("auto"), 0);
    EXPECT_EQ(cli::parse_p("12"), 12);
    EXPECT_THROW(cli::parse_p("12x"), validation_error);
}
