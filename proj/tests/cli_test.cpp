#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "qwalk/cli/commands.hpp"
#include "qwalk/cli/output.hpp"
#include "qwalk/observables.hpp"
#include "qwalk/quantum_map.hpp"

namespace {

using namespace qwalk;
using namespace qwalk::cli;
namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("qwalk_cli_" + std::to_string(::getpid()) + "_" + info->name());
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string out_dir() const { return dir_.string(); }

    fs::path dir_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Csv {
    std::vector<std::string> comments;
    std::vector<int> n;
    std::vector<double> p, p1, p2;
};

Csv read_csv(const std::string& path) {
    Csv c;
    std::istringstream in(slurp(path));
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) {
            c.comments.push_back(line);
            continue;
        }
        if (!header) {
            EXPECT_EQ(line, "n,P,P1,P2");
            header = true;
            continue;
        }
        std::istringstream row(line);
        std::string f;
        std::getline(row, f, ',');
        c.n.push_back(std::stoi(f));
        std::getline(row, f, ',');
        c.p.push_back(std::stod(f));
        std::getline(row, f, ',');
        c.p1.push_back(std::stod(f));
        std::getline(row, f, ',');
        c.p2.push_back(std::stod(f));
    }
    return c;
}

TEST(RunConfigDoc, DefaultsAndRoundTrip) {
    const RunConfig d = parse_run_config("{}");
    EXPECT_EQ(d.walk.kick_strength, 2.0);
    EXPECT_EQ(d.ensemble.n_samples, kDefaultEnsembleSamples);
    EXPECT_EQ(d.route, Route::kSimulation);
    RunConfig r;
    r.walk.kick_strength = 1.25;
    r.walk.steps = 7;
    r.walk.quasimomentum = 3e-4;
    r.walk.free_evolution = FreeEvolution::kFull;
    r.ratchet.classes = {0, 1, 2};
    r.ratchet.level_weights = {0.6, 0.8};
    r.ratchet.relative_phase = 0.3;
    r.ensemble.fwhm = 0.005;
    r.ensemble.seed = 18446744073709551615ull;
    r.route = Route::kNearResonant;
    r.path_sum = PathSumMode::kEnumerate;
    r.compare = {Route::kResonant, 1e-7, true};
    r.output = {"some/dir", true};
    r.threads = 3;
    const std::string text = to_json_string(r);
    EXPECT_EQ(to_json_string(parse_run_config(text)), text);
}

TEST(RunConfigDoc, RejectsUnknownKeysAndBadValues) {
    EXPECT_THROW(parse_run_config(R"({"kick":2})"), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"ratchet":{"clases":[0]}})"), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"ensemble":{"fwhm":0.1,"n":3}})"), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"steps":"ten"})"), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"route":"sideways"})"), ConfigError);
    EXPECT_THROW(parse_run_config(R"({"free_evolution":3})"), ConfigError);
    EXPECT_THROW(parse_run_config(R"([1, 2])"), ConfigError);
    EXPECT_THROW(parse_run_config("{steps: 3"), ConfigError);
}

TEST(RunConfigDoc, RouteChecks) {
    RunConfig r;
    r.route = Route::kResonant;
    r.walk.quasimomentum = 0.001;
    EXPECT_THROW(r.validate(), ConfigError);
    r.walk.quasimomentum = 0.0;
    r.ensemble.fwhm = 0.01;
    EXPECT_THROW(r.validate(), ConfigError);
    r.route = Route::kNearResonant;
    EXPECT_NO_THROW(r.validate());
    r.walk.steps = 21;
    EXPECT_THROW(r.validate(), ConfigError);
}

TEST(RunConfigDoc, AnalyticRouteChoice) {
    RunConfig r;
    EXPECT_EQ(analytic_route(r), Route::kResonant);
    r.walk.quasimomentum = 1e-3;
    EXPECT_EQ(analytic_route(r), Route::kNearResonant);
    r.walk.quasimomentum = 0.0;
    r.ensemble.fwhm = 1e-3;
    EXPECT_EQ(analytic_route(r), Route::kNearResonant);
    r.route = Route::kResonant;
    EXPECT_EQ(analytic_route(r), Route::kResonant);
}

TEST_F(CliTest, CompareResonantAgainstSimulation) {
    const auto r = cli({"compare", "--route", "resonant", "--k", "2", "--steps", "10", "--out", out_dir()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    const auto report = nlohmann::json::parse(slurp(path("compare_report.json")));
    EXPECT_LE(report.at("max_norm").get<double>(), 1e-10);
    EXPECT_TRUE(report.at("passed").get<bool>());
    EXPECT_EQ(report.at("routes")[0], "resonant");
    EXPECT_EQ(report.at("routes")[1], "simulate");
    EXPECT_EQ(report.at("config").at("steps"), 10);
    EXPECT_TRUE(fs::exists(path("resonant.csv")));
    EXPECT_TRUE(fs::exists(path("simulate.csv")));
}

TEST_F(CliTest, CompareFailureExitCode) {
    const auto r = cli({"compare", "--route", "near-resonant", "--beta", "0.002", "--steps", "10", "--tolerance",
                        "1e-6", "--out", out_dir()});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
    EXPECT_FALSE(nlohmann::json::parse(slurp(path("compare_report.json"))).at("passed").get<bool>());
}

TEST_F(CliTest, CompareExcludeInitialGatesOnRemainingClasses) {
    const std::vector<std::string> base{"compare", "--route", "near-resonant", "--beta", "1e-4", "--steps", "5",
                                        "--out", out_dir()};
    auto args = base;
    args.insert(args.end(), {"--tolerance", "1"});
    ASSERT_EQ(cli(args).code, 0);
    const auto report = nlohmann::json::parse(slurp(path("compare_report.json")));
    const double all = report.at("max_norm").get<double>();
    const double rest = report.at("max_norm_excluding_initial").get<double>();
    ASSERT_LT(rest, all);
    const std::string between = format_number(0.5 * (rest + all));
    args = base;
    args.insert(args.end(), {"--tolerance", between});
    EXPECT_EQ(cli(args).code, 4);
    args.push_back("--exclude-initial");
    EXPECT_EQ(cli(args).code, 0);
}

TEST_F(CliTest, ConfigErrors) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"simulate", "--weights", "1,1", "--out", out_dir()}).code, 2);
    EXPECT_EQ(cli({"simulate", "--weights", "1", "--out", out_dir()}).code, 2);
    EXPECT_EQ(cli({"simulate", "--ratchet", "0,x", "--out", out_dir()}).code, 2);
    EXPECT_EQ(cli({"simulate", "--route", "sideways", "--out", out_dir()}).code, 2);
    EXPECT_EQ(cli({"simulate", "--steps", "many"}).code, 2);
    EXPECT_EQ(cli({"simulate", "--nonsense"}).code, 2);
    EXPECT_EQ(cli({"analytic", "--route", "resonant", "--beta", "0.01", "--out", out_dir()}).code, 2);
    EXPECT_EQ(cli({"sweep", "--axis", "q", "--values", "1", "--out", out_dir()}).code, 2);
    EXPECT_EQ(cli({"sweep", "--axis", "T", "--values", "2.5", "--out", out_dir()}).code, 2);
    EXPECT_EQ(cli({"simulate", "--config", path("missing.json")}).code, 2);
    fs::create_directories(dir_);
    std::ofstream(path("bad.json")) << R"({"steps": 3, "colour": "blue"})";
    const auto r = cli({"simulate", "--config", path("bad.json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST_F(CliTest, NumericErrors) {
    EXPECT_EQ(cli({"simulate", "--k", "300", "--steps", "2", "--out", out_dir()}).code, 3);
    EXPECT_EQ(cli({"simulate", "--k", "3", "--steps", "6", "--cutoff", "5", "--out", out_dir()}).code, 3);
}

TEST_F(CliTest, HelpExitsCleanly) {
    const auto r = cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
    EXPECT_EQ(cli({"sweep", "--help"}).code, 0);
}

TEST_F(CliTest, CsvMatchesLibraryBitForBit) {
    ASSERT_EQ(cli({"simulate", "--k", "1.5", "--steps", "6", "--ratchet", "0,1,2", "--out", out_dir()}).code, 0);
    const Csv c = read_csv(path("simulate.csv"));
    WalkConfig w;
    w.kick_strength = 1.5;
    w.steps = 6;
    RatchetSpec r;
    r.classes = {0, 1, 2};
    const auto d = walk(w, r);
    ASSERT_EQ(c.n.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(c.n[i], d.n_at(i));
        EXPECT_EQ(c.p[i], d.total[i]);
        EXPECT_EQ(c.p1[i], d.p1[i]);
        EXPECT_EQ(c.p2[i], d.p2[i]);
    }
    // The provenance header carries the resolved config.
    ASSERT_GE(c.comments.size(), 3u);
    EXPECT_EQ(c.comments[1], "# route: simulate");
    ASSERT_TRUE(c.comments[2].starts_with("# config: "));
    const RunConfig back = parse_run_config(c.comments[2].substr(10));
    EXPECT_EQ(back.walk.steps, 6);
    EXPECT_EQ(back.walk.momentum_cutoff, d.cutoff);
    EXPECT_EQ(back.ratchet.classes, r.classes);
}

TEST_F(CliTest, ReproducibleEnsembleOutput) {
    const std::vector<std::string> base{"simulate", "--fwhm", "0.005", "--samples", "40", "--seed", "7",
                                        "--steps", "8"};
    auto a = base;
    a.insert(a.end(), {"--out", path("a"), "--threads", "1"});
    auto b = base;
    b.insert(b.end(), {"--out", path("b"), "--threads", "4"});
    ASSERT_EQ(cli(a).code, 0);
    ASSERT_EQ(cli(b).code, 0);
    // Only the output directory and thread count differ in the header.
    auto strip = [](std::string s) {
        return s.substr(s.find("n,P,P1,P2"));
    };
    const std::string first = slurp(path("a/simulate.csv"));
    EXPECT_EQ(strip(first), strip(slurp(path("b/simulate.csv"))));
    // Identical invocation, identical bytes.
    ASSERT_EQ(cli(a).code, 0);
    EXPECT_EQ(slurp(path("a/simulate.csv")), first);
}

TEST_F(CliTest, SweepOverSteps) {
    const auto r = cli({"sweep", "--axis", "T", "--values", "4,8,12", "--k", "2", "--out", out_dir()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::vector<int> fronts;
    for (const char* T : {"4", "8", "12"}) {
        const Csv c = read_csv(path(std::string("simulate_T_") + T + ".csv"));
        MomentumDistribution d = MomentumDistribution::from_levels(
            (static_cast<int>(c.n.size()) - 1) / 2, c.p1, c.p2);
        const auto peaks = peak_positions(d);
        ASSERT_GE(peaks.size(), 2u);
        EXPECT_EQ(peaks.front(), 1 - peaks.back());
        fronts.push_back(peaks.back());
    }
    EXPECT_LT(fronts[0], fronts[1]);
    EXPECT_LT(fronts[1], fronts[2]);
    const std::string summary = slurp(path("sweep_summary.csv"));
    EXPECT_NE(summary.find("value,sum,mean,std_dev,peaks,leakage,validity_product"), std::string::npos);
    // Three points are too few for a ballistic fit.
    EXPECT_EQ(summary.find("ballistic_fit"), std::string::npos);
}

TEST_F(CliTest, SweepBallisticFitAndOtherAxes) {
    ASSERT_EQ(cli({"sweep", "--axis", "T", "--values", "5,10,15,20", "--out", out_dir()}).code, 0);
    const std::string summary = slurp(path("sweep_summary.csv"));
    const auto at = summary.find("r_squared=");
    ASSERT_NE(at, std::string::npos);
    EXPECT_GE(std::stod(summary.substr(at + 10)), 0.99);
    ASSERT_EQ(cli({"sweep", "--axis", "k", "--values", "0.5,1", "--steps", "3", "--out", out_dir()}).code, 0);
    EXPECT_TRUE(fs::exists(path("simulate_k_0.5.csv")));
    ASSERT_EQ(cli({"sweep", "--axis", "fwhm", "--values", "0,0.01", "--steps", "3", "--samples", "20", "--route",
                   "near-resonant", "--out", out_dir()})
                  .code,
              0);
    EXPECT_TRUE(fs::exists(path("near-resonant_fwhm_0.01.csv")));
}

TEST_F(CliTest, ValidityWarning) {
    auto r = cli({"analytic", "--route", "near-resonant", "--fwhm", "0.01", "--steps", "15", "--samples", "20",
                  "--out", out_dir()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    r = cli({"analytic", "--route", "near-resonant", "--beta", "0.001", "--steps", "15", "--out", out_dir()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.err.find("warning"), std::string::npos);
    r = cli({"simulate", "--fwhm", "0.01", "--steps", "15", "--samples", "20", "--out", out_dir()});
    EXPECT_EQ(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, AnalyticDefaultsToResonantFormula) {
    ASSERT_EQ(cli({"analytic", "--steps", "5", "--out", out_dir()}).code, 0);
    EXPECT_TRUE(fs::exists(path("resonant.csv")));
    ASSERT_EQ(cli({"analytic", "--steps", "5", "--beta", "1e-3", "--out", out_dir()}).code, 0);
    EXPECT_TRUE(fs::exists(path("near-resonant.csv")));
}

TEST_F(CliTest, ConfigFileWithFlagOverrides) {
    fs::create_directories(dir_);
    std::ofstream(path("run.json")) << R"({"kick_strength": 1.0, "steps": 4,
        "ratchet": {"classes": [0], "level_weights": [1.0, 0.0]},
        "output": {"directory": ")" << out_dir() << R"("}})";
    ASSERT_EQ(cli({"simulate", "--config", path("run.json"), "--steps", "2"}).code, 0);
    const Csv c = read_csv(path("simulate.csv"));
    const RunConfig back = parse_run_config(c.comments[2].substr(10));
    EXPECT_EQ(back.walk.kick_strength, 1.0);
    EXPECT_EQ(back.walk.steps, 2);
    EXPECT_EQ(back.ratchet.classes, std::vector<int>{0});
}

TEST_F(CliTest, Plots) {
    ASSERT_EQ(cli({"compare", "--route", "resonant", "--steps", "6", "--plot", "--out", out_dir()}).code, 0);
    for (const char* name : {"compare.svg", "resonant.svg", "simulate.svg"}) {
        const std::string svg = slurp(path(name));
        EXPECT_TRUE(svg.starts_with("<?xml")) << name;
        EXPECT_NE(svg.find("<svg"), std::string::npos);
        EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
        EXPECT_NE(svg.find("</svg>"), std::string::npos);
    }
}

}  // namespace
