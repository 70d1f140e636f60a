#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "funcbandit/cli/cli.hpp"
#include "funcbandit/errors.hpp"

using namespace fb;
using namespace fb::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("fb_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const std::string kPair = "beta:s1=1,s2=1;beta:s1=1,s2=2";

}  // namespace

TEST_CASE("formula subcommands") {
    auto r = call({"samplesize", "etc-es", "--c", "2", "--delta", "0.3", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "524\n");
    CHECK(call({"samplesize", "etc-t", "--c", "2", "--delta", "0.3", "--alpha", "0.1", "--eta", "0.1"}).out == "2624\n");
    CHECK(call({"samplesize", "etc-es", "--functional", "gini-welfare", "--delta", "0.15"}).out == "2094\n");
    auto b = call({"bound", "fucb", "--beta", "3.4142", "--c", "2", "--k", "2", "--n", "10000"});
    CHECK(b.code == 0);
    const double v = std::stod(b.out.substr(0, b.out.find('\n')));
    CHECK(v == doctest::Approx(2802.19).epsilon(1e-5));
    CHECK(v <= 2847.0);
    auto m = call({"bound", "famoss", "--beta", "1.175", "--c", "1", "--k", "1", "--n", "1"});
    CHECK(std::stod(m.out) == doctest::Approx(32.5).epsilon(0.002));
    auto h = call({"bound", "hpb", "--beta", "2.01", "--c", "2", "--n", "10000", "--gaps", "0", "0.1"});
    CHECK(std::stod(h.out) == doctest::Approx(1481.1227).epsilon(1e-7));
    CHECK(call({"bound", "fucb", "--beta", "2", "--c", "2", "--n", "10"}).code == 2);
    CHECK(call({"samplesize", "etc-x", "--c", "2", "--delta", "0.3"}).code == 2);
    CHECK(call({"samplesize", "etc-es", "--delta", "0.3"}).code == 2);
    CHECK(call({"samplesize", "etc-t", "--c", "2", "--delta", "0"}).code == 2);
}

TEST_CASE("eval, ci and ingest") {
    auto dir = scratch("data");
    put(dir / "pm.csv", "arm_id,outcome\np,0.37\np,0.37\np,0.37\n");
    auto r = call({"eval", "--functional", "gini-welfare", "--data", (dir / "pm.csv").string()});
    CHECK(r.code == 0);
    REQUIRE(r.out.rfind("p ", 0) == 0);
    CHECK(std::stod(r.out.substr(2)) == doctest::Approx(0.37).epsilon(1e-14));
    auto ci = call({"ci", "--functional", "mean", "--data", (dir / "pm.csv").string(), "--alpha", "0.1"});
    CHECK(ci.code == 0);
    CHECK(ci.out.find("\np 0.3") != std::string::npos);
    CHECK(lines(ci.out) == 2);

    put(dir / "weeks.csv", "arm_id,outcome\nctl,1\nctl,52\nbonus,26.5\n");
    auto in = call({"ingest", "--data", (dir / "weeks.csv").string(), "--transform", "duration:max-weeks=52"});
    CHECK(in.code == 0);
    CHECK(in.out == "arm_id,outcome\nctl,0\nctl,1\nbonus,0.5\n");
    auto to_file = call({"ingest", "--data", (dir / "weeks.csv").string(), "--transform", "duration", "--out",
                         (dir / "scaled.csv").string()});
    CHECK(to_file.code == 0);
    CHECK(slurp(dir / "scaled.csv") == in.out);
    CHECK(call({"eval", "--functional", "mean", "--data", (dir / "scaled.csv").string()}).out == "ctl 0.5\nbonus 0.5\n");

    // exit codes
    CHECK(call({"eval", "--functional", "nosuch", "--data", (dir / "pm.csv").string()}).code == 2);
    CHECK(call({"eval", "--functional", "mean", "--data", (dir / "missing.csv").string()}).code == 3);
    CHECK(call({"eval", "--functional", "mean", "--data", (dir / "weeks.csv").string()}).code == 3);
    put(dir / "zeros.csv", "arm_id,outcome\nz,0\nz,0\n");
    auto num = call({"eval", "--functional", "fgt:z0=0.5,delta=1,lambda=power:1,z-star=0.1", "--data",
                     (dir / "zeros.csv").string()});
    CHECK(num.code == 4);
    CHECK(num.err.rfind("error: ", 0) == 0);
    CHECK(call({"ingest", "--data", (dir / "weeks.csv").string(), "--arms", "ctl"}).code == 3);
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"eval", "--functional", "mean"}).code == 2);
}

TEST_CASE("config parsing is strict and round-trips") {
    ExperimentConfig c;
    c.functional = "atkinson-welfare:eps=0.5";
    c.policies = {"fucb:beta=2.01", "etc-es:delta=0.3"};
    c.instances = {{"beta:s1=1,s2=1", "beta:s1=1,s2=2"}, {"point:x=0.5", "uniform"}};
    c.n = 500;
    c.reps = 3;
    c.seed = 42;
    c.checkpoints = "list";
    c.checkpoint_list = {10, 100, 500};
    c.out = "somewhere";
    c.workers = 2;
    CHECK(parse_config(config_to_json(c)) == c);
    CHECK(config_to_json(parse_config(config_to_json(c))) == config_to_json(c));

    ExperimentConfig g;
    g.grid = "paper21";
    g.data.reset();
    g.policies = {"famoss"};
    CHECK(parse_config(config_to_json(g)) == g);
    ExperimentConfig d;
    d.data = DataSource{"x.csv", "trim-top:q=0.01", true, {"a", "b"}};
    d.grid_values.clear();
    CHECK(parse_config(config_to_json(d)) == d);
    ExperimentConfig v;
    v.grid_values = {0.5, 1, 2};
    v.ns = {100, 200};
    v.functionals = {"gini-welfare", "schutz-welfare"};
    CHECK(parse_config(config_to_json(v)) == v);

    CHECK_THROWS_AS(parse_config("{\"bogus\": 1}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"n\": -5}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"n\": \"ten\"}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"data\": {\"path\": \"a\", \"extra\": 1}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"data\": {\"flip\": true}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"checkpoints\": \"sometimes\"}"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    try {
        parse_config("{\"reps\": 1.5}");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("reps") != std::string::npos);
    }

    ExperimentConfig bad = c;
    bad.policies = {"fucb:beta=1"};
    CHECK_THROWS_AS(validate_config(bad, true), ConfigError);
    bad = c;
    bad.policies.clear();
    CHECK_THROWS_AS(validate_config(bad, true), ConfigError);
    bad = c;
    bad.grid = "paper11";
    CHECK_THROWS_AS(validate_config(bad, true), ConfigError);
    bad = c;
    bad.checkpoint_list = {10, 1000};
    CHECK_THROWS_AS(validate_config(bad, true), ConfigError);
    bad = ExperimentConfig{};
    bad.policies = {"fucb"};
    bad.data = DataSource{"/no/such/file.csv"};
    CHECK_THROWS_AS(validate_config(bad, true), ConfigError);
    validate_config(c, true);
}

TEST_CASE("arm specs") {
    CHECK(parse_arm("beta:s1=2,s2=3").describe() == ArmDistribution::beta(2, 3).describe());
    CHECK(parse_arm("point:x=0.25").mean() == 0.25);
    CHECK(parse_arm("discrete:values=[0;1],probs=[0.25;0.75]").mean() == 0.75);
    CHECK(parse_arm("uniform").mean() == doctest::Approx(0.5));
    CHECK_THROWS_AS(parse_arm("beta:s1=0"), ConfigError);
    CHECK_THROWS_AS(parse_arm("gauss"), ConfigError);
    CHECK_THROWS_AS(parse_arm("point"), ConfigError);
    CHECK_THROWS_AS(parse_arm("beta:s3=1"), ConfigError);
}

TEST_CASE("presets enumerate the full grids") {
    ExperimentConfig c;
    c.grid = "paper21";
    CHECK(build_instances(c, "mean").size() == 210);
    c.grid = "paper11";
    CHECK(build_instances(c, "mean").size() == 55);
}

TEST_CASE("simulate writes trajectories deterministically") {
    auto dir = scratch("simulate");
    put(dir / "cfg.json", "{\"functional\": \"gini-welfare\", \"policies\": [\"fucb\"], \"instances\": [[\"beta:s1=1,s2=1\", "
                          "\"beta:s1=1,s2=2\"]], \"n\": 100, \"reps\": 2, \"seed\": 7}");
    auto r = call({"simulate", "--config", (dir / "cfg.json").string(), "--out", (dir / "a").string()});
    CHECK(r.code == 0);
    const auto first = slurp(dir / "a" / "trajectory.csv");
    // checkpoints 1, 2, 4, ..., 64, 100
    CHECK(lines(first) == 1 + 2 * 8);
    CHECK(call({"simulate", "--config", (dir / "cfg.json").string(), "--out", (dir / "b").string(), "--workers", "3"}).code == 0);
    CHECK(slurp(dir / "b" / "trajectory.csv") == first);
    // flags override the config
    CHECK(call({"simulate", "--config", (dir / "cfg.json").string(), "--out", (dir / "c").string(), "--seed", "8",
                "--policy", "fucb", "--policy", "famoss"}).code == 0);
    const auto other = slurp(dir / "c" / "trajectory.csv");
    CHECK(lines(other) == 1 + 2 * 2 * 8);
    CHECK(other.substr(0, 200) != first.substr(0, 200));
    CHECK(call({"simulate", "--config", (dir / "cfg.json").string(), "--out", (dir / "d").string(), "--svg", "--logx"}).code == 0);
    const auto svg = slurp(dir / "d" / "maxregret.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("log scale") != std::string::npos);

    put(dir / "bad.json", "{\"policies\": [], \"instances\": [[\"uniform\", \"uniform\"]]}");
    auto bad = call({"simulate", "--config", (dir / "bad.json").string(), "--out", (dir / "e").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("policies") != std::string::npos);
    put(dir / "unknown.json", "{\"policy\": [\"fucb\"]}");
    CHECK(call({"simulate", "--config", (dir / "unknown.json").string()}).code == 2);
    CHECK(call({"simulate", "--config", (dir / "nope.json").string()}).code == 2);
}

TEST_CASE("FB_SEED is the seed fallback") {
    auto dir = scratch("seed");
    auto go = [&](const std::string& sub, std::vector<std::string> extra = {}) {
        std::vector<std::string> args{"simulate", "--instance", kPair, "--policy", "famoss", "--n", "64", "--reps", "2",
                                      "--out", (dir / sub).string()};
        args.insert(args.end(), extra.begin(), extra.end());
        REQUIRE(call(args).code == 0);
        return slurp(dir / sub / "trajectory.csv");
    };
    ::setenv("FB_SEED", "11", 1);
    const auto a = go("a");
    const auto b = go("b");
    const auto c = go("c", {"--seed", "11"});
    ::setenv("FB_SEED", "12", 1);
    const auto d = go("d");
    ::setenv("FB_SEED", "twelve", 1);
    CHECK(call({"simulate", "--instance", kPair, "--policy", "famoss", "--n", "8", "--out", (dir / "e").string()}).code == 2);
    ::unsetenv("FB_SEED");
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a != d);
}

TEST_CASE("sweep and table1") {
    auto dir = scratch("sweep");
    auto one = call({"sweep", "--instance", kPair, "--policy", "fucb", "--n", "300", "--reps", "3", "--seed", "5", "--out",
                     (dir / "one").string()});
    CHECK(one.code == 0);
    auto sim = call({"simulate", "--instance", kPair, "--policy", "fucb", "--n", "300", "--reps", "3", "--seed", "5",
                     "--out", (dir / "one").string()});
    CHECK(sim.code == 0);
    // single instance: the max is that instance's mean
    std::istringstream tr(slurp(dir / "one" / "trajectory.csv"));
    std::string line;
    std::getline(tr, line);
    double sum = 0.0;
    while (std::getline(tr, line)) {
        if (line.find(",300,") != std::string::npos) sum += std::stod(line.substr(line.rfind(',') + 1));
    }
    const auto mx = slurp(dir / "one" / "maxregret.csv");
    const auto last = mx.substr(mx.find("fucb:beta=2.01,300,"));
    CHECK(std::stod(last.substr(19)) == doctest::Approx(sum / 3).epsilon(1e-12));

    auto w1 = call({"sweep", "--preset", "paper11", "--policy", "famoss", "--policy", "fucb", "--n", "10000", "--reps", "4",
                    "--seed", "3", "--out", (dir / "w1").string(), "--workers", "1"});
    CHECK(w1.code == 0);
    auto w2 = call({"sweep", "--preset", "paper11", "--policy", "famoss", "--policy", "fucb", "--n", "10000", "--reps", "4",
                    "--seed", "3", "--out", (dir / "w2").string(), "--workers", "4"});
    CHECK(w2.code == 0);
    const auto s1 = slurp(dir / "w1" / "maxregret.csv");
    CHECK(s1 == slurp(dir / "w2" / "maxregret.csv"));
    auto terminal = [&](const std::string& policy) {
        const auto pos = s1.find(policy + ",10000,");
        REQUIRE(pos != std::string::npos);
        const auto rest = s1.substr(pos + policy.size() + 7);
        return std::stod(rest.substr(0, rest.find(',')));
    };
    CHECK(terminal("famoss:beta=0.2506265664160401") < terminal("fucb:beta=2.01"));
    CHECK(call({"sweep", "--preset", "paper11", "--n", "10", "--out", (dir / "x").string()}).code == 2);

    auto t = call({"table1", "--grid", "0.5", "1", "3", "--functional", "gini-welfare", "--n", "300", "--reps", "2",
                   "--out", (dir / "t").string()});
    CHECK(t.code == 0);
    const auto table = slurp(dir / "t" / "table.csv");
    CHECK(lines(table) == 2);
    CHECK(table.rfind("functional,n,ratio\ngini-welfare,300,", 0) == 0);
    CHECK(call({"table1", "--grid", "0.5", "1", "--functional", "gini-welfare", "--n", "50", "--reps", "1", "--out",
                (dir / "t2").string(), "--workers", "2"}).code == 0);
    CHECK(call({"table1", "--preset", "paper33", "--n", "50"}).code == 2);
}
