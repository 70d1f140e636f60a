#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "common/catalog.hpp"
#include "funcbandit/cli/cli.hpp"
#include "funcbandit/core/distribution.hpp"
#include "funcbandit/functionals/evaluate.hpp"
#include "funcbandit/inference/inference.hpp"
#include "funcbandit/simulation/simulation.hpp"

using namespace fb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double slope(const std::vector<std::size_t>& ns, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    const double k = static_cast<double>(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        mx += std::log(static_cast<double>(ns[i])) / k;
        my += std::log(ys[i]) / k;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double dx = std::log(static_cast<double>(ns[i])) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

Outcome lipschitz_suite() {
    auto rng = RandomSource{20240601, 0, 0}.stream(0);
    std::size_t violations = 0, checked = 0;
    std::string worst;
    for (const auto& text : fbtest::unrestricted_specs()) {
        const auto spec = func::decode(text);
        const double c = func::lipschitz_constant(spec);
        for (int trial = 0; trial < 10000; ++trial) {
            auto xs = fbtest::random_sample(rng, 1 + rng.index(50), 0.0, 1.0);
            auto ys = trial % 2 == 0 ? fbtest::perturb(rng, xs, 0.0, 1.0)
                                     : fbtest::random_sample(rng, 1 + rng.index(50), 0.0, 1.0);
            EmpiricalCdf f(std::move(xs), {}), g(std::move(ys), {});
            ++checked;
            if (std::fabs(func::evaluate(spec, f) - func::evaluate(spec, g)) > c * sup_distance(f, g) + 1e-10) {
                ++violations;
                worst = text;
            }
        }
    }
    std::string d = std::to_string(fbtest::unrestricted_specs().size()) + " functionals, " + std::to_string(checked) +
                    " pairs, " + std::to_string(violations) + " violations";
    if (violations) d += " (last: " + worst + ")";
    return {violations == 0, d};
}

Outcome v_statistic_oracle() {
    auto rng = RandomSource{20240602, 0, 0}.stream(0);
    const auto gmd = func::decode("gini-mean-diff");
    const auto var = func::decode("variance");
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 1 + rng.index(8);
        auto xs = fbtest::random_sample(rng, m, 0.0, 1.0);
        long double ba = 0, bv = 0;
        for (double x : xs) {
            for (double y : xs) {
                const long double d = static_cast<long double>(x) - y;
                ba += d < 0 ? -d : d;
                bv += 0.5L * d * d;
            }
        }
        const long double mm = static_cast<long double>(m) * m;
        const double a = static_cast<double>(ba / mm), v = static_cast<double>(bv / mm);
        EmpiricalCdf f(xs, {});
        const double ea = func::evaluate(gmd, f), ev = func::evaluate(var, f);
        if (a != 0) worst = std::max(worst, std::fabs(ea - a) / a);
        else worst = std::max(worst, std::fabs(ea));
        if (v != 0) worst = std::max(worst, std::fabs(ev - v) / v);
        else worst = std::max(worst, std::fabs(ev));
    }
    return {worst <= 1e-15, fmt("max relative error %.3g over 1000 samples", worst)};
}

Outcome dkwm_coverage() {
    const auto gw = func::decode("gini-welfare");
    const auto arm = ArmDistribution::beta(1, 3);
    const double truth = sim::oracle_value(gw, arm);
    const double c = func::lipschitz_constant(gw);
    const std::size_t reps = 5000, m = 200;
    const std::vector<double> eps{0.05, 0.1, 0.15};
    std::size_t covered = 0;
    std::vector<std::size_t> exceed(eps.size(), 0);
    for (std::size_t r = 0; r < reps; ++r) {
        EmpiricalCdf f(sample_arm(arm, RandomSource{20240603, 0, r}, m), {});
        covered += inference::dkwm_ci(gw, f, 0.1).covers(truth);
        const double v = func::evaluate(gw, f);
        for (std::size_t j = 0; j < eps.size(); ++j) exceed[j] += std::fabs(v - truth) > eps[j];
    }
    const double cov = static_cast<double>(covered) / reps;
    bool ok = cov >= 0.9;
    std::string d = fmt("coverage %.4f", cov);
    for (std::size_t j = 0; j < eps.size(); ++j) {
        const double p = inference::concentration_bound(c, m, eps[j]);
        const double sigma = std::sqrt(p * (1 - p) / reps);
        const double freq = static_cast<double>(exceed[j]) / reps;
        ok = ok && freq <= p + 3 * sigma;
        d += fmt("; eps %.2f exceed %.4f <= %.4f", eps[j], freq, p + 3 * sigma);
    }
    return {ok, d};
}

Outcome test_size_power() {
    const auto gw = func::decode("gini-welfare");
    const double c = func::lipschitz_constant(gw);
    const std::size_t n1 = inference::n1_for_power(c, 0.3, 0.1, 0.1);
    const auto null_arm = ArmDistribution::beta(1, 2);
    const auto better = ArmDistribution::beta(3, 1);
    const auto worse = ArmDistribution::beta(1, 1);
    const double gap = sim::oracle_value(gw, better) - sim::oracle_value(gw, worse);
    const std::size_t trials = 5000, half = n1 / 2;
    std::size_t null_rej = 0, alt_rej = 0;
    for (std::size_t r = 0; r < trials; ++r) {
        RandomSource src{20240604, 0, r};
        auto s1 = src.arm_stream(0);
        auto s2 = src.arm_stream(1);
        std::vector<double> x1(half), x2(half), y1(half), y2(half);
        for (auto& x : x1) x = null_arm.draw(s1);
        for (auto& x : x2) x = null_arm.draw(s2);
        for (auto& x : y1) x = better.draw(s1);
        for (auto& x : y2) x = worse.draw(s2);
        null_rej += inference::welfare_test(EmpiricalCdf(std::move(x1), {}), EmpiricalCdf(std::move(x2), {}), gw, 0.1, n1).reject;
        alt_rej += inference::welfare_test(EmpiricalCdf(std::move(y1), {}), EmpiricalCdf(std::move(y2), {}), gw, 0.1, n1).reject;
    }
    const double size = static_cast<double>(null_rej) / trials;
    const double power = static_cast<double>(alt_rej) / trials;
    const bool ok = n1 == 2624 && gap >= 0.3 && size <= 0.113 && power >= 0.88;
    return {ok, fmt("n1 %.0f, oracle gap %.4f, size %.4f <= 0.113, power %.4f >= 0.88", static_cast<double>(n1), gap,
                    size, power)};
}

Outcome uniform_bound() {
    const auto gw = func::decode("gini-welfare");
    const double c = func::lipschitz_constant(gw);
    const std::size_t n = 10000, k = 2;
    const auto grid = sim::beta_pair_grid({0.5, 1, 2, 4}, gw);
    const auto cps = sim::default_checkpoints(n);
    const auto sweep = sim::max_regret_sweep(grid, {policy::FUCB{2.0 + std::sqrt(2.0)}}, n, 50, 20240605, cps);
    double worst_ratio = 0.0;
    for (const auto& inst : sweep.policies[0].per_instance) {
        for (std::size_t j = 0; j < cps.size(); ++j) {
            const double t = static_cast<double>(cps[j]);
            const double bound = std::sqrt(11.0) * c * std::sqrt(static_cast<double>(k) * t * std::max(std::log(t), 1.0));
            worst_ratio = std::max(worst_ratio, inst.mean[j] / bound);
        }
    }
    return {grid.size() == 6 && worst_ratio <= 1.0,
            fmt("%.0f instances, max regret/bound %.4f, terminal max regret %.2f", static_cast<double>(grid.size()),
                worst_ratio, sweep.policies[0].max_regret.back())};
}

Outcome rate_checks() {
    const auto gw = func::decode("gini-welfare");
    const std::vector<sim::Instance> grid{
        sim::make_instance({ArmDistribution::beta(1, 1), ArmDistribution::beta(1, 1.05)}, gw),
        sim::make_instance({ArmDistribution::beta(1, 1), ArmDistribution::beta(1, 3)}, gw)};
    const std::vector<std::size_t> ns{1000, 10000, 100000};
    const std::size_t reps = 20;
    std::vector<double> etc;
    for (auto n : ns) etc.push_back(sim::max_regret_sweep(grid, {policy::ETCHorizon{}}, n, reps, 20240606, {n}).policies[0].max_regret[0]);
    const auto fam = sim::max_regret_sweep(grid, {policy::FaMOSS{}}, ns.back(), reps, 20240606, ns).policies[0].max_regret;
    const double se = slope(ns, etc), sf = slope(ns, fam);
    return {se >= 0.55 && se <= 0.80 && sf <= 0.65,
            fmt("etc-horizon slope %.3f in [0.55, 0.80], famoss slope %.3f <= 0.65", se, sf)};
}

Outcome table1_desk() {
    const std::vector<func::FunctionalSpec> fs{func::decode("gini-welfare"), func::decode("atkinson-welfare:eps=0.1")};
    const auto table = sim::relative_regret_table({1000}, sim::paper11_values(), fs, 20, 20240607);
    const double gini = table.rows[0].ratios[0], atk = table.rows[1].ratios[0];
    return {gini >= 1.5 && gini <= 2.5 && atk > gini,
            fmt("gini-welfare ratio %.3f in [1.5, 2.5] (reference 1.96), atkinson 0.1 ratio %.3f > gini (reference 3.46)", gini, atk)};
}

Outcome figure1_ordering() {
    const auto gw = func::decode("gini-welfare");
    const auto grid = sim::beta_pair_grid(sim::paper11_values(), gw);
    const std::size_t n = 20000;
    const auto s = sim::max_regret_sweep(grid, {policy::FaMOSS{}, policy::FUCB{}, policy::ETCES{0.15}}, n, 20, 20240608, {n});
    const double a = s.policies[0].max_regret[0], b = s.policies[1].max_regret[0], c = s.policies[2].max_regret[0];
    return {a < b && b < c, fmt("famoss %.1f < fucb %.1f < etc-es(0.15) %.1f", a, b, c)};
}

Outcome high_probability() {
    const auto gw = func::decode("gini-welfare");
    const auto top = ArmDistribution::beta(1, 1);
    const double target = sim::oracle_value(gw, top) - 0.1;
    // Beta(1, p) welfare decreases in p
    double lo = 1.0, hi = 10.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sim::oracle_value(gw, ArmDistribution::beta(1, mid)) > target ? lo : hi) = mid;
    }
    const auto inst = sim::make_instance({top, ArmDistribution::beta(1, 0.5 * (lo + hi))}, gw);
    const double gap = inst.gaps[1];
    const double c = func::lipschitz_constant(gw);
    const policy::FUCB rule{};
    const std::size_t n = 10000, reps = 2000;
    const auto runs = sim::expected_regret(inst, rule, n, reps, 20240609, {n}).runs;
    bool ok = std::fabs(gap - 0.1) < 1e-6;
    std::string d = fmt("oracle gap %.6f", gap);
    for (double x : {1.0, 2.0}) {
        const auto hp = inference::hpb_bound(inst.gaps, c, rule.beta, n, x);
        std::size_t over = 0;
        double worst = 0.0;
        for (const auto& r : runs) {
            over += r.regret.back() > hp.threshold;
            worst = std::max(worst, r.regret.back());
        }
        const double freq = static_cast<double>(over) / reps;
        ok = ok && freq <= hp.prob_bound;
        d += fmt("; x=%.0f P(R>%.1f) %.4f <= %.3g", x, hp.threshold, freq, hp.prob_bound);
        if (x == 1.0) d += fmt(" (max R %.1f)", worst);
    }
    return {ok, d};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism() {
    const auto root = fs::temp_directory_path() / ("fb_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    {
        std::ofstream d(root / "data.csv");
        d << "arm_id,outcome\n";
        auto rng = RandomSource{5, 0, 0}.stream(0);
        for (int i = 0; i < 60; ++i) d << (i % 3 == 0 ? "a" : i % 3 == 1 ? "b" : "c") << "," << rng.uniform() * 52 << "\n";
    }
    struct Job {
        std::string name;
        std::vector<std::string> args;
        std::string file;
    };
    const std::string pair = "beta:s1=1,s2=1;beta:s1=1,s2=2";
    const std::vector<Job> jobs{
        {"simulate", {"simulate", "--instance", pair, "--instance", "uniform;point:x=0.4", "--policy", "fucb", "--policy",
                      "famoss", "--policy", "etc-es:delta=0.3", "--n", "2000", "--reps", "6", "--seed", "9"}, "trajectory.csv"},
        {"simulate-data", {"simulate", "--data", (root / "data.csv").string(), "--transform", "duration:max-weeks=52",
                           "--policy", "etc-horizon", "--policy", "fucb", "--n", "500", "--reps", "5", "--seed", "9"},
         "trajectory.csv"},
        {"sweep", {"sweep", "--grid", "0.5", "1", "2", "3", "--functional", "schutz-welfare", "--policy", "fucb",
                   "--policy", "etc-horizon", "--n", "1000", "--reps", "5", "--seed", "9"}, "maxregret.csv"},
        {"table1", {"table1", "--grid", "0.5", "1", "2", "--n", "200", "--n", "400", "--reps", "4", "--seed", "9"}, "table.csv"},
        {"ingest", {"ingest", "--data", (root / "data.csv").string(), "--transform", "trim-top:q=0.1", "--flip"}, ""},
    };
    std::size_t compared = 0;
    for (const auto& job : jobs) {
        std::vector<std::string> outputs;
        for (const std::string workers : {"1", "1", "3"}) {
            const auto dir = root / (job.name + "_" + std::to_string(outputs.size()));
            auto args = job.args;
            if (job.file.empty()) {
                args.insert(args.end(), {"--out", (dir.string() + ".csv")});
            } else {
                args.insert(args.end(), {"--out", dir.string(), "--workers", workers});
            }
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            if (code != 0) return {false, job.name + " exited " + std::to_string(code) + ": " + err.str()};
            outputs.push_back(slurp(job.file.empty() ? fs::path(dir.string() + ".csv") : dir / job.file));
            if (outputs.back().empty()) return {false, job.name + " wrote nothing"};
        }
        if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) return {false, job.name + " output differs"};
        ++compared;
    }
    fs::remove_all(root);
    return {true, std::to_string(compared) + " commands byte-identical across reruns and worker counts"};
}

}  // namespace

int main() {
    report(1, "lipschitz suite", lipschitz_suite);
    report(2, "v-statistic oracle", v_statistic_oracle);
    report(3, "dkwm coverage and concentration", dkwm_coverage);
    report(4, "welfare test size and power", test_size_power);
    report(5, "f-ucb uniform regret bound", uniform_bound);
    report(6, "regret rates", rate_checks);
    report(7, "relative regret table", table1_desk);
    report(8, "max regret ordering", figure1_ordering);
    report(9, "high-probability bound", high_probability);
    report(10, "cli determinism", cli_determinism);
    std::printf("%d of 10 failed\n", failures);
    return failures == 0 ? 0 : 1;
}
