#include "funcbandit/simulation/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "funcbandit/core/format.hpp"
#include "funcbandit/core/numeric.hpp"
#include "funcbandit/errors.hpp"
#include "funcbandit/functionals/evaluate.hpp"

namespace fb::sim {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void check_checkpoints(const std::vector<std::size_t>& cps, std::size_t n) {
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] < 1 || cps[i] > n) throw ConfigError("checkpoint " + std::to_string(cps[i]) + " outside [1, n]");
        if (i > 0 && cps[i] <= cps[i - 1]) throw ConfigError("checkpoints must be strictly increasing");
    }
}

}  // namespace

double oracle_value(const func::FunctionalSpec& spec, const ArmDistribution& arm, std::size_t grid) {
    arm.require_within(spec.support);
    if (const auto* p = std::get_if<PointMassArm>(&arm.variant())) {
        return func::evaluate(spec, EmpiricalCdf(std::vector<double>{p->value}, spec.support));
    }
    if (const auto* r = std::get_if<ResamplerArm>(&arm.variant())) {
        if (r->pool->support() == spec.support) return func::evaluate(spec, *r->pool);
        return func::evaluate(spec, EmpiricalCdf(std::vector<double>(r->pool->samples()), spec.support));
    }
    return func::evaluate(spec, true_cdf_grid(arm, grid, spec.support));
}

Instance make_instance(std::vector<ArmDistribution> arms, func::FunctionalSpec functional, std::string label,
                       std::size_t grid) {
    if (arms.size() < 2) throw ConfigError("an instance needs at least 2 arms");
    Instance inst;
    if (label.empty()) {
        for (std::size_t i = 0; i < arms.size(); ++i) label += (i ? " x " : "") + arms[i].describe();
    }
    inst.label = std::move(label);
    inst.stream_id = fnv1a(inst.label);
    for (const auto& a : arms) inst.values.push_back(oracle_value(functional, a, grid));
    const double best = *std::max_element(inst.values.begin(), inst.values.end());
    for (double v : inst.values) inst.gaps.push_back(best - v);
    inst.arms = std::move(arms);
    inst.functional = std::move(functional);
    return inst;
}

std::vector<double> paper21_values() {
    return {0.1,  0.425, 0.75,   0.8,   0.85,   0.9,  0.95, 0.9625, 0.975, 0.9875, 1,
            1.0125, 1.025, 1.0375, 1.05, 1.10, 1.15, 1.20, 1.25,   3.125, 5};
}

std::vector<double> paper11_values() { return {0.1, 0.75, 0.85, 0.95, 0.975, 1, 1.025, 1.05, 1.15, 1.25, 5}; }

std::vector<Instance> beta_pair_grid(const std::vector<double>& values, const func::FunctionalSpec& functional,
                                     std::size_t grid) {
    std::vector<double> ps = values;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::map<double, double> oracle;
    for (double p : ps) oracle[p] = oracle_value(functional, ArmDistribution::beta(1, p), grid);
    std::vector<Instance> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            Instance inst;
            inst.label = "beta(1," + format_short(ps[i]) + ")xbeta(1," + format_short(ps[j]) + ")";
            inst.stream_id = fnv1a(inst.label);
            inst.arms = {ArmDistribution::beta(1, ps[i]), ArmDistribution::beta(1, ps[j])};
            inst.functional = functional;
            inst.values = {oracle[ps[i]], oracle[ps[j]]};
            const double best = std::max(inst.values[0], inst.values[1]);
            inst.gaps = {best - inst.values[0], best - inst.values[1]};
            out.push_back(std::move(inst));
        }
    }
    return out;
}

std::vector<std::size_t> default_checkpoints(std::size_t n, bool all) {
    if (n == 0) throw ConfigError("n must be at least 1");
    std::vector<std::size_t> cps;
    if (all) {
        for (std::size_t t = 1; t <= n; ++t) cps.push_back(t);
        return cps;
    }
    for (std::size_t t = 1; t < n; t *= 2) cps.push_back(t);
    cps.push_back(n);
    return cps;
}

RegretTrajectory run_episode_with(const Instance& inst, const policy::PolicyRule& rule, std::size_t n,
                                  const RandomSource& rng, const std::vector<std::size_t>& checkpoints,
                                  const OutcomeSource& outcomes, EpisodeOptions opts) {
    if (n == 0) throw ConfigError("n must be at least 1");
    check_checkpoints(checkpoints, n);
    const std::size_t k = inst.arms.size();
    auto state = policy::policy_init(policy::PolicySpec{rule, inst.functional, k, std::nullopt}, n, opts.verify);
    auto prng = rng.policy_stream();
    RegretTrajectory out;
    out.checkpoints = checkpoints;
    out.source = rng;
    out.regret.reserve(checkpoints.size());
    if (opts.record_arms) out.arms.reserve(n);
    CompensatedSum acc;
    std::size_t next = 0;
    for (std::size_t t = 1; t <= n; ++t) {
        const std::size_t a = policy::select_arm(state, prng);
        const double x = outcomes(a, state.pulls[a]);
        policy::update(state, a, x, prng);
        acc.add(inst.gaps[a]);
        if (opts.record_arms) out.arms.push_back(a);
        if (next < checkpoints.size() && checkpoints[next] == t) {
            out.regret.push_back(acc.value());
            ++next;
        }
    }
    out.pulls = state.pulls;
    return out;
}

RegretTrajectory run_episode(const Instance& inst, const policy::PolicyRule& rule, std::size_t n,
                             const RandomSource& rng, const std::vector<std::size_t>& checkpoints, EpisodeOptions opts) {
    std::vector<RandomStream> streams;
    streams.reserve(inst.arms.size());
    for (std::size_t i = 0; i < inst.arms.size(); ++i) streams.push_back(rng.arm_stream(i));
    return run_episode_with(
        inst, rule, n, rng, checkpoints,
        [&](std::size_t arm, std::size_t) { return inst.arms[arm].draw(streams[arm]); }, opts);
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t w = std::min(workers, count);
    for (std::size_t i = 0; i < w; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

namespace {

MeanTrajectory summarize(std::vector<RegretTrajectory> runs, const std::vector<std::size_t>& checkpoints) {
    MeanTrajectory m;
    m.checkpoints = checkpoints;
    const std::size_t c = checkpoints.size();
    const double r = static_cast<double>(runs.size());
    m.mean.assign(c, 0.0);
    m.se.assign(c, 0.0);
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (const auto& run : runs) s += run.regret[j];
        m.mean[j] = s / r;
        if (runs.size() > 1) {
            double ss = 0.0;
            for (const auto& run : runs) ss += (run.regret[j] - m.mean[j]) * (run.regret[j] - m.mean[j]);
            m.se[j] = std::sqrt(ss / (r - 1.0) / r);
        }
    }
    m.runs = std::move(runs);
    return m;
}

}  // namespace

MeanTrajectory expected_regret(const Instance& inst, const policy::PolicyRule& rule, std::size_t n, std::size_t reps,
                               std::uint64_t seed, const std::vector<std::size_t>& checkpoints, std::size_t workers) {
    if (reps == 0) throw ConfigError("reps must be at least 1");
    std::vector<RegretTrajectory> runs(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
        runs[r] = run_episode(inst, rule, n, RandomSource{seed, inst.stream_id, r}, checkpoints);
    });
    return summarize(std::move(runs), checkpoints);
}

SweepResult max_regret_sweep(const std::vector<Instance>& grid, const std::vector<policy::PolicyRule>& rules,
                             std::size_t n, std::size_t reps, std::uint64_t seed,
                             const std::vector<std::size_t>& checkpoints, std::size_t workers) {
    if (grid.empty()) throw ConfigError("empty instance grid");
    if (rules.empty()) throw ConfigError("empty policy list");
    if (reps == 0) throw ConfigError("reps must be at least 1");
    check_checkpoints(checkpoints, n);
    const std::size_t ni = grid.size();
    std::vector<RegretTrajectory> runs(rules.size() * ni * reps);
    parallel_for(runs.size(), workers, [&](std::size_t task) {
        const std::size_t r = task % reps;
        const std::size_t i = (task / reps) % ni;
        const std::size_t p = task / (reps * ni);
        runs[task] = run_episode(grid[i], rules[p], n, RandomSource{seed, grid[i].stream_id, r}, checkpoints);
    });
    SweepResult out;
    out.checkpoints = checkpoints;
    for (std::size_t p = 0; p < rules.size(); ++p) {
        PolicySweep ps;
        ps.policy = policy::encode(rules[p]);
        for (std::size_t i = 0; i < ni; ++i) {
            const auto first = runs.begin() + static_cast<long>((p * ni + i) * reps);
            ps.per_instance.push_back(summarize(std::vector<RegretTrajectory>(std::make_move_iterator(first),
                                                                              std::make_move_iterator(first + static_cast<long>(reps))),
                                                checkpoints));
        }
        ps.max_regret.assign(checkpoints.size(), -std::numeric_limits<double>::infinity());
        ps.argmax.assign(checkpoints.size(), 0);
        for (std::size_t j = 0; j < checkpoints.size(); ++j) {
            for (std::size_t i = 0; i < ni; ++i) {
                if (ps.per_instance[i].mean[j] > ps.max_regret[j]) {
                    ps.max_regret[j] = ps.per_instance[i].mean[j];
                    ps.argmax[j] = i;
                }
            }
        }
        out.policies.push_back(std::move(ps));
    }
    return out;
}

RelativeRegretTable relative_regret_table(const std::vector<std::size_t>& ns, const std::vector<double>& values,
                                          const std::vector<func::FunctionalSpec>& functionals, std::size_t reps,
                                          std::uint64_t seed, std::size_t workers, const policy::PolicyRule& etc,
                                          const policy::PolicyRule& fucb) {
    if (ns.empty()) throw ConfigError("no horizons given");
    std::vector<std::size_t> cps = ns;
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    RelativeRegretTable table;
    table.ns = ns;
    for (const auto& f : functionals) {
        const auto grid = beta_pair_grid(values, f);
        const auto anytime = max_regret_sweep(grid, {fucb}, cps.back(), reps, seed, cps, workers);
        TableRow row;
        row.functional = func::encode(f);
        for (std::size_t n : ns) {
            const auto j = static_cast<std::size_t>(std::lower_bound(cps.begin(), cps.end(), n) - cps.begin());
            const double base = anytime.policies[0].max_regret[j];
            const auto e = max_regret_sweep(grid, {etc}, n, reps, seed, {n}, workers);
            const double top = e.policies[0].max_regret[0];
            row.etc_max.push_back(top);
            row.fucb_max.push_back(base);
            row.ratios.push_back(base == 0.0 ? std::numeric_limits<double>::quiet_NaN() : top / base);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace fb::sim
