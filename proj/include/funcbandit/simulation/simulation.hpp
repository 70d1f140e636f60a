#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "funcbandit/core/distribution.hpp"
#include "funcbandit/core/random.hpp"
#include "funcbandit/functionals/spec.hpp"
#include "funcbandit/policies/policy.hpp"

namespace fb::sim {

inline constexpr std::size_t kOracleGrid = 100000;

struct Instance {
    std::string label;
    std::vector<ArmDistribution> arms;
    func::FunctionalSpec functional;
    std::vector<double> values;  // T(F^i)
    std::vector<double> gaps;    // max_k T(F^k) - T(F^i)
    std::uint64_t stream_id = 0;  // instance coordinate of the random streams
};

// T(F) for one arm: exact for point masses and resampling pools, otherwise
// evaluated on true_cdf_grid(arm, grid) (error at most C / grid).
double oracle_value(const func::FunctionalSpec& spec, const ArmDistribution& arm, std::size_t grid = kOracleGrid);

// Label defaults to the arm descriptions joined by " x ". stream_id is a
// hash of the label, so results do not depend on the instance's position.
Instance make_instance(std::vector<ArmDistribution> arms, func::FunctionalSpec functional, std::string label = "",
                       std::size_t grid = kOracleGrid);

// Beta(1, p1) x Beta(1, p2) for p1 < p2 in the grid values.
std::vector<double> paper21_values();
std::vector<double> paper11_values();
std::vector<Instance> beta_pair_grid(const std::vector<double>& values, const func::FunctionalSpec& functional,
                                     std::size_t grid = kOracleGrid);

// {1, 2, 4, ...} with n appended; every round when `all` is set.
std::vector<std::size_t> default_checkpoints(std::size_t n, bool all = false);

struct RegretTrajectory {
    std::vector<std::size_t> checkpoints;
    std::vector<double> regret;
    std::vector<std::size_t> pulls;  // terminal S_i(n)
    std::vector<std::size_t> arms;   // assignment sequence, kept only on request
    RandomSource source;
};

struct EpisodeOptions {
    bool verify = false;
    bool record_arms = false;
};

// Outcome of the j-th pull (0-based) of an arm.
using OutcomeSource = std::function<double(std::size_t arm, std::size_t pull)>;

RegretTrajectory run_episode(const Instance& inst, const policy::PolicyRule& rule, std::size_t n,
                             const RandomSource& rng, const std::vector<std::size_t>& checkpoints,
                             EpisodeOptions opts = {});
// Same protocol with outcomes supplied by the caller.
RegretTrajectory run_episode_with(const Instance& inst, const policy::PolicyRule& rule, std::size_t n,
                                  const RandomSource& rng, const std::vector<std::size_t>& checkpoints,
                                  const OutcomeSource& outcomes, EpisodeOptions opts = {});

struct MeanTrajectory {
    std::vector<std::size_t> checkpoints;
    std::vector<double> mean;
    std::vector<double> se;
    std::vector<RegretTrajectory> runs;  // in replication order
};

// Runs count tasks on `workers` threads; fn(i) must only write slot i of
// its own output. The lowest-index exception is rethrown.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

MeanTrajectory expected_regret(const Instance& inst, const policy::PolicyRule& rule, std::size_t n,
                               std::size_t reps, std::uint64_t seed, const std::vector<std::size_t>& checkpoints,
                               std::size_t workers = 1);

struct PolicySweep {
    std::string policy;
    std::vector<double> max_regret;         // per checkpoint
    std::vector<std::size_t> argmax;        // lowest instance index on ties
    std::vector<MeanTrajectory> per_instance;
};

struct SweepResult {
    std::vector<std::size_t> checkpoints;
    std::vector<PolicySweep> policies;
};

SweepResult max_regret_sweep(const std::vector<Instance>& grid, const std::vector<policy::PolicyRule>& rules,
                             std::size_t n, std::size_t reps, std::uint64_t seed,
                             const std::vector<std::size_t>& checkpoints, std::size_t workers = 1);

struct TableRow {
    std::string functional;
    std::vector<double> ratios;  // NaN when the F-UCB max regret is 0
    std::vector<double> etc_max;
    std::vector<double> fucb_max;
};

struct RelativeRegretTable {
    std::vector<std::size_t> ns;
    std::vector<TableRow> rows;
};

// max regret of ETCHorizon (run anew per n) over that of F-UCB (one anytime
// run to max(ns)) on the Beta pair grid built from `values`.
RelativeRegretTable relative_regret_table(const std::vector<std::size_t>& ns, const std::vector<double>& values,
                                          const std::vector<func::FunctionalSpec>& functionals, std::size_t reps,
                                          std::uint64_t seed, std::size_t workers = 1,
                                          const policy::PolicyRule& etc = policy::ETCHorizon{policy::Exploration::Cyclic},
                                          const policy::PolicyRule& fucb = policy::FUCB{});

struct Transform {
    enum class Kind { None, UnitRescale, TrimTop, NormalPercentile, Duration };
    Kind kind = Kind::None;
    double q = 0.01;          // TrimTop
    double loc = 0.0;         // NormalPercentile
    double scale = 1.0;
    double max_weeks = 52.0;  // Duration
};

// "none", "unit-rescale", "trim-top:q=0.01", "normal-percentile:loc=100,scale=15", "duration:max-weeks=52".
Transform parse_transform(const std::string& text);
std::string encode(const Transform& t);

struct EmpiricalArm {
    std::string id;
    ArmDistribution dist;
    std::size_t observations;
};

// Reads `arm_id,outcome` rows, transforms into [0, 1] (then x -> 1 - x when
// flip is set) and returns one resampler per arm, in declared order or order
// of first appearance.
std::vector<EmpiricalArm> ingest_empirical(std::istream& in, const Transform& transform, bool flip,
                                           const std::vector<std::string>& declared = {});
std::vector<EmpiricalArm> ingest_empirical(const std::string& path, const Transform& transform, bool flip,
                                           const std::vector<std::string>& declared = {});

// CSV writers, floats with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const std::vector<std::string>& policies,
                          const std::vector<std::vector<MeanTrajectory>>& runs);
void write_maxregret_csv(std::ostream& out, const SweepResult& sweep);
void write_table_csv(std::ostream& out, const RelativeRegretTable& table);

}  // namespace fb::sim
