#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "funcbandit/core/random.hpp"
#include "funcbandit/functionals/incremental.hpp"
#include "funcbandit/functionals/spec.hpp"

namespace fb::policy {

enum class Exploration { UniformRandom, Cyclic };

struct FUCB {
    double beta = 2.01;
    bool operator==(const FUCB&) const = default;
};

struct FaMOSS {
    double beta = 1.0 / 3.99;
    bool operator==(const FaMOSS&) const = default;
};

// Explore for min(K ceil(n^{2/3}), n) rounds, then commit to the empirical best.
struct ETCHorizon {
    Exploration explore = Exploration::UniformRandom;
    bool operator==(const ETCHorizon&) const = default;
};

// Explore for K ceil(16 (K-1)^2 C^2 / (e delta^2)) rounds, commit to the empirical best.
struct ETCES {
    double delta = 0.1;
    Exploration explore = Exploration::Cyclic;
    bool operator==(const ETCES&) const = default;
};

// Two arms only: explore, then test equality and commit to the winner or a coin flip.
struct ETCT {
    double delta = 0.1;
    double alpha = 0.1;
    double eta = 0.1;
    Exploration explore = Exploration::Cyclic;
    bool operator==(const ETCT&) const = default;
};

// Index policy T(F_i) + rho(C, beta, t, S_i, K) with rho from a fixed registry.
struct GenericUCB {
    std::string rho = "fucb";
    double beta = 2.01;
    bool operator==(const GenericUCB&) const = default;
};

using PolicyRule = std::variant<FUCB, FaMOSS, ETCHorizon, ETCES, ETCT, GenericUCB>;

struct PolicySpec {
    PolicyRule rule;
    func::FunctionalSpec functional;
    std::size_t arms = 2;
    // Replaces lipschitz_constant(functional) when set.
    std::optional<double> lipschitz;
};

// Throws ConfigError on invalid parameters (beta ranges, ETC-T with K != 2).
void validate(const PolicySpec& spec);
double policy_constant(const PolicySpec& spec);

// "fucb:beta=2.01", "famoss", "etc-es:delta=0.3", "etc-t:delta=0.3,alpha=0.1,eta=0.1",
// "etc-horizon:explore=cyclic", "generic:rho=famoss,beta=0.3". "fucb:beta=optimal"
// selects beta = 2 + sqrt(2).
std::string encode(const PolicyRule& rule);
PolicyRule decode(const std::string& text);
std::string rule_name(const PolicyRule& rule);

// True for policies whose assignments never depend on the horizon.
bool is_anytime(const PolicyRule& rule);

// Exploration bonus functions. t is the current round (1-based), s the
// number of earlier pulls of the arm.
double fucb_bonus(double c, double beta, std::size_t t, std::size_t s);
double famoss_bonus(double c, double beta, std::size_t t, std::size_t s, std::size_t arms);

struct RhoEntry {
    std::string name;
    double min_beta;  // exclusive
    double (*bonus)(double c, double beta, std::size_t t, std::size_t s, std::size_t arms);
};
const std::vector<RhoEntry>& rho_registry();
const RhoEntry& find_rho(const std::string& name);

struct PolicyState {
    PolicySpec spec;
    double c = 0.0;
    std::size_t t = 0;  // completed rounds
    std::optional<std::size_t> horizon;
    std::vector<std::size_t> pulls;
    std::vector<func::IncrementalFunctional> estimates;
    std::vector<double> values;  // cached T(F_i); NaN until the arm is pulled
    // ETC variants
    std::size_t n1 = 0;
    std::optional<std::size_t> committed;
    std::optional<std::size_t> last_selected;
};

// horizon is required by ETCHorizon and otherwise only recorded. With
// verify on, every incremental value is checked against a full recomputation.
PolicyState policy_init(const PolicySpec& spec, std::optional<std::size_t> horizon = std::nullopt,
                        bool verify = false);

// 0-based arm for round t + 1. rng is the policy randomization stream.
std::size_t select_arm(PolicyState& state, RandomStream& rng);

// Records the outcome of the last selected arm. At t = n1 the ETC
// commitment is made (consuming rng for an ETC-T coin flip).
void update(PolicyState& state, std::size_t arm, double outcome, RandomStream& rng);

// Commitment rule applied at t = n1.
std::size_t etc_commit(PolicyState& state, RandomStream& rng);

// Smallest index attaining the maximum; NaN entries are skipped.
std::size_t min_argmax(const std::vector<double>& v);

}  // namespace fb::policy
