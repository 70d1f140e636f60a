#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "funcbandit/core/empirical_cdf.hpp"
#include "funcbandit/functionals/spec.hpp"

namespace fb::inference {

struct ConfidenceInterval {
    double center = 0.0;
    double half_width = 0.0;
    double level = 0.0;  // 1 - alpha

    [[nodiscard]] double lower() const { return center - half_width; }
    [[nodiscard]] double upper() const { return center + half_width; }
    [[nodiscard]] bool covers(double v) const { return lower() <= v && v <= upper(); }
};

// C * sqrt(log(2/alpha) / (2m)).
double dkwm_half_width(double c, std::size_t m, double alpha);

// T(F_m) +- dkwm_half_width with C = lipschitz_constant(spec).
ConfidenceInterval dkwm_ci(const func::FunctionalSpec& spec, const EmpiricalCdf& f, double alpha);

// 2 exp(-2 m eps^2 / C^2), capped at 1.
double concentration_bound(double c, std::size_t m, double eps);

struct TestResult {
    bool reject = false;
    double statistic = 0.0;
    double c_alpha = 0.0;
};

// sqrt(2 log(4/alpha) C^2 / floor(n1/2)).
double test_critical_value(double c, double alpha, std::size_t n1);

// Two-sample test of equal functional values; rejects iff
// |T(F1) - T(F2)| >= c_alpha.
TestResult welfare_test(const EmpiricalCdf& f1, const EmpiricalCdf& f2, const func::FunctionalSpec& spec,
                        double alpha, std::size_t n1);

// 2 ceil(8 log(4/min(alpha, eta)) C^2 / Delta^2).
std::size_t n1_for_power(double c, double gap, double alpha, double eta);

// K ceil(16 (K-1)^2 C^2 / (e delta^2)).
std::size_t n1_for_es_regret(double c, double delta, std::size_t arms);

struct BoundReport {
    std::string policy;
    double bound = 0.0;
    double constant = 0.0;  // multiplier of the rate term
    std::vector<std::pair<std::string, double>> breakdown;
    std::vector<std::pair<std::string, double>> inputs;
};

// c(beta, C) sqrt(K n max(log n, 1)), c = C sqrt(2 beta + (beta + 2)/(beta - 2)).
BoundReport fucb_regret_bound(double beta, double c, std::size_t arms, std::size_t n);

// C (4.83 + 6.66 d(beta) + sqrt(2 beta)) sqrt(pi) sqrt(K n).
BoundReport famoss_regret_bound(double beta, double c, std::size_t arms, std::size_t n);

// Principal branch of the inverse of w -> w e^w, y > 0. Halley iteration
// started at log(1 + y).
double lambert_w0(double y);

struct HighProbabilityBound {
    double threshold = 0.0;
    double prob_bound = 0.0;
};

// Regret threshold sum_{gap > 0} (2 C^2 beta log n / gap + gap) x and the
// bound on P(R_n > threshold).
HighProbabilityBound hpb_bound(const std::vector<double>& gaps, double c, double beta, std::size_t n, double x);

}  // namespace fb::inference
