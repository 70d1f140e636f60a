#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "funcbandit/core/distribution.hpp"
#include "funcbandit/core/empirical_cdf.hpp"
#include "funcbandit/functionals/spec.hpp"

namespace fb::func {

// Plug-in value T(F). Throws ConfigError if the supports differ and
// NumericError if the value is undefined (nonpositive poverty line, log of
// a nonpositive observation).
double evaluate(const FunctionalSpec& spec, const EmpiricalCdf& f);

// Certified constant C with |T(F) - T(G)| <= C ||F - G||_inf on the
// variant's domain.
double lipschitz_constant(const FunctionalSpec& spec);

// C_z of a poverty line inside a composite measure (0 for a fixed line).
double poverty_line_constant(const PovertyLineSpec& line, const SupportInterval& support);
// z(F).
double poverty_line_value(const PovertyLineSpec& line, const EmpiricalCdf& f);
// Lower bound z_* used in the Sen-Kakwani and FGT constants.
double poverty_line_floor(const PovertyLineSpec& line, std::optional<double> z_star);

struct DomainCondition {
    enum class Status { Satisfied, Violated, Assumed };
    std::string description;
    Status status;
};

struct DomainReport {
    bool pass = true;  // no condition violated
    std::vector<DomainCondition> conditions;
};

// Membership of F in the variant's domain. Conditions that cannot be
// decided from the input (density bounds of a finite sample) come back
// as Assumed.
DomainReport domain_check(const FunctionalSpec& spec, const EmpiricalCdf& f);
DomainReport domain_check(const FunctionalSpec& spec, const ArmDistribution& dist);

std::string to_string(DomainCondition::Status status);

// k-fold plug-in integral of the kernel over [c, d] (default the whole
// support) against F: the with-replacement average over all k-tuples,
// with tuples leaving [c, d] contributing zero.
double u_functional(const Kernel& kernel, const EmpiricalCdf& f, std::optional<std::pair<double, double>> bounds = {});

struct LorenzPoint {
    double q = 0.0;               // integral of the quantile function over [0, u]
    std::optional<double> l;      // q / mean, absent when the mean is not positive
};
LorenzPoint lorenz(const EmpiricalCdf& f, double u);

}  // namespace fb::func
