#include <cmath>
#include <type_traits>

#include "funcbandit/core/format.hpp"
#include "funcbandit/functionals/evaluate.hpp"

namespace fb::func {

namespace {

using Status = DomainCondition::Status;

// What we can learn about one cdf, from a sample or from a parametric law.
struct Probe {
    double mean;
    double min_value;
    double max_value;
    SupportInterval support;
    bool parametric;
    std::optional<ArmDistribution::DensityBounds> density;
    const EmpiricalCdf* ecdf = nullptr;
    const ArmDistribution* dist = nullptr;

    double median() const { return ecdf ? ecdf_quantile(*ecdf, 0.5) : dist->quantile(0.5); }
};

void add(DomainReport& rep, std::string desc, Status st) {
    if (st == Status::Violated) rep.pass = false;
    rep.conditions.push_back({std::move(desc), st});
}

Status from_bool(bool ok) { return ok ? Status::Satisfied : Status::Violated; }

void mean_floor(DomainReport& rep, const Probe& p, double delta) {
    add(rep, "mu(F) >= delta = " + format_short(delta), from_bool(p.mean >= delta));
}

void density_floor(DomainReport& rep, const Probe& p, double r, const std::string& label = "r") {
    const std::string desc = "density >= " + label + " = " + format_short(r) + " on (a, b)";
    if (!p.parametric) {
        add(rep, desc, Status::Assumed);
    } else {
        add(rep, desc, from_bool(p.density && p.density->lower >= r));
    }
}

void density_ceiling(DomainReport& rep, const Probe& p, double s, const std::string& label = "s") {
    const std::string desc = "density <= " + label + " = " + format_short(s) + " on (a, b)";
    if (!p.parametric) {
        add(rep, desc, Status::Assumed);
    } else {
        add(rep, desc, from_bool(p.density && p.density->upper <= s));
    }
}

void line_conditions(DomainReport& rep, const Probe& p, const PovertyLineSpec& line) {
    if (line.center == PovertyLineSpec::Center::Median && line.delta > 0.0) density_floor(rep, p, line.r, "line-r");
}

double line_value(const PovertyLineSpec& line, const Probe& p) {
    if (line.delta == 0.0) return line.z0;
    const double center = line.center == PovertyLineSpec::Center::Mean ? p.mean : p.median();
    return line.z0 + line.delta * (center - line.z0);
}

void check_body(const FunctionalSpec& spec, const Probe& p, DomainReport& rep, const std::string& prefix) {
    const SupportInterval& s = spec.support;
    auto positivity = [&] { add(rep, prefix + "a > 0", from_bool(s.a > 0.0)); };
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, GiniRel>) {
                mean_floor(rep, p, t.delta);
            } else if constexpr (std::is_same_v<T, SchutzRel>) {
                mean_floor(rep, p, t.delta);
                const std::string desc = "F continuous with right derivative <= s = " + format_short(t.s);
                if (!p.parametric) {
                    add(rep, desc, Status::Assumed);
                } else {
                    add(rep, desc, from_bool(p.density && p.density->upper <= t.s));
                }
            } else if constexpr (std::is_same_v<T, EntropyGE>) {
                if (t.delta) {
                    mean_floor(rep, p, *t.delta);
                } else {
                    positivity();
                }
            } else if constexpr (std::is_same_v<T, Atkinson>) {
                if (t.delta) {
                    mean_floor(rep, p, *t.delta);
                } else {
                    positivity();
                }
            } else if constexpr (std::is_same_v<T, WelfareFromRel> || std::is_same_v<T, WelfareFromAbs>) {
                check_body(*t.inner, p, rep, prefix + "inner: ");
            } else if constexpr (std::is_same_v<T, Quantile> || std::is_same_v<T, LorenzQ> ||
                                 std::is_same_v<T, AbsLinearInequality>) {
                density_floor(rep, p, t.r);
            } else if constexpr (std::is_same_v<T, LorenzOrdinate> || std::is_same_v<T, LinearInequality>) {
                positivity();
                density_floor(rep, p, t.r);
            } else if constexpr (std::is_same_v<T, TrimmedU>) {
                density_floor(rep, p, t.r);
                density_ceiling(rep, p, t.kappa, "kappa");
            } else if constexpr (std::is_same_v<T, PovertyLine>) {
                line_conditions(rep, p, t.line);
            } else if constexpr (std::is_same_v<T, Headcount>) {
                line_conditions(rep, p, t.line);
                density_ceiling(rep, p, t.s);
            } else if constexpr (std::is_same_v<T, SenKakwani> || std::is_same_v<T, FGT>) {
                line_conditions(rep, p, t.line);
                if constexpr (std::is_same_v<T, SenKakwani>) density_ceiling(rep, p, t.s);
                const double zs = poverty_line_floor(t.line, t.z_star);
                add(rep, "z(F) >= z* = " + format_short(zs), from_bool(line_value(t.line, p) >= zs));
            }
        },
        spec.body);
}

DomainReport run(const FunctionalSpec& spec, const Probe& p) {
    DomainReport rep;
    add(rep, "support " + to_string(p.support) + " equals " + to_string(spec.support), from_bool(p.support == spec.support));
    add(rep, "mass inside " + to_string(spec.support),
        from_bool(p.min_value >= spec.support.a && p.max_value <= spec.support.b));
    check_body(spec, p, rep, "");
    return rep;
}

}  // namespace

DomainReport domain_check(const FunctionalSpec& spec, const EmpiricalCdf& f) {
    Probe p{f.mean(), f.samples().front(), f.samples().back(), f.support(), false, std::nullopt, &f, nullptr};
    return run(spec, p);
}

DomainReport domain_check(const FunctionalSpec& spec, const ArmDistribution& dist) {
    Probe p{dist.mean(), dist.min_value(), dist.max_value(), spec.support, true, dist.density_bounds(spec.support),
            nullptr, &dist};
    return run(spec, p);
}

std::string to_string(DomainCondition::Status status) {
    switch (status) {
        case Status::Satisfied: return "satisfied";
        case Status::Violated: return "violated";
        case Status::Assumed: return "assumed";
    }
    return "?";
}

}  // namespace fb::func
