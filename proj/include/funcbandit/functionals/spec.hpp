#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "funcbandit/core/support.hpp"

// Catalog of distributional functionals T. Each variant carries its own
// parameters; the support interval lives on FunctionalSpec.
namespace fb::func {

struct FunctionalSpec;

// Single-argument kernels φ(x) and the two pairwise kernels used by the
// plug-in integral m_φ.
struct Kernel {
    enum class Name { Identity, Power, Log, AbsDiff, HalfSquaredDiff };
    Name name = Name::Identity;
    double p = 1.0;  // exponent for Power

    [[nodiscard]] int degree() const { return name == Name::AbsDiff || name == Name::HalfSquaredDiff ? 2 : 1; }
    friend bool operator==(const Kernel&, const Kernel&) = default;
};

// Poverty line z(F) = z0 + delta (m(F) - z0), m the mean or the median.
struct PovertyLineSpec {
    enum class Center { Mean, Median };
    Center center = Center::Mean;
    double z0 = 0.5;
    double delta = 0.0;
    double r = 0.0;  // density floor; required for a median line with delta > 0
    friend bool operator==(const PovertyLineSpec&, const PovertyLineSpec&) = default;
};

// Lambda(x) = x^p on [0, 1], p >= 1.
struct LambdaSpec {
    double p = 1.0;
    friend bool operator==(const LambdaSpec&, const LambdaSpec&) = default;
};

// Finite signed measure W on [0, 1] as atoms (u_j, w_j).
struct WeightAtom {
    double u = 0.0;
    double w = 0.0;
    friend bool operator==(const WeightAtom&, const WeightAtom&) = default;
};

struct Mean {
    friend bool operator==(const Mean&, const Mean&) = default;
};
struct PMean {
    double p = 1.0;
    friend bool operator==(const PMean&, const PMean&) = default;
};
struct Variance {
    friend bool operator==(const Variance&, const Variance&) = default;
};
struct GiniMeanDiff {
    friend bool operator==(const GiniMeanDiff&, const GiniMeanDiff&) = default;
};
struct GiniAbs {
    friend bool operator==(const GiniAbs&, const GiniAbs&) = default;
};
struct GiniRel {
    double delta = 0.0;
    friend bool operator==(const GiniRel&, const GiniRel&) = default;
};
struct SchutzAbs {
    friend bool operator==(const SchutzAbs&, const SchutzAbs&) = default;
};
struct SchutzRel {
    double s = 1.0;
    double delta = 0.0;
    friend bool operator==(const SchutzRel&, const SchutzRel&) = default;
};
// Generalized entropy index; delta (mean floor) enters the constant only
// for c in (0, 1).
struct EntropyGE {
    double c = 2.0;
    std::optional<double> delta;
    friend bool operator==(const EntropyGE&, const EntropyGE&) = default;
};
struct Atkinson {
    double eps = 0.5;
    std::optional<double> delta;
    friend bool operator==(const Atkinson&, const Atkinson&) = default;
};
struct AtkinsonWelfare {
    double eps = 0.5;
    friend bool operator==(const AtkinsonWelfare&, const AtkinsonWelfare&) = default;
};
struct Kolm {
    double kappa = 1.0;
    friend bool operator==(const Kolm&, const Kolm&) = default;
};
struct GiniWelfare {
    friend bool operator==(const GiniWelfare&, const GiniWelfare&) = default;
};
struct SchutzWelfare {
    friend bool operator==(const SchutzWelfare&, const SchutzWelfare&) = default;
};
// W = mean * (1 - I_rel), gamma bounds |1 - I_rel|.
struct WelfareFromRel {
    std::shared_ptr<const FunctionalSpec> inner;
    double gamma = 1.0;
    friend bool operator==(const WelfareFromRel& x, const WelfareFromRel& y);
};
// W = mean - I_abs.
struct WelfareFromAbs {
    std::shared_ptr<const FunctionalSpec> inner;
    friend bool operator==(const WelfareFromAbs& x, const WelfareFromAbs& y);
};
struct Quantile {
    double alpha = 0.5;
    double r = 1.0;
    friend bool operator==(const Quantile&, const Quantile&) = default;
};
struct LorenzQ {
    double u = 0.5;
    double r = 1.0;
    friend bool operator==(const LorenzQ&, const LorenzQ&) = default;
};
struct LorenzOrdinate {
    double u = 0.5;
    double r = 1.0;
    friend bool operator==(const LorenzOrdinate&, const LorenzOrdinate&) = default;
};
struct LinearInequality {
    std::vector<WeightAtom> atoms;
    double r = 1.0;
    friend bool operator==(const LinearInequality&, const LinearInequality&) = default;
};
struct AbsLinearInequality {
    std::vector<WeightAtom> atoms;
    double r = 1.0;
    friend bool operator==(const AbsLinearInequality&, const AbsLinearInequality&) = default;
};
struct TrimmedU {
    enum class Side { Lower, Upper };
    Kernel kernel;
    double alpha = 0.5;
    Side side = Side::Lower;
    double r = 1.0;
    double kappa = 1.0;                // density ceiling
    std::optional<double> u_bound;     // sup |φ| on [a, b]; derived from the kernel when absent
    std::optional<double> c_kernel;    // total variation of φ on [a, b]; derived when absent
    friend bool operator==(const TrimmedU&, const TrimmedU&) = default;
};
struct PovertyLine {
    PovertyLineSpec line;
    friend bool operator==(const PovertyLine&, const PovertyLine&) = default;
};
struct Headcount {
    PovertyLineSpec line;
    double s = 1.0;
    friend bool operator==(const Headcount&, const Headcount&) = default;
};
struct SenKakwani {
    PovertyLineSpec line;
    double kappa = 1.0;
    double s = 1.0;
    std::optional<double> z_star;  // lower bound on z(F); defaults to (1 - delta) z0
    friend bool operator==(const SenKakwani&, const SenKakwani&) = default;
};
struct FGT {
    PovertyLineSpec line;
    LambdaSpec lambda;
    std::optional<double> z_star;
    friend bool operator==(const FGT&, const FGT&) = default;
};

using FunctionalBody =
    std::variant<Mean, PMean, Variance, GiniMeanDiff, GiniAbs, GiniRel, SchutzAbs, SchutzRel, EntropyGE, Atkinson,
                 AtkinsonWelfare, Kolm, GiniWelfare, SchutzWelfare, WelfareFromRel, WelfareFromAbs, Quantile, LorenzQ,
                 LorenzOrdinate, LinearInequality, AbsLinearInequality, TrimmedU, PovertyLine, Headcount, SenKakwani,
                 FGT>;

struct FunctionalSpec {
    FunctionalBody body;
    SupportInterval support;

    friend bool operator==(const FunctionalSpec&, const FunctionalSpec&) = default;
};

// Checks every parameter constraint of the variant against the support;
// throws ConfigError naming the offending parameter.
void validate(const FunctionalSpec& spec);

// Builds and validates a spec.
FunctionalSpec make_spec(FunctionalBody body, SupportInterval support = {});

// Canonical text form, e.g. "gini-welfare", "atkinson-welfare:eps=0.5",
// "quantile:alpha=0.5,r=1", "fgt:z0=0.5,delta=0,lambda=power:1".
//
//   spec    := name [":" param ("," param)*]
//   param   := key "=" value
//   value   := token | "[" text "]"       (brackets nest; used for inner specs and atom lists)
//   support := keys "a" and "b" on any spec, default [0, 1]
//
// Poverty lines are flattened into the owning spec with keys center
// (mean|median), z0, delta and line-r. Weight atoms are written
// atoms=[u:w;u:w]. Kernels are identity, log, power:p, abs-diff,
// half-squared-diff. decode(encode(s)) == s for every valid spec.
std::string encode(const FunctionalSpec& spec);
FunctionalSpec decode(const std::string& text);

// Short human-readable name of the variant ("gini-welfare", ...).
std::string variant_name(const FunctionalSpec& spec);

}  // namespace fb::func
