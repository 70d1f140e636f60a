#include "funcbandit/functionals/spec.hpp"

#include <cmath>
#include <type_traits>

#include "funcbandit/core/format.hpp"
#include "funcbandit/core/spec_text.hpp"
#include "funcbandit/errors.hpp"
#include "kernels.hpp"

namespace fb::func {

bool operator==(const WelfareFromRel& x, const WelfareFromRel& y) {
    if (x.gamma != y.gamma) return false;
    if (!x.inner || !y.inner) return x.inner == y.inner;
    return *x.inner == *y.inner;
}

bool operator==(const WelfareFromAbs& x, const WelfareFromAbs& y) {
    if (!x.inner || !y.inner) return x.inner == y.inner;
    return *x.inner == *y.inner;
}

namespace {

template <class>
inline constexpr bool always_false = false;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

void require_finite(double x, const std::string& name) {
    require(std::isfinite(x), name + " must be finite");
}

void require_positive(double x, const std::string& name) {
    require(std::isfinite(x) && x > 0.0, name + " must be positive, got " + format_short(x));
}

void require_mean_floor(double delta, const SupportInterval& s, const std::string& who) {
    require(std::isfinite(delta) && delta > s.a && delta < s.b,
            who + ": delta must lie in (a, b) = " + to_string(s) + ", got " + format_short(delta));
}

void validate_line(const PovertyLineSpec& line, const std::string& who) {
    require_positive(line.z0, who + ": z0");
    require(line.delta >= 0.0 && line.delta <= 1.0, who + ": delta must lie in [0, 1], got " + format_short(line.delta));
    require(std::isfinite(line.r) && line.r >= 0.0, who + ": line-r must be nonnegative");
    if (line.center == PovertyLineSpec::Center::Median && line.delta > 0.0) {
        require(line.r > 0.0, who + ": a median poverty line with delta > 0 needs line-r > 0");
    }
}

void validate_atoms(const std::vector<WeightAtom>& atoms, const std::string& who) {
    require(!atoms.empty(), who + ": atoms must be nonempty");
    for (const auto& at : atoms) {
        require(at.u >= 0.0 && at.u <= 1.0, who + ": atom location must lie in [0, 1], got " + format_short(at.u));
        require_finite(at.w, who + ": atom weight");
    }
}

bool is_relative_inequality(const FunctionalBody& b) {
    return std::holds_alternative<GiniRel>(b) || std::holds_alternative<SchutzRel>(b) ||
           std::holds_alternative<EntropyGE>(b) || std::holds_alternative<Atkinson>(b) ||
           std::holds_alternative<LinearInequality>(b);
}

bool is_absolute_inequality(const FunctionalBody& b) {
    return std::holds_alternative<GiniAbs>(b) || std::holds_alternative<SchutzAbs>(b) ||
           std::holds_alternative<Kolm>(b) || std::holds_alternative<AbsLinearInequality>(b) ||
           std::holds_alternative<GiniMeanDiff>(b) || std::holds_alternative<Variance>(b);
}

}  // namespace

void validate(const FunctionalSpec& spec) {
    const SupportInterval& s = spec.support;
    require(std::isfinite(s.a) && std::isfinite(s.b) && s.a < s.b, "support must satisfy a < b");
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PMean>) {
                require_positive(f.p, "pmean: p");
                require(s.a == 0.0, "pmean requires a = 0, got " + to_string(s));
            } else if constexpr (std::is_same_v<T, GiniRel>) {
                require(s.a >= 0.0, "gini-rel requires a >= 0");
                require_mean_floor(f.delta, s, "gini-rel");
            } else if constexpr (std::is_same_v<T, SchutzRel>) {
                require(s.a >= 0.0, "schutz-rel requires a >= 0");
                require_positive(f.s, "schutz-rel: s");
                require_mean_floor(f.delta, s, "schutz-rel");
            } else if constexpr (std::is_same_v<T, EntropyGE>) {
                require_finite(f.c, "entropy: c");
                require(s.a >= 0.0, "entropy requires a >= 0");
                if (f.c > 0.0 && f.c < 1.0) {
                    require(f.delta.has_value(), "entropy with c in (0, 1) needs a mean floor delta");
                    require_mean_floor(*f.delta, s, "entropy");
                } else {
                    require(s.a > 0.0, "entropy with c outside (0, 1) requires a > 0, got " + to_string(s));
                    require(!f.delta.has_value(), "entropy: delta only applies for c in (0, 1)");
                }
            } else if constexpr (std::is_same_v<T, Atkinson>) {
                require_positive(f.eps, "atkinson: eps");
                require(f.eps != 1.0, "atkinson: eps = 1 is excluded");
                require(s.a >= 0.0, "atkinson requires a >= 0");
                if (f.eps < 1.0) {
                    require(f.delta.has_value(), "atkinson with eps in (0, 1) needs a mean floor delta");
                    require_mean_floor(*f.delta, s, "atkinson");
                } else {
                    require(s.a > 0.0, "atkinson with eps > 1 requires a > 0, got " + to_string(s));
                    require(!f.delta.has_value(), "atkinson: delta only applies for eps in (0, 1)");
                }
            } else if constexpr (std::is_same_v<T, AtkinsonWelfare>) {
                require(f.eps > 0.0 && f.eps < 1.0, "atkinson-welfare: eps must lie in (0, 1), got " + format_short(f.eps));
                require(s.a >= 0.0, "atkinson-welfare requires a >= 0");
            } else if constexpr (std::is_same_v<T, Kolm>) {
                require_positive(f.kappa, "kolm: kappa");
            } else if constexpr (std::is_same_v<T, WelfareFromRel>) {
                require(f.inner != nullptr, "welfare-rel: missing inner");
                require(is_relative_inequality(f.inner->body), "welfare-rel: inner must be a relative inequality measure");
                require(f.inner->support == s, "welfare-rel: inner support must match");
                require_positive(f.gamma, "welfare-rel: gamma");
                validate(*f.inner);
            } else if constexpr (std::is_same_v<T, WelfareFromAbs>) {
                require(f.inner != nullptr, "welfare-abs: missing inner");
                require(is_absolute_inequality(f.inner->body), "welfare-abs: inner must be an absolute inequality measure");
                require(f.inner->support == s, "welfare-abs: inner support must match");
                validate(*f.inner);
            } else if constexpr (std::is_same_v<T, Quantile>) {
                require(f.alpha > 0.0 && f.alpha <= 1.0, "quantile: alpha must lie in (0, 1], got " + format_short(f.alpha));
                require_positive(f.r, "quantile: r");
            } else if constexpr (std::is_same_v<T, LorenzQ>) {
                require(f.u >= 0.0 && f.u <= 1.0, "lorenz-q: u must lie in [0, 1]");
                require_positive(f.r, "lorenz-q: r");
            } else if constexpr (std::is_same_v<T, LorenzOrdinate>) {
                require(f.u >= 0.0 && f.u <= 1.0, "lorenz: u must lie in [0, 1]");
                require_positive(f.r, "lorenz: r");
                require(s.a > 0.0, "lorenz requires a > 0, got " + to_string(s));
            } else if constexpr (std::is_same_v<T, LinearInequality>) {
                validate_atoms(f.atoms, "linear-inequality");
                require_positive(f.r, "linear-inequality: r");
                require(s.a > 0.0, "linear-inequality requires a > 0, got " + to_string(s));
            } else if constexpr (std::is_same_v<T, AbsLinearInequality>) {
                validate_atoms(f.atoms, "abs-linear-inequality");
                require_positive(f.r, "abs-linear-inequality: r");
            } else if constexpr (std::is_same_v<T, TrimmedU>) {
                require(f.kernel.degree() == 1, "trimmed: kernel must take one argument (identity, power or log)");
                check_kernel_domain(f.kernel, s, "trimmed");
                require(f.alpha > 0.0 && f.alpha < 1.0, "trimmed: alpha must lie in (0, 1), got " + format_short(f.alpha));
                require_positive(f.r, "trimmed: r");
                require_positive(f.kappa, "trimmed: kappa");
                require(f.r <= f.kappa, "trimmed: density floor r exceeds ceiling kappa");
                const KernelBounds kb = kernel_bounds(f.kernel, s);
                if (f.u_bound) {
                    require(*f.u_bound >= kb.sup_abs, "trimmed: u-bound below sup |phi| = " + format_short(kb.sup_abs));
                }
                if (f.c_kernel) {
                    require(*f.c_kernel >= kb.total_variation,
                            "trimmed: c-kernel below the total variation " + format_short(kb.total_variation));
                }
            } else if constexpr (std::is_same_v<T, PovertyLine>) {
                validate_line(f.line, "poverty-line");
            } else if constexpr (std::is_same_v<T, Headcount>) {
                validate_line(f.line, "headcount");
                require_positive(f.s, "headcount: s");
            } else if constexpr (std::is_same_v<T, SenKakwani>) {
                validate_line(f.line, "sen-kakwani");
                require(s.a == 0.0, "sen-kakwani requires a = 0, got " + to_string(s));
                require(std::isfinite(f.kappa) && f.kappa >= 1.0, "sen-kakwani: kappa must be >= 1");
                require_positive(f.s, "sen-kakwani: s");
                if (f.z_star) {
                    require_positive(*f.z_star, "sen-kakwani: z-star");
                } else {
                    require(f.line.delta < 1.0, "sen-kakwani: delta = 1 needs an explicit z-star");
                }
            } else if constexpr (std::is_same_v<T, FGT>) {
                validate_line(f.line, "fgt");
                require(s.a == 0.0, "fgt requires a = 0, got " + to_string(s));
                require(std::isfinite(f.lambda.p) && f.lambda.p >= 1.0, "fgt: lambda exponent must be >= 1");
                if (f.z_star) {
                    require_positive(*f.z_star, "fgt: z-star");
                } else {
                    require(f.line.delta < 1.0, "fgt: delta = 1 needs an explicit z-star");
                }
            }
        },
        spec.body);
}

FunctionalSpec make_spec(FunctionalBody body, SupportInterval support) {
    FunctionalSpec spec{std::move(body), support};
    validate(spec);
    return spec;
}

// ---- text encoding ----

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string kernel_text(const Kernel& k) {
    switch (k.name) {
        case Kernel::Name::Identity: return "identity";
        case Kernel::Name::Log: return "log";
        case Kernel::Name::Power: return "power:" + format_short(k.p);
        case Kernel::Name::AbsDiff: return "abs-diff";
        case Kernel::Name::HalfSquaredDiff: return "half-squared-diff";
    }
    return "identity";
}

std::string atoms_text(const std::vector<WeightAtom>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += ';';
        out += format_short(atoms[i].u) + ":" + format_short(atoms[i].w);
    }
    return out;
}

void put_line(Params& p, const PovertyLineSpec& line) {
    if (line.center == PovertyLineSpec::Center::Median) p.emplace_back("center", "median");
    p.emplace_back("z0", format_short(line.z0));
    p.emplace_back("delta", format_short(line.delta));
    if (line.r != 0.0) p.emplace_back("line-r", format_short(line.r));
}

std::string encode_body(const FunctionalSpec& spec, bool with_support) {
    Params p;
    const std::string name = variant_name(spec);
    auto num = [&](const char* k, double v) { p.emplace_back(k, format_short(v)); };
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PMean>) {
                num("p", f.p);
            } else if constexpr (std::is_same_v<T, GiniRel>) {
                num("delta", f.delta);
            } else if constexpr (std::is_same_v<T, SchutzRel>) {
                num("s", f.s);
                num("delta", f.delta);
            } else if constexpr (std::is_same_v<T, EntropyGE>) {
                num("c", f.c);
                if (f.delta) num("delta", *f.delta);
            } else if constexpr (std::is_same_v<T, Atkinson>) {
                num("eps", f.eps);
                if (f.delta) num("delta", *f.delta);
            } else if constexpr (std::is_same_v<T, AtkinsonWelfare>) {
                num("eps", f.eps);
            } else if constexpr (std::is_same_v<T, Kolm>) {
                num("kappa", f.kappa);
            } else if constexpr (std::is_same_v<T, WelfareFromRel>) {
                p.emplace_back("inner", encode_body(*f.inner, false));
                num("gamma", f.gamma);
            } else if constexpr (std::is_same_v<T, WelfareFromAbs>) {
                p.emplace_back("inner", encode_body(*f.inner, false));
            } else if constexpr (std::is_same_v<T, Quantile>) {
                num("alpha", f.alpha);
                num("r", f.r);
            } else if constexpr (std::is_same_v<T, LorenzQ> || std::is_same_v<T, LorenzOrdinate>) {
                num("u", f.u);
                num("r", f.r);
            } else if constexpr (std::is_same_v<T, LinearInequality> || std::is_same_v<T, AbsLinearInequality>) {
                p.emplace_back("atoms", atoms_text(f.atoms));
                num("r", f.r);
            } else if constexpr (std::is_same_v<T, TrimmedU>) {
                p.emplace_back("kernel", kernel_text(f.kernel));
                num("alpha", f.alpha);
                p.emplace_back("side", f.side == TrimmedU::Side::Lower ? "lower" : "upper");
                num("r", f.r);
                num("kappa", f.kappa);
                if (f.u_bound) num("u-bound", *f.u_bound);
                if (f.c_kernel) num("c-kernel", *f.c_kernel);
            } else if constexpr (std::is_same_v<T, PovertyLine>) {
                put_line(p, f.line);
            } else if constexpr (std::is_same_v<T, Headcount>) {
                put_line(p, f.line);
                num("s", f.s);
            } else if constexpr (std::is_same_v<T, SenKakwani>) {
                put_line(p, f.line);
                num("kappa", f.kappa);
                num("s", f.s);
                if (f.z_star) num("z-star", *f.z_star);
            } else if constexpr (std::is_same_v<T, FGT>) {
                put_line(p, f.line);
                p.emplace_back("lambda", "power:" + format_short(f.lambda.p));
                if (f.z_star) num("z-star", *f.z_star);
            }
        },
        spec.body);
    if (with_support && spec.support != SupportInterval{}) {
        num("a", spec.support.a);
        num("b", spec.support.b);
    }
    return join_spec_text(name, p);
}

Kernel parse_kernel(const std::string& text) {
    if (text == "identity") return {Kernel::Name::Identity, 1.0};
    if (text == "log") return {Kernel::Name::Log, 1.0};
    if (text == "abs-diff") return {Kernel::Name::AbsDiff, 1.0};
    if (text == "half-squared-diff") return {Kernel::Name::HalfSquaredDiff, 1.0};
    if (text.rfind("power:", 0) == 0) return {Kernel::Name::Power, parse_double(text.substr(6), "kernel exponent")};
    throw ConfigError("unknown kernel '" + text + "' (expected identity, log, power:p, abs-diff, half-squared-diff)");
}

std::vector<WeightAtom> parse_atoms(const std::string& text) {
    std::vector<WeightAtom> out;
    for (const auto& item : split_top_level(text, ';')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError("atom must be u:w, got '" + item + "'");
        out.push_back({parse_double(item.substr(0, colon), "atom location"),
                       parse_double(item.substr(colon + 1), "atom weight")});
    }
    return out;
}

PovertyLineSpec take_line(ParamReader& rd) {
    PovertyLineSpec line;
    if (auto c = rd.take("center")) {
        if (*c == "mean") {
            line.center = PovertyLineSpec::Center::Mean;
        } else if (*c == "median") {
            line.center = PovertyLineSpec::Center::Median;
        } else {
            throw ConfigError("poverty line center must be mean or median, got '" + *c + "'");
        }
    }
    line.z0 = rd.take_double("z0", line.z0);
    line.delta = rd.take_double("delta", line.delta);
    line.r = rd.take_double("line-r", line.r);
    return line;
}

FunctionalSpec decode_with(const std::string& text, const SupportInterval& inherited, bool allow_support) {
    ParamReader rd(parse_spec_text(text, "functional"), "functional '" + text + "'");
    const std::string& name = rd.name();
    FunctionalBody body;
    if (name == "mean") {
        body = Mean{};
    } else if (name == "pmean") {
        body = PMean{rd.take_double("p", 1.0)};
    } else if (name == "variance") {
        body = Variance{};
    } else if (name == "gini-mean-diff") {
        body = GiniMeanDiff{};
    } else if (name == "gini-abs") {
        body = GiniAbs{};
    } else if (name == "gini-rel") {
        body = GiniRel{rd.take_double("delta", 0.0)};
    } else if (name == "schutz-abs") {
        body = SchutzAbs{};
    } else if (name == "schutz-rel") {
        SchutzRel f;
        f.s = rd.take_double("s", f.s);
        f.delta = rd.take_double("delta", f.delta);
        body = f;
    } else if (name == "entropy") {
        EntropyGE f;
        f.c = rd.take_double("c", f.c);
        f.delta = rd.take_double("delta");
        body = f;
    } else if (name == "atkinson") {
        Atkinson f;
        f.eps = rd.take_double("eps", f.eps);
        f.delta = rd.take_double("delta");
        body = f;
    } else if (name == "atkinson-welfare") {
        body = AtkinsonWelfare{rd.take_double("eps", 0.5)};
    } else if (name == "kolm") {
        body = Kolm{rd.take_double("kappa", 1.0)};
    } else if (name == "gini-welfare") {
        body = GiniWelfare{};
    } else if (name == "schutz-welfare") {
        body = SchutzWelfare{};
    } else if (name == "welfare-rel" || name == "welfare-abs") {
        // inner inherits the outer support, so a/b are read first
        SupportInterval s = inherited;
        auto a = rd.take_double("a");
        auto b = rd.take_double("b");
        if (a || b) s = SupportInterval(a.value_or(s.a), b.value_or(s.b));
        auto inner_text = rd.take("inner");
        if (!inner_text) throw ConfigError(name + ": missing inner");
        auto inner = std::make_shared<const FunctionalSpec>(decode_with(*inner_text, s, false));
        if (name == "welfare-rel") {
            body = WelfareFromRel{inner, rd.take_double("gamma", 1.0)};
        } else {
            body = WelfareFromAbs{inner};
        }
        rd.finish();
        return make_spec(std::move(body), s);
    } else if (name == "quantile") {
        Quantile f;
        f.alpha = rd.take_double("alpha", f.alpha);
        f.r = rd.take_double("r", f.r);
        body = f;
    } else if (name == "lorenz-q") {
        LorenzQ f;
        f.u = rd.take_double("u", f.u);
        f.r = rd.take_double("r", f.r);
        body = f;
    } else if (name == "lorenz") {
        LorenzOrdinate f;
        f.u = rd.take_double("u", f.u);
        f.r = rd.take_double("r", f.r);
        body = f;
    } else if (name == "linear-inequality" || name == "abs-linear-inequality") {
        auto atoms = rd.take("atoms");
        if (!atoms) throw ConfigError(name + ": missing atoms");
        const double r = rd.take_double("r", 1.0);
        if (name == "linear-inequality") {
            body = LinearInequality{parse_atoms(*atoms), r};
        } else {
            body = AbsLinearInequality{parse_atoms(*atoms), r};
        }
    } else if (name == "trimmed") {
        TrimmedU f;
        if (auto k = rd.take("kernel")) f.kernel = parse_kernel(*k);
        f.alpha = rd.take_double("alpha", f.alpha);
        if (auto side = rd.take("side")) {
            if (*side == "lower") {
                f.side = TrimmedU::Side::Lower;
            } else if (*side == "upper") {
                f.side = TrimmedU::Side::Upper;
            } else {
                throw ConfigError("trimmed: side must be lower or upper, got '" + *side + "'");
            }
        }
        f.r = rd.take_double("r", f.r);
        f.kappa = rd.take_double("kappa", f.kappa);
        f.u_bound = rd.take_double("u-bound");
        f.c_kernel = rd.take_double("c-kernel");
        body = f;
    } else if (name == "poverty-line") {
        body = PovertyLine{take_line(rd)};
    } else if (name == "headcount") {
        Headcount f;
        f.line = take_line(rd);
        f.s = rd.take_double("s", f.s);
        body = f;
    } else if (name == "sen-kakwani") {
        SenKakwani f;
        f.line = take_line(rd);
        f.kappa = rd.take_double("kappa", f.kappa);
        f.s = rd.take_double("s", f.s);
        f.z_star = rd.take_double("z-star");
        body = f;
    } else if (name == "fgt") {
        FGT f;
        f.line = take_line(rd);
        if (auto lam = rd.take("lambda")) {
            if (lam->rfind("power:", 0) != 0) throw ConfigError("fgt: lambda must be power:p, got '" + *lam + "'");
            f.lambda.p = parse_double(lam->substr(6), "fgt lambda exponent");
        }
        f.z_star = rd.take_double("z-star");
        body = f;
    } else {
        throw ConfigError("unknown functional '" + name + "'");
    }
    SupportInterval s = inherited;
    auto a = rd.take_double("a");
    auto b = rd.take_double("b");
    if (a || b) {
        SupportInterval given(a.value_or(s.a), b.value_or(s.b));
        if (!allow_support && given != inherited) throw ConfigError("inner functional support must match the outer one");
        s = given;
    }
    rd.finish();
    return make_spec(std::move(body), s);
}

}  // namespace

std::string encode(const FunctionalSpec& spec) { return encode_body(spec, true); }

FunctionalSpec decode(const std::string& text) { return decode_with(text, SupportInterval{}, true); }

std::string variant_name(const FunctionalSpec& spec) {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Mean>) return "mean";
            else if constexpr (std::is_same_v<T, PMean>) return "pmean";
            else if constexpr (std::is_same_v<T, Variance>) return "variance";
            else if constexpr (std::is_same_v<T, GiniMeanDiff>) return "gini-mean-diff";
            else if constexpr (std::is_same_v<T, GiniAbs>) return "gini-abs";
            else if constexpr (std::is_same_v<T, GiniRel>) return "gini-rel";
            else if constexpr (std::is_same_v<T, SchutzAbs>) return "schutz-abs";
            else if constexpr (std::is_same_v<T, SchutzRel>) return "schutz-rel";
            else if constexpr (std::is_same_v<T, EntropyGE>) return "entropy";
            else if constexpr (std::is_same_v<T, Atkinson>) return "atkinson";
            else if constexpr (std::is_same_v<T, AtkinsonWelfare>) return "atkinson-welfare";
            else if constexpr (std::is_same_v<T, Kolm>) return "kolm";
            else if constexpr (std::is_same_v<T, GiniWelfare>) return "gini-welfare";
            else if constexpr (std::is_same_v<T, SchutzWelfare>) return "schutz-welfare";
            else if constexpr (std::is_same_v<T, WelfareFromRel>) return "welfare-rel";
            else if constexpr (std::is_same_v<T, WelfareFromAbs>) return "welfare-abs";
            else if constexpr (std::is_same_v<T, Quantile>) return "quantile";
            else if constexpr (std::is_same_v<T, LorenzQ>) return "lorenz-q";
            else if constexpr (std::is_same_v<T, LorenzOrdinate>) return "lorenz";
            else if constexpr (std::is_same_v<T, LinearInequality>) return "linear-inequality";
            else if constexpr (std::is_same_v<T, AbsLinearInequality>) return "abs-linear-inequality";
            else if constexpr (std::is_same_v<T, TrimmedU>) return "trimmed";
            else if constexpr (std::is_same_v<T, PovertyLine>) return "poverty-line";
            else if constexpr (std::is_same_v<T, Headcount>) return "headcount";
            else if constexpr (std::is_same_v<T, SenKakwani>) return "sen-kakwani";
            else if constexpr (std::is_same_v<T, FGT>) return "fgt";
            else static_assert(always_false<T>);
        },
        spec.body);
}

}  // namespace fb::func
