#include <algorithm>
#include <cmath>
#include <type_traits>

#include "funcbandit/functionals/evaluate.hpp"
#include "kernels.hpp"

namespace fb::func {

namespace {

// integral of |1 + log x| over [lo, hi]; antiderivative x log x, sign change at 1/e
double abs_one_plus_log_integral(double lo, double hi) {
    auto g = [](double x) { return x * std::log(x); };
    const double e_inv = std::exp(-1.0);
    if (hi <= e_inv) return g(lo) - g(hi);
    if (lo >= e_inv) return g(hi) - g(lo);
    return (g(lo) - g(e_inv)) + (g(hi) - g(e_inv));
}

double entropy_constant(const EntropyGE& f, const SupportInterval& s) {
    const double a = s.a, b = s.b, c = f.c;
    if (c > 0.0 && c < 1.0) {
        const double d = *f.delta;
        return (std::pow(d, -c) * (std::pow(b, c) - std::pow(a, c)) + (b - a) / d) / std::fabs(c * (c - 1.0));
    }
    if (c == 0.0) return (b - a) / a + std::log(b / a);
    if (c == 1.0) {
        return abs_one_plus_log_integral(a / b, b / a) + b * (b - a) / (a * a) * (std::log(b / a) + 1.0);
    }
    const double t1 = std::max(std::pow(a, -c), std::pow(b, -c)) * std::fabs(std::pow(b, c) - std::pow(a, c));
    const double t2 =
        std::fabs(c) * std::max(std::pow(a / b, 2.0 * c - 1.0), std::pow(b / a, 2.0 * c - 1.0)) * (b - a) / a;
    return (t1 + t2) / std::fabs(c * (c - 1.0));
}

double atkinson_constant(const Atkinson& f, const SupportInterval& s) {
    const double a = s.a, b = s.b, c = 1.0 - f.eps;
    if (f.eps < 1.0) {
        const double d = *f.delta;
        return (std::pow(d, -c) * (std::pow(b, c) - std::pow(a, c)) + (b - a) / d) / c;
    }
    return std::pow(b / a, f.eps) *
           (std::pow(b, -c) * (std::pow(a, c) - std::pow(b, c)) + std::fabs(c) * std::pow(a / b, 2.0 * c - 1.0) * (b - a) / a) /
           (f.eps - 1.0);
}

double atoms_total_variation(const std::vector<WeightAtom>& atoms) {
    double k = 0.0;
    for (const auto& at : atoms) k += std::fabs(at.w);
    return k;
}

double atoms_first_moment(const std::vector<WeightAtom>& atoms) {
    double c = 0.0;
    for (const auto& at : atoms) c += at.u * at.w;
    return std::fabs(c);
}

}  // namespace

double poverty_line_constant(const PovertyLineSpec& line, const SupportInterval& support) {
    if (line.delta == 0.0) return 0.0;
    if (line.center == PovertyLineSpec::Center::Mean) return line.delta * support.width();
    return line.delta / line.r;
}

double poverty_line_floor(const PovertyLineSpec& line, std::optional<double> z_star) {
    return z_star ? *z_star : (1.0 - line.delta) * line.z0;
}

double lipschitz_constant(const FunctionalSpec& spec) {
    const SupportInterval& s = spec.support;
    const double w = s.width();
    return std::visit(
        [&](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Mean>) {
                return w;
            } else if constexpr (std::is_same_v<T, PMean>) {
                return std::pow(s.b, t.p);
            } else if constexpr (std::is_same_v<T, Variance>) {
                return w * w;
            } else if constexpr (std::is_same_v<T, GiniMeanDiff>) {
                return 2.0 * w;
            } else if constexpr (std::is_same_v<T, GiniAbs>) {
                return w;
            } else if constexpr (std::is_same_v<T, GiniRel>) {
                return 2.0 * w / t.delta;
            } else if constexpr (std::is_same_v<T, SchutzAbs>) {
                return w;
            } else if constexpr (std::is_same_v<T, SchutzRel>) {
                return w * (2.0 * t.s + 1.0 / t.delta) + 5.0;
            } else if constexpr (std::is_same_v<T, EntropyGE>) {
                return entropy_constant(t, s);
            } else if constexpr (std::is_same_v<T, Atkinson>) {
                return atkinson_constant(t, s);
            } else if constexpr (std::is_same_v<T, AtkinsonWelfare>) {
                // mean value theorem on y -> y^{1/c}, c = 1 - eps; equals 1/(1 - eps) on [0, 1]
                const double c = 1.0 - t.eps;
                return (std::pow(s.b, c) - std::pow(s.a, c)) * std::pow(s.b, t.eps) / c;
            } else if constexpr (std::is_same_v<T, Kolm>) {
                // kappa^-1 e^{kappa b}(e^{-kappa a} - e^{-kappa b}) written without overflow
                return std::exp(t.kappa * w) * w + std::expm1(t.kappa * w) / t.kappa;
            } else if constexpr (std::is_same_v<T, GiniWelfare> || std::is_same_v<T, SchutzWelfare>) {
                return 2.0 * w;
            } else if constexpr (std::is_same_v<T, WelfareFromRel>) {
                return t.gamma * w + std::max(std::fabs(s.a), std::fabs(s.b)) * lipschitz_constant(*t.inner);
            } else if constexpr (std::is_same_v<T, WelfareFromAbs>) {
                return w + lipschitz_constant(*t.inner);
            } else if constexpr (std::is_same_v<T, Quantile>) {
                return 1.0 / t.r;
            } else if constexpr (std::is_same_v<T, LorenzQ>) {
                return t.u / t.r;
            } else if constexpr (std::is_same_v<T, LorenzOrdinate>) {
                return (1.0 / t.r + w * s.b / s.a) * t.u / s.a;
            } else if constexpr (std::is_same_v<T, LinearInequality>) {
                return atoms_total_variation(t.atoms) * (1.0 / t.r + w * s.b / s.a) / s.a;
            } else if constexpr (std::is_same_v<T, AbsLinearInequality>) {
                return atoms_first_moment(t.atoms) * w + atoms_total_variation(t.atoms) / t.r;
            } else if constexpr (std::is_same_v<T, TrimmedU>) {
                const KernelBounds kb = kernel_bounds(t.kernel, s);
                const double ck = t.c_kernel.value_or(kb.total_variation);
                const double u = t.u_bound.value_or(kb.sup_abs);
                return ck + u * (1.0 + t.kappa / t.r);
            } else if constexpr (std::is_same_v<T, PovertyLine>) {
                // a fixed line is constant; any C > 0 works and 1 is reported
                if (t.line.delta == 0.0) return 1.0;
                return poverty_line_constant(t.line, s);
            } else if constexpr (std::is_same_v<T, Headcount>) {
                return poverty_line_constant(t.line, s) * t.s + 1.0;
            } else if constexpr (std::is_same_v<T, SenKakwani>) {
                const double zs = poverty_line_floor(t.line, t.z_star);
                const double cz = poverty_line_constant(t.line, s);
                return (t.kappa + 1.0) * (1.0 + (s.b / (zs * zs) + 2.0 * t.kappa * t.s + t.s) * cz + 4.0 * t.kappa);
            } else if constexpr (std::is_same_v<T, FGT>) {
                const double zs = poverty_line_floor(t.line, t.z_star);
                const double cz = poverty_line_constant(t.line, s);
                // Lambda(x) = x^p: C_Lambda = p, Lambda(1) = 1
                return s.b / (zs * zs) * t.lambda.p * cz + 1.0;
            }
        },
        spec.body);
}

}  // namespace fb::func
