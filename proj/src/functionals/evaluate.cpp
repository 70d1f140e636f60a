#include "funcbandit/functionals/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "funcbandit/core/format.hpp"
#include "funcbandit/core/numeric.hpp"
#include "funcbandit/errors.hpp"
#include "kernels.hpp"
#include "sample_stats.hpp"

namespace fb::func {

namespace stats {

double mean(const std::vector<double>& x) {
    CompensatedSum s;
    for (double v : x) s.add(v);
    return s.value() / static_cast<double>(x.size());
}

double pairwise_abs_sum(const std::vector<double>& x) {
    // sum_{i,j} |x_i - x_j| = 2 sum_k (x_(k+1) - x_(k)) k (m - k); every term >= 0
    const std::size_t m = x.size();
    CompensatedSum s;
    for (std::size_t k = 1; k < m; ++k) {
        s.add((x[k] - x[k - 1]) * static_cast<double>(k) * static_cast<double>(m - k));
    }
    return 2.0 * s.value();
}

double gini_mean_diff(const std::vector<double>& x) {
    const double m = static_cast<double>(x.size());
    return pairwise_abs_sum(x) / (m * m);
}

double variance(const std::vector<double>& x) {
    const double mu = mean(x);
    CompensatedSum s;
    for (double v : x) s.add((v - mu) * (v - mu));
    return s.value() / static_cast<double>(x.size());
}

double schutz_abs(const std::vector<double>& x) {
    const double mu = mean(x);
    CompensatedSum s;
    for (double v : x) s.add(std::fabs(v - mu));
    return s.value() / (2.0 * static_cast<double>(x.size()));
}

double power_mean_sum(const std::vector<double>& x, double p) {
    CompensatedSum s;
    for (double v : x) s.add(std::pow(v, p));
    return s.value() / static_cast<double>(x.size());
}

double kolm(const std::vector<double>& x, double kappa) {
    const double mu = mean(x);
    // log-sum-exp shifted by the largest exponent kappa (mu - x_min)
    const double top = kappa * (mu - x.front());
    CompensatedSum s;
    for (double v : x) s.add(std::exp(kappa * (mu - v) - top));
    return (top + std::log(s.value() / static_cast<double>(x.size()))) / kappa;
}

double lorenz_q(const std::vector<double>& x, double u) {
    const std::size_t m = x.size();
    const double md = static_cast<double>(m);
    std::size_t j = static_cast<std::size_t>(std::floor(u * md));
    if (j > m) j = m;
    CompensatedSum s;
    for (std::size_t i = 0; i < j; ++i) s.add(x[i]);
    double q = s.value() / md;
    if (j < m) {
        const double frac = u - static_cast<double>(j) / md;
        if (frac > 0.0) q += frac * x[j];
    }
    return q;
}

}  // namespace stats

namespace {

double entropy_value(const EntropyGE& f, const std::vector<double>& x) {
    const double c = f.c;
    const double mu = stats::mean(x);
    if (mu == 0.0) {
        // only reachable for c in (0, 1): point mass at 0
        return -1.0 / (c * (c - 1.0));
    }
    const double m = static_cast<double>(x.size());
    CompensatedSum s;
    if (c == 1.0) {
        for (double v : x) {
            const double r = v / mu;
            if (r > 0.0) s.add(r * std::log(r));
        }
        return s.value() / m;
    }
    if (c == 0.0) {
        for (double v : x) s.add(std::log(mu / v));
        return s.value() / m;
    }
    for (double v : x) s.add(std::pow(v / mu, c));
    return (s.value() / m - 1.0) / (c * (c - 1.0));
}

double atkinson_welfare_value(double eps, const std::vector<double>& x) {
    const double c = 1.0 - eps;
    return std::pow(stats::power_mean_sum(x, c), 1.0 / c);
}

double atkinson_value(const Atkinson& f, const std::vector<double>& x) {
    const double mu = stats::mean(x);
    if (mu == 0.0) return 1.0;  // eps in (0, 1), point mass at 0
    return 1.0 - atkinson_welfare_value(f.eps, x) / mu;
}

double headcount_value(double z, const EmpiricalCdf& f) { return f(z); }

double sen_value(const SenKakwani& s, const EmpiricalCdf& f) {
    const double z = poverty_line_value(s.line, f);
    if (!(z > 0.0)) throw NumericError("sen-kakwani: poverty line " + format_short(z) + " is not positive");
    const auto& x = f.samples();
    const std::size_t m = x.size();
    const std::size_t nz = f.count_le(z);
    if (nz == 0) return 0.0;
    const double fz = static_cast<double>(nz) / static_cast<double>(m);
    CompensatedSum acc;
    std::size_t i = 0;
    while (i < nz) {
        // run of ties; F(x_i) counts them all
        std::size_t j = i;
        while (j < m && x[j] == x[i]) ++j;
        const double fx = static_cast<double>(j) / static_cast<double>(m);
        const double term = (1.0 - x[i] / z) * std::pow(1.0 - fx / fz, s.kappa);
        acc.add(term * static_cast<double>(j - i));
        i = j;
    }
    return (s.kappa + 1.0) * acc.value() / static_cast<double>(m);
}

double fgt_value(const FGT& g, const EmpiricalCdf& f) {
    const double z = poverty_line_value(g.line, f);
    if (!(z > 0.0)) throw NumericError("fgt: poverty line " + format_short(z) + " is not positive");
    const auto& x = f.samples();
    CompensatedSum acc;
    for (double v : x) {
        if (v > z) break;
        acc.add(std::pow(1.0 - v / z, g.lambda.p));
    }
    return acc.value() / static_cast<double>(x.size());
}

double trimmed_value(const TrimmedU& t, const EmpiricalCdf& f) {
    const double q = ecdf_quantile(f, t.alpha);
    CompensatedSum acc;
    for (double v : f.samples()) {
        const bool in = t.side == TrimmedU::Side::Lower ? v <= q : v >= q;
        if (in) acc.add(apply_kernel(t.kernel, v));
    }
    const double out = acc.value() / static_cast<double>(f.size());
    if (!std::isfinite(out)) throw NumericError("trimmed: kernel value is not finite");
    return out;
}

double eval_body(const FunctionalSpec& spec, const EmpiricalCdf& f) {
    const auto& x = f.samples();
    return std::visit(
        [&](const auto& t) -> double {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Mean>) {
                return stats::mean(x);
            } else if constexpr (std::is_same_v<T, PMean>) {
                return stats::power_mean_sum(x, t.p);
            } else if constexpr (std::is_same_v<T, Variance>) {
                return stats::variance(x);
            } else if constexpr (std::is_same_v<T, GiniMeanDiff>) {
                return stats::gini_mean_diff(x);
            } else if constexpr (std::is_same_v<T, GiniAbs>) {
                return 0.5 * stats::gini_mean_diff(x);
            } else if constexpr (std::is_same_v<T, GiniRel>) {
                const double mu = stats::mean(x);
                return mu == 0.0 ? 0.0 : 0.5 * stats::gini_mean_diff(x) / mu;
            } else if constexpr (std::is_same_v<T, SchutzAbs>) {
                return stats::schutz_abs(x);
            } else if constexpr (std::is_same_v<T, SchutzRel>) {
                const double mu = stats::mean(x);
                return mu == 0.0 ? 0.0 : stats::schutz_abs(x) / mu;
            } else if constexpr (std::is_same_v<T, EntropyGE>) {
                return entropy_value(t, x);
            } else if constexpr (std::is_same_v<T, Atkinson>) {
                return atkinson_value(t, x);
            } else if constexpr (std::is_same_v<T, AtkinsonWelfare>) {
                return atkinson_welfare_value(t.eps, x);
            } else if constexpr (std::is_same_v<T, Kolm>) {
                return stats::kolm(x, t.kappa);
            } else if constexpr (std::is_same_v<T, GiniWelfare>) {
                return stats::mean(x) - 0.5 * stats::gini_mean_diff(x);
            } else if constexpr (std::is_same_v<T, SchutzWelfare>) {
                return stats::mean(x) - stats::schutz_abs(x);
            } else if constexpr (std::is_same_v<T, WelfareFromRel>) {
                return stats::mean(x) * (1.0 - eval_body(*t.inner, f));
            } else if constexpr (std::is_same_v<T, WelfareFromAbs>) {
                return stats::mean(x) - eval_body(*t.inner, f);
            } else if constexpr (std::is_same_v<T, Quantile>) {
                return ecdf_quantile(f, t.alpha);
            } else if constexpr (std::is_same_v<T, LorenzQ>) {
                return stats::lorenz_q(x, t.u);
            } else if constexpr (std::is_same_v<T, LorenzOrdinate>) {
                return stats::lorenz_q(x, t.u) / stats::mean(x);
            } else if constexpr (std::is_same_v<T, LinearInequality>) {
                const double mu = stats::mean(x);
                CompensatedSum acc;
                for (const auto& at : t.atoms) acc.add(at.w * (at.u - stats::lorenz_q(x, at.u) / mu));
                return acc.value();
            } else if constexpr (std::is_same_v<T, AbsLinearInequality>) {
                const double mu = stats::mean(x);
                CompensatedSum acc;
                for (const auto& at : t.atoms) acc.add(at.w * (mu * at.u - stats::lorenz_q(x, at.u)));
                return acc.value();
            } else if constexpr (std::is_same_v<T, TrimmedU>) {
                return trimmed_value(t, f);
            } else if constexpr (std::is_same_v<T, PovertyLine>) {
                return poverty_line_value(t.line, f);
            } else if constexpr (std::is_same_v<T, Headcount>) {
                return headcount_value(poverty_line_value(t.line, f), f);
            } else if constexpr (std::is_same_v<T, SenKakwani>) {
                return sen_value(t, f);
            } else if constexpr (std::is_same_v<T, FGT>) {
                return fgt_value(t, f);
            }
        },
        spec.body);
}

}  // namespace

double poverty_line_value(const PovertyLineSpec& line, const EmpiricalCdf& f) {
    if (line.delta == 0.0) return line.z0;
    const double center =
        line.center == PovertyLineSpec::Center::Mean ? stats::mean(f.samples()) : ecdf_quantile(f, 0.5);
    return line.z0 + line.delta * (center - line.z0);
}

double evaluate(const FunctionalSpec& spec, const EmpiricalCdf& f) {
    if (!(f.support() == spec.support)) {
        throw ConfigError("sample support " + to_string(f.support()) + " differs from functional support " +
                          to_string(spec.support));
    }
    return eval_body(spec, f);
}

double u_functional(const Kernel& kernel, const EmpiricalCdf& f, std::optional<std::pair<double, double>> bounds) {
    const SupportInterval& s = f.support();
    const double c = bounds ? bounds->first : s.a;
    const double d = bounds ? bounds->second : s.b;
    if (!(c >= s.a && d <= s.b && c <= d)) {
        throw ConfigError("u_functional: bounds [" + format_short(c) + ", " + format_short(d) + "] not inside " +
                          to_string(s));
    }
    if (kernel.name == Kernel::Name::Power && !(std::isfinite(kernel.p) && kernel.p > 0.0)) {
        throw ConfigError("u_functional: power kernel exponent must be positive");
    }
    const auto& all = f.samples();
    const auto lo = std::lower_bound(all.begin(), all.end(), c);
    const auto hi = std::upper_bound(all.begin(), all.end(), d);
    const std::vector<double> x(lo, hi);
    const double m = static_cast<double>(f.size());
    if (x.empty()) return 0.0;

    if (kernel.degree() == 1) {
        CompensatedSum acc;
        for (double v : x) {
            if (kernel.name == Kernel::Name::Log && !(v > 0.0)) {
                throw NumericError("log kernel at nonpositive observation " + format_short(v));
            }
            if (kernel.name == Kernel::Name::Power && v < 0.0) {
                throw NumericError("power kernel at negative observation " + format_short(v));
            }
            acc.add(apply_kernel(kernel, v));
        }
        return acc.value() / m;
    }
    if (kernel.name == Kernel::Name::AbsDiff) return stats::pairwise_abs_sum(x) / (m * m);
    // sum_{i,j} (x_i - x_j)^2 / 2 = n sum_i (x_i - xbar)^2 over the n retained points
    const double n = static_cast<double>(x.size());
    return n * n * stats::variance(x) / (m * m);
}

LorenzPoint lorenz(const EmpiricalCdf& f, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw ConfigError("lorenz: u must lie in [0, 1], got " + format_short(u));
    LorenzPoint out;
    out.q = stats::lorenz_q(f.samples(), u);
    const double mu = stats::mean(f.samples());
    if (mu > 0.0) out.l = u == 1.0 ? 1.0 : out.q / mu;
    return out;
}

}  // namespace fb::func
