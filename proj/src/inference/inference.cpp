#include "funcbandit/inference/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "funcbandit/core/format.hpp"
#include "funcbandit/errors.hpp"
#include "funcbandit/functionals/evaluate.hpp"

namespace fb::inference {

namespace {

void require_level(double alpha, const char* what) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(std::string(what) + " must lie in (0, 1), got " + format_double(alpha));
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive, got " + format_double(v));
}

std::size_t to_count(double v) {
    if (!(v < 9.0e18)) throw NumericError("sample size " + format_double(v) + " is too large");
    return static_cast<std::size_t>(v);
}

}  // namespace

double dkwm_half_width(double c, std::size_t m, double alpha) {
    require_level(alpha, "alpha");
    if (m == 0) throw DataError("no observations");
    return c * std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(m)));
}

ConfidenceInterval dkwm_ci(const func::FunctionalSpec& spec, const EmpiricalCdf& f, double alpha) {
    require_level(alpha, "alpha");
    ConfidenceInterval ci;
    ci.center = func::evaluate(spec, f);
    ci.half_width = dkwm_half_width(func::lipschitz_constant(spec), f.size(), alpha);
    ci.level = 1.0 - alpha;
    return ci;
}

double concentration_bound(double c, std::size_t m, double eps) {
    require_positive(c, "C");
    return std::min(1.0, 2.0 * std::exp(-2.0 * static_cast<double>(m) * eps * eps / (c * c)));
}

double test_critical_value(double c, double alpha, std::size_t n1) {
    require_level(alpha, "alpha");
    if (n1 < 2) throw ConfigError("n1 must be at least 2, got " + std::to_string(n1));
    return std::sqrt(2.0 * std::log(4.0 / alpha) * c * c / static_cast<double>(n1 / 2));
}

TestResult welfare_test(const EmpiricalCdf& f1, const EmpiricalCdf& f2, const func::FunctionalSpec& spec,
                        double alpha, std::size_t n1) {
    TestResult r;
    r.c_alpha = test_critical_value(func::lipschitz_constant(spec), alpha, n1);
    r.statistic = std::fabs(func::evaluate(spec, f1) - func::evaluate(spec, f2));
    r.reject = r.statistic >= r.c_alpha;
    return r;
}

std::size_t n1_for_power(double c, double gap, double alpha, double eta) {
    require_positive(c, "C");
    if (gap == 0.0) throw ConfigError("Delta = 0: no finite exploration length detects a zero gap");
    require_positive(gap, "Delta");
    require_level(alpha, "alpha");
    require_level(eta, "eta");
    const double per_arm = std::ceil(8.0 * std::log(4.0 / std::min(alpha, eta)) * c * c / (gap * gap));
    return 2 * to_count(per_arm);
}

std::size_t n1_for_es_regret(double c, double delta, std::size_t arms) {
    require_positive(c, "C");
    require_positive(delta, "delta");
    if (arms < 2) throw ConfigError("K must be at least 2");
    const double k1 = static_cast<double>(arms - 1);
    const double per_arm = std::ceil(16.0 * k1 * k1 * c * c / (std::numbers::e * delta * delta));
    return arms * to_count(per_arm);
}

BoundReport fucb_regret_bound(double beta, double c, std::size_t arms, std::size_t n) {
    if (!(beta > 2.0)) throw ConfigError("F-UCB bound needs beta > 2, got " + format_double(beta));
    require_positive(c, "C");
    if (arms < 1 || n < 1) throw ConfigError("K and n must be positive");
    BoundReport r;
    r.policy = "fucb";
    r.constant = c * std::sqrt(2.0 * beta + (beta + 2.0) / (beta - 2.0));
    const double logbar = std::max(std::log(static_cast<double>(n)), 1.0);
    r.bound = r.constant * std::sqrt(static_cast<double>(arms) * static_cast<double>(n) * logbar);
    r.breakdown = {{"c", r.constant}, {"logbar_n", logbar}};
    r.inputs = {{"beta", beta}, {"C", c}, {"K", static_cast<double>(arms)}, {"n", static_cast<double>(n)}};
    return r;
}

BoundReport famoss_regret_bound(double beta, double c, std::size_t arms, std::size_t n) {
    if (!(beta > 0.25)) throw ConfigError("F-aMOSS bound needs beta > 1/4, got " + format_double(beta));
    require_positive(c, "C");
    if (arms < 1 || n < 1) throw ConfigError("K and n must be positive");
    const double w = lambert_w0(std::numbers::e / (4.0 * beta));
    const double denom = 1.0 - std::pow(4.0 * beta * w, 0.5 - 0.5 / w);
    if (!(denom > 0.0)) throw NumericError("d(beta) is undefined at beta = " + format_double(beta));
    const double d = std::sqrt(beta * w) / denom;
    BoundReport r;
    r.policy = "famoss";
    r.constant = c * (4.83 + 6.66 * d + std::sqrt(2.0 * beta)) * std::sqrt(std::numbers::pi);
    r.bound = r.constant * std::sqrt(static_cast<double>(arms) * static_cast<double>(n));
    r.breakdown = {{"w0", w}, {"d", d}, {"constant", r.constant}};
    r.inputs = {{"beta", beta}, {"C", c}, {"K", static_cast<double>(arms)}, {"n", static_cast<double>(n)}};
    return r;
}

double lambert_w0(double y) {
    if (!(y > 0.0) || !std::isfinite(y)) throw ConfigError("lambert_w0 needs a finite y > 0, got " + format_double(y));
    double w = std::log1p(y);
    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - y;
        const double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::fabs(step) <= 1e-16 * std::max(1.0, std::fabs(w))) break;
    }
    if (!(std::fabs(w * std::exp(w) - y) <= 1e-12 * std::max(1.0, y)))
        throw NumericError("lambert_w0 did not converge at y = " + format_double(y));
    return w;
}

HighProbabilityBound hpb_bound(const std::vector<double>& gaps, double c, double beta, std::size_t n, double x) {
    if (!(x >= 1.0)) throw ConfigError("x must be at least 1, got " + format_double(x));
    if (!(beta > 1.0)) throw ConfigError("beta must exceed 1, got " + format_double(beta));
    require_positive(c, "C");
    if (n < 1) throw ConfigError("n must be positive");
    HighProbabilityBound r;
    const double logn = std::log(static_cast<double>(n));
    bool any = false;
    double tail = 0.0;
    for (double g : gaps) {
        if (g < 0.0 || !std::isfinite(g)) throw ConfigError("gaps must be finite and non-negative");
        if (g == 0.0) continue;
        any = true;
        r.threshold += (2.0 * c * c * beta * logn / g + g) * x;
        tail += 2.0 * std::pow(2.0 * c * c * beta * logn / (g * g) * x, 1.0 - beta) / (beta - 1.0);
    }
    // empty sum: no regret is possible, nothing to bound
    if (!any) return r;
    const double k = static_cast<double>(gaps.size());
    r.prob_bound = 2.0 * k / std::pow(static_cast<double>(n), beta * x - 1.0) + tail;
    return r;
}

}  // namespace fb::inference
