#include "funcbandit/functionals/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "funcbandit/core/format.hpp"
#include "funcbandit/errors.hpp"
#include "funcbandit/functionals/evaluate.hpp"

namespace fb::func {

IncrementalFunctional::IncrementalFunctional(FunctionalSpec spec, bool verify)
    : spec_(std::move(spec)), verify_(verify), sample_(spec_.support) {
    validate(spec_);
    // at most one transformed running sum is needed, by the spec or its inner measure
    const FunctionalBody* body = &spec_.body;
    if (const auto* w = std::get_if<WelfareFromRel>(body)) body = &w->inner->body;
    if (const auto* w = std::get_if<WelfareFromAbs>(body)) body = &w->inner->body;
    if (const auto* p = std::get_if<PMean>(body)) {
        phi_ = Phi::Power;
        phi_p_ = p->p;
    } else if (const auto* a = std::get_if<Atkinson>(body)) {
        phi_ = Phi::Power;
        phi_p_ = 1.0 - a->eps;
    } else if (const auto* a = std::get_if<AtkinsonWelfare>(body)) {
        phi_ = Phi::Power;
        phi_p_ = 1.0 - a->eps;
    } else if (const auto* e = std::get_if<EntropyGE>(body)) {
        if (e->c == 1.0) {
            phi_ = Phi::XLogX;
        } else if (e->c == 0.0) {
            phi_ = Phi::Log;
        } else {
            phi_ = Phi::Power;
            phi_p_ = e->c;
        }
    } else if (const auto* k = std::get_if<Kolm>(body)) {
        phi_ = Phi::NegExp;
        phi_p_ = k->kappa;
    }
}

void IncrementalFunctional::add(double x) {
    if (std::isnan(x)) throw DataError("observation is NaN");
    require_in_support(spec_.support, x);
    const std::size_t m = sample_.size();
    if (m > 0) {
        // sum_j |x - x_j| over the current sample
        const auto lt = sample_.prefix_lt(x);
        const double total = sample_.total();
        const double below = x * static_cast<double>(lt.count) - lt.sum;
        const double above = (total - lt.sum) - x * static_cast<double>(m - lt.count);
        pair_abs_.add(2.0 * (below + above));
    }
    sample_.insert(x);
    sum_x_.add(x);
    const double n = static_cast<double>(m + 1);
    const double d = x - welford_mean_;
    welford_mean_ += d / n;
    welford_m2_ += d * (x - welford_mean_);
    switch (phi_) {
        case Phi::None: break;
        case Phi::Power: phi_sum_.add(std::pow(x, phi_p_)); break;
        case Phi::XLogX: phi_sum_.add(x > 0.0 ? x * std::log(x) : 0.0); break;
        case Phi::Log: phi_sum_.add(std::log(x)); break;
        case Phi::NegExp: phi_sum_.add(std::exp(-phi_p_ * (x - spec_.support.a))); break;
    }
}

double IncrementalFunctional::mean() const { return sum_x_.value() / static_cast<double>(sample_.size()); }

double IncrementalFunctional::kth_quantile(double alpha) const {
    return sample_.kth(quantile_rank(alpha, sample_.size()));
}

double IncrementalFunctional::lorenz_q(double u) const {
    const std::size_t m = sample_.size();
    const double md = static_cast<double>(m);
    std::size_t j = static_cast<std::size_t>(std::floor(u * md));
    if (j > m) j = m;
    double q = sample_.sum_smallest(j) / md;
    if (j < m) {
        const double frac = u - static_cast<double>(j) / md;
        if (frac > 0.0) q += frac * sample_.kth(j + 1);
    }
    return q;
}

double IncrementalFunctional::schutz_sum() const {
    const double mu = mean();
    const auto le = sample_.prefix_le(mu);
    const double total = sum_x_.value();
    const double m = static_cast<double>(sample_.size());
    const double below = mu * static_cast<double>(le.count) - le.sum;
    const double above = (total - le.sum) - mu * (m - static_cast<double>(le.count));
    return std::max(0.0, below + above);
}

std::optional<double> IncrementalFunctional::fast(const FunctionalSpec& spec) const {
    const double m = static_cast<double>(sample_.size());
    auto gmd = [&] { return pair_abs_.value() / (m * m); };
    return std::visit(
        [&](const auto& t) -> std::optional<double> {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Mean>) {
                return mean();
            } else if constexpr (std::is_same_v<T, PMean>) {
                return phi_sum_.value() / m;
            } else if constexpr (std::is_same_v<T, Variance>) {
                return welford_m2_ / m;
            } else if constexpr (std::is_same_v<T, GiniMeanDiff>) {
                return gmd();
            } else if constexpr (std::is_same_v<T, GiniAbs>) {
                return 0.5 * gmd();
            } else if constexpr (std::is_same_v<T, GiniRel>) {
                const double mu = mean();
                return mu == 0.0 ? 0.0 : 0.5 * gmd() / mu;
            } else if constexpr (std::is_same_v<T, GiniWelfare>) {
                return mean() - 0.5 * gmd();
            } else if constexpr (std::is_same_v<T, SchutzAbs>) {
                return schutz_sum() / (2.0 * m);
            } else if constexpr (std::is_same_v<T, SchutzRel>) {
                const double mu = mean();
                return mu == 0.0 ? 0.0 : schutz_sum() / (2.0 * m) / mu;
            } else if constexpr (std::is_same_v<T, SchutzWelfare>) {
                return mean() - schutz_sum() / (2.0 * m);
            } else if constexpr (std::is_same_v<T, EntropyGE>) {
                const double mu = mean();
                const double c = t.c;
                if (mu == 0.0) return -1.0 / (c * (c - 1.0));
                if (c == 1.0) return phi_sum_.value() / (m * mu) - std::log(mu);
                if (c == 0.0) return std::log(mu) - phi_sum_.value() / m;
                return (phi_sum_.value() / m / std::pow(mu, c) - 1.0) / (c * (c - 1.0));
            } else if constexpr (std::is_same_v<T, Atkinson>) {
                const double mu = mean();
                if (mu == 0.0) return 1.0;
                const double c = 1.0 - t.eps;
                return 1.0 - std::pow(phi_sum_.value() / m, 1.0 / c) / mu;
            } else if constexpr (std::is_same_v<T, AtkinsonWelfare>) {
                return std::pow(phi_sum_.value() / m, 1.0 / (1.0 - t.eps));
            } else if constexpr (std::is_same_v<T, Kolm>) {
                const double s = phi_sum_.value() / m;
                if (!(s > std::numeric_limits<double>::min())) return std::nullopt;
                return (mean() - spec.support.a) + std::log(s) / t.kappa;
            } else if constexpr (std::is_same_v<T, WelfareFromRel>) {
                auto inner = fast(*t.inner);
                if (!inner) return std::nullopt;
                return mean() * (1.0 - *inner);
            } else if constexpr (std::is_same_v<T, WelfareFromAbs>) {
                auto inner = fast(*t.inner);
                if (!inner) return std::nullopt;
                return mean() - *inner;
            } else if constexpr (std::is_same_v<T, Quantile>) {
                return kth_quantile(t.alpha);
            } else if constexpr (std::is_same_v<T, LorenzQ>) {
                return lorenz_q(t.u);
            } else if constexpr (std::is_same_v<T, LorenzOrdinate>) {
                return lorenz_q(t.u) / mean();
            } else if constexpr (std::is_same_v<T, LinearInequality>) {
                const double mu = mean();
                CompensatedSum acc;
                for (const auto& at : t.atoms) acc.add(at.w * (at.u - lorenz_q(at.u) / mu));
                return acc.value();
            } else if constexpr (std::is_same_v<T, AbsLinearInequality>) {
                const double mu = mean();
                CompensatedSum acc;
                for (const auto& at : t.atoms) acc.add(at.w * (mu * at.u - lorenz_q(at.u)));
                return acc.value();
            } else if constexpr (std::is_same_v<T, TrimmedU>) {
                if (t.kernel.name != Kernel::Name::Identity) return std::nullopt;
                const double q = kth_quantile(t.alpha);
                if (t.side == TrimmedU::Side::Lower) return sample_.prefix_le(q).sum / m;
                return (sum_x_.value() - sample_.prefix_lt(q).sum) / m;
            } else if constexpr (std::is_same_v<T, PovertyLine> || std::is_same_v<T, Headcount>) {
                const auto& line = t.line;
                double z = line.z0;
                if (line.delta != 0.0) {
                    const double center = line.center == PovertyLineSpec::Center::Mean ? mean() : kth_quantile(0.5);
                    z = line.z0 + line.delta * (center - line.z0);
                }
                if constexpr (std::is_same_v<T, PovertyLine>) {
                    return z;
                } else {
                    return static_cast<double>(sample_.prefix_le(z).count) / m;
                }
            } else {
                return std::nullopt;
            }
        },
        spec.body);
}

bool IncrementalFunctional::is_fast() const {
    if (sample_.empty()) return false;
    return fast(spec_).has_value();
}

double IncrementalFunctional::value() const {
    if (sample_.empty()) throw DataError("no observations");
    auto v = fast(spec_);
    if (!v) return evaluate(spec_, sample_.to_ecdf());
    if (verify_) {
        const double full = evaluate(spec_, sample_.to_ecdf());
        if (!(std::fabs(*v - full) <= 1e-12 * std::max(1.0, std::fabs(full)))) {
            throw NumericError("incremental " + variant_name(spec_) + " value " + format_double(*v) +
                               " disagrees with full recomputation " + format_double(full));
        }
    }
    return *v;
}

}  // namespace fb::func
