#include "funcbandit/core/empirical_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "funcbandit/core/format.hpp"
#include "funcbandit/errors.hpp"

namespace fb {

EmpiricalCdf::EmpiricalCdf(std::span<const double> samples, SupportInterval support)
    : samples_(samples.begin(), samples.end()), support_(support) {
    validate_and_sort();
}

EmpiricalCdf::EmpiricalCdf(std::vector<double>&& samples, SupportInterval support)
    : samples_(std::move(samples)), support_(support) {
    validate_and_sort();
}

EmpiricalCdf EmpiricalCdf::from_sorted_unchecked(std::vector<double> sorted, SupportInterval support) {
    EmpiricalCdf f;
    f.samples_ = std::move(sorted);
    f.support_ = support;
    return f;
}

void EmpiricalCdf::validate_and_sort() {
    if (samples_.empty()) throw DataError("no observations");
    for (double x : samples_) {
        if (std::isnan(x)) throw DataError("observation is NaN");
        require_in_support(support_, x);
    }
    std::sort(samples_.begin(), samples_.end());
}

std::size_t EmpiricalCdf::count_le(double x) const {
    return static_cast<std::size_t>(std::upper_bound(samples_.begin(), samples_.end(), x) - samples_.begin());
}

std::size_t EmpiricalCdf::count_lt(double x) const {
    return static_cast<std::size_t>(std::lower_bound(samples_.begin(), samples_.end(), x) - samples_.begin());
}

double EmpiricalCdf::operator()(double x) const {
    return static_cast<double>(count_le(x)) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::left_limit(double x) const {
    return static_cast<double>(count_lt(x)) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::mean() const {
    return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

EmpiricalCdf ecdf_from_samples(std::span<const double> samples, SupportInterval support) {
    return EmpiricalCdf(samples, support);
}

double sup_distance(const EmpiricalCdf& f, const EmpiricalCdf& g) {
    if (!(f.support() == g.support())) {
        throw ConfigError("sup_distance: mismatched supports " + to_string(f.support()) + " and " +
                          to_string(g.support()));
    }
    const auto& xs = f.samples();
    const auto& ys = g.samples();
    const auto m = static_cast<std::int64_t>(xs.size());
    const auto n = static_cast<std::int64_t>(ys.size());

    // Gaps are tracked as integers |i*n - j*m| so the maximum is exact; one
    // division at the end.
    std::int64_t best = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < xs.size() || j < ys.size()) {
        double x;
        if (j == ys.size() || (i < xs.size() && xs[i] <= ys[j])) {
            x = xs[i];
        } else {
            x = ys[j];
        }
        // left limits at x
        best = std::max<std::int64_t>(best, std::llabs(static_cast<std::int64_t>(i) * n - static_cast<std::int64_t>(j) * m));
        while (i < xs.size() && xs[i] == x) ++i;
        while (j < ys.size() && ys[j] == x) ++j;
        // values at x
        best = std::max<std::int64_t>(best, std::llabs(static_cast<std::int64_t>(i) * n - static_cast<std::int64_t>(j) * m));
    }
    return static_cast<double>(best) / (static_cast<double>(m) * static_cast<double>(n));
}

std::size_t quantile_rank(double alpha, std::size_t m) {
    const double md = static_cast<double>(m);
    auto k = static_cast<std::size_t>(std::ceil(alpha * md));
    k = std::clamp<std::size_t>(k, 1, m);
    // Match the evaluation rule F(x_(k)) = k/m >= alpha exactly in floating point.
    while (k > 1 && static_cast<double>(k - 1) / md >= alpha) --k;
    while (k < m && static_cast<double>(k) / md < alpha) ++k;
    return k;
}

double ecdf_quantile(const EmpiricalCdf& f, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw ConfigError("quantile level must lie in (0, 1], got " + format_double(alpha) +
                          " (alpha = 0 gives -infinity)");
    }
    return f.samples()[quantile_rank(alpha, f.size()) - 1];
}

}  // namespace fb
