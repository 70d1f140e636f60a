#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "funcbandit/core/support.hpp"

namespace fb {

// Step cdf of a finite sample on [a, b], stored as the sorted multiset of
// observations. Evaluation F(x) = #{i : x_i <= x} / m is right-continuous.
class EmpiricalCdf {
public:
    // Throws DataError("no observations") on empty input and a DataError
    // naming the value when an observation falls outside the support.
    EmpiricalCdf(std::span<const double> samples, SupportInterval support);
    EmpiricalCdf(std::vector<double>&& samples, SupportInterval support);

    // Wraps an already sorted, validated vector without re-checking.
    static EmpiricalCdf from_sorted_unchecked(std::vector<double> sorted, SupportInterval support);

    [[nodiscard]] std::size_t size() const { return samples_.size(); }
    [[nodiscard]] const std::vector<double>& samples() const { return samples_; }
    [[nodiscard]] const SupportInterval& support() const { return support_; }

    // F(x), right-continuous.
    [[nodiscard]] double operator()(double x) const;
    // F(x-), the left limit.
    [[nodiscard]] double left_limit(double x) const;

    [[nodiscard]] std::size_t count_le(double x) const;
    [[nodiscard]] std::size_t count_lt(double x) const;

    [[nodiscard]] double mean() const;

private:
    EmpiricalCdf() = default;
    void validate_and_sort();

    std::vector<double> samples_;
    SupportInterval support_;
};

EmpiricalCdf ecdf_from_samples(std::span<const double> samples, SupportInterval support);

// Exact Kolmogorov distance ||F - G||_inf. Both cdfs are step functions, so
// the supremum is attained at a jump point of either cdf or as a left limit
// there. Throws ConfigError if the supports differ.
double sup_distance(const EmpiricalCdf& f, const EmpiricalCdf& g);

// inf{x : F(x) >= alpha} = x_(ceil(alpha m)). alpha must lie in (0, 1]; the
// 0-quantile is -infinity and is rejected.
double ecdf_quantile(const EmpiricalCdf& f, double alpha);

// 1-based order statistic index ceil(alpha m), robust to rounding in alpha*m.
std::size_t quantile_rank(double alpha, std::size_t m);

}  // namespace fb
