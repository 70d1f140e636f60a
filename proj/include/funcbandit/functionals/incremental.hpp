#pragma once

#include <cstddef>
#include <optional>

#include "funcbandit/core/numeric.hpp"
#include "funcbandit/core/sorted_sample.hpp"
#include "funcbandit/functionals/spec.hpp"

namespace fb::func {

// T(F_m) maintained under one-at-a-time insertion. Mean-type, Gini,
// Schutz, entropy, Atkinson, Kolm, quantile and Lorenz-type values are
// updated in O(log m); everything else is recomputed from the sorted
// sample. With verify on, each fast value is checked against a full
// recomputation and a NumericError is raised if they differ by more than
// 1e-12 (relative to max(1, |T|)).
class IncrementalFunctional {
public:
    explicit IncrementalFunctional(FunctionalSpec spec, bool verify = false);

    // Throws DataError for values outside the support.
    void add(double x);

    [[nodiscard]] std::size_t size() const { return sample_.size(); }
    [[nodiscard]] const SortedSample& sample() const { return sample_; }
    [[nodiscard]] const FunctionalSpec& spec() const { return spec_; }

    // Throws DataError when no observation has been added.
    [[nodiscard]] double value() const;

    // True when value() avoids a full recomputation.
    [[nodiscard]] bool is_fast() const;

private:
    enum class Phi { None, Power, XLogX, Log, NegExp };

    [[nodiscard]] std::optional<double> fast(const FunctionalSpec& spec) const;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double kth_quantile(double alpha) const;
    [[nodiscard]] double lorenz_q(double u) const;
    [[nodiscard]] double schutz_sum() const;

    FunctionalSpec spec_;
    bool verify_;
    SortedSample sample_;
    CompensatedSum sum_x_;
    CompensatedSum pair_abs_;  // sum over ordered pairs |x_i - x_j|
    double welford_mean_ = 0.0;
    double welford_m2_ = 0.0;
    Phi phi_ = Phi::None;
    double phi_p_ = 0.0;
    CompensatedSum phi_sum_;
};

}  // namespace fb::func
