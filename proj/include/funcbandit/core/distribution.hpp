#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "funcbandit/core/empirical_cdf.hpp"
#include "funcbandit/core/random.hpp"
#include "funcbandit/core/support.hpp"

namespace fb {

class ArmDistribution;

struct BetaArm {
    double shape1 = 1.0;
    double shape2 = 1.0;
};

struct PointMassArm {
    double value = 0.0;
};

struct DiscreteArm {
    std::vector<double> values;
    std::vector<double> probs;
};

// Uniform draws with replacement from a fixed pool of observations.
struct ResamplerArm {
    std::shared_ptr<const EmpiricalCdf> pool;
};

struct MixtureArm {
    std::vector<double> weights;
    std::vector<ArmDistribution> components;
};

// Generative law of one treatment's outcomes.
class ArmDistribution {
public:
    using Variant = std::variant<BetaArm, PointMassArm, DiscreteArm, ResamplerArm, MixtureArm>;

    static ArmDistribution beta(double shape1, double shape2);
    static ArmDistribution point_mass(double value);
    static ArmDistribution discrete(std::vector<double> values, std::vector<double> probs);
    static ArmDistribution resampler(EmpiricalCdf pool);
    static ArmDistribution mixture(std::vector<double> weights, std::vector<ArmDistribution> components);

    [[nodiscard]] const Variant& variant() const { return v_; }

    // Smallest interval holding all mass.
    [[nodiscard]] double min_value() const;
    [[nodiscard]] double max_value() const;
    // Throws DataError if any mass lies outside `support`.
    void require_within(const SupportInterval& support) const;

    [[nodiscard]] double draw(RandomStream& rng) const;
    [[nodiscard]] double cdf(double x) const;
    // inf{x : F(x) >= alpha}, alpha in (0, 1].
    [[nodiscard]] double quantile(double alpha) const;
    [[nodiscard]] double mean() const;

    // Infimum and supremum of the Lebesgue density on (a, b), or nullopt when
    // the law has atoms (no density exists).
    struct DensityBounds {
        double lower;
        double upper;
    };
    [[nodiscard]] std::optional<DensityBounds> density_bounds(const SupportInterval& support) const;

    [[nodiscard]] std::string describe() const;

private:
    explicit ArmDistribution(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// `count` i.i.d. draws from the arm's law on the stream rng.arm_stream(0).
std::vector<double> sample_arm(const ArmDistribution& dist, const RandomSource& rng, std::size_t count);

// Discrete cdf with mass 1/grid_size at the exact quantiles
// q_{(j - 0.5)/grid_size}, j = 1..grid_size; ||F - F_grid||_inf <= 1/grid_size.
EmpiricalCdf true_cdf_grid(const ArmDistribution& dist, std::size_t grid_size, SupportInterval support = {});

}  // namespace fb
