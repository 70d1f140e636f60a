#include "funcbandit/core/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/beta.hpp>

#include "funcbandit/core/format.hpp"
#include "funcbandit/errors.hpp"

namespace fb {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability_vector(const std::vector<double>& p, const char* what) {
    if (p.empty()) throw ConfigError(std::string(what) + ": empty probability vector");
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError(std::string(what) + ": negative or non-finite probability");
        total += x;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
        throw ConfigError(std::string(what) + ": probabilities sum to " + format_double(total) + ", not 1");
    }
}

// Index of the first cumulative weight exceeding u.
std::size_t pick(const std::vector<double>& probs, double u) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) return k;
    }
    return probs.size() - 1;
}

double beta_cdf(const BetaArm& b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (b.shape1 == 1.0) return 1.0 - std::pow(1.0 - x, b.shape2);
    if (b.shape2 == 1.0) return std::pow(x, b.shape1);
    return boost::math::cdf(boost::math::beta_distribution<double>(b.shape1, b.shape2), x);
}

double beta_quantile(const BetaArm& b, double alpha) {
    if (alpha >= 1.0) return 1.0;
    if (b.shape1 == 1.0) return 1.0 - std::pow(1.0 - alpha, 1.0 / b.shape2);
    if (b.shape2 == 1.0) return std::pow(alpha, 1.0 / b.shape1);
    return boost::math::quantile(boost::math::beta_distribution<double>(b.shape1, b.shape2), alpha);
}

// Limit of the Beta density at an endpoint: the shape attached to that
// endpoint decides (0 if > 1, infinite if < 1, 1/B otherwise).
double beta_endpoint_density(double near_shape, double far_shape) {
    if (near_shape > 1.0) return 0.0;
    if (near_shape < 1.0) return kInf;
    return 1.0 / std::beta(1.0, far_shape);
}

}  // namespace

ArmDistribution ArmDistribution::beta(double shape1, double shape2) {
    if (!(shape1 > 0.0) || !(shape2 > 0.0) || !std::isfinite(shape1) || !std::isfinite(shape2)) {
        throw ConfigError("Beta shapes must be positive, got (" + format_double(shape1) + ", " + format_double(shape2) + ")");
    }
    return ArmDistribution(BetaArm{shape1, shape2});
}

ArmDistribution ArmDistribution::point_mass(double value) {
    if (!std::isfinite(value)) throw ConfigError("point mass location must be finite");
    return ArmDistribution(PointMassArm{value});
}

ArmDistribution ArmDistribution::discrete(std::vector<double> values, std::vector<double> probs) {
    if (values.size() != probs.size()) throw ConfigError("discrete arm: values and probabilities differ in length");
    require_probability_vector(probs, "discrete arm");
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("discrete arm: non-finite value");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    DiscreteArm d;
    for (std::size_t k : order) {
        if (!d.values.empty() && d.values.back() == values[k]) {
            d.probs.back() += probs[k];
        } else {
            d.values.push_back(values[k]);
            d.probs.push_back(probs[k]);
        }
    }
    return ArmDistribution(std::move(d));
}

ArmDistribution ArmDistribution::resampler(EmpiricalCdf pool) {
    return ArmDistribution(ResamplerArm{std::make_shared<const EmpiricalCdf>(std::move(pool))});
}

ArmDistribution ArmDistribution::mixture(std::vector<double> weights, std::vector<ArmDistribution> components) {
    if (weights.size() != components.size()) throw ConfigError("mixture: weights and components differ in length");
    require_probability_vector(weights, "mixture");
    return ArmDistribution(MixtureArm{std::move(weights), std::move(components)});
}

double ArmDistribution::min_value() const {
    return std::visit(overloaded{
                          [](const BetaArm&) { return 0.0; },
                          [](const PointMassArm& p) { return p.value; },
                          [](const DiscreteArm& d) {
                              for (std::size_t k = 0; k < d.values.size(); ++k)
                                  if (d.probs[k] > 0.0) return d.values[k];
                              return d.values.front();
                          },
                          [](const ResamplerArm& r) { return r.pool->samples().front(); },
                          [](const MixtureArm& m) {
                              double lo = kInf;
                              for (std::size_t k = 0; k < m.components.size(); ++k)
                                  if (m.weights[k] > 0.0) lo = std::min(lo, m.components[k].min_value());
                              return lo;
                          },
                      },
                      v_);
}

double ArmDistribution::max_value() const {
    return std::visit(overloaded{
                          [](const BetaArm&) { return 1.0; },
                          [](const PointMassArm& p) { return p.value; },
                          [](const DiscreteArm& d) {
                              for (std::size_t k = d.values.size(); k-- > 0;)
                                  if (d.probs[k] > 0.0) return d.values[k];
                              return d.values.back();
                          },
                          [](const ResamplerArm& r) { return r.pool->samples().back(); },
                          [](const MixtureArm& m) {
                              double hi = -kInf;
                              for (std::size_t k = 0; k < m.components.size(); ++k)
                                  if (m.weights[k] > 0.0) hi = std::max(hi, m.components[k].max_value());
                              return hi;
                          },
                      },
                      v_);
}

void ArmDistribution::require_within(const SupportInterval& support) const {
    if (!support.contains(min_value()) || !support.contains(max_value())) {
        throw DataError("arm " + describe() + " puts mass outside support " + to_string(support));
    }
}

double ArmDistribution::draw(RandomStream& rng) const {
    return std::visit(overloaded{
                          [&](const BetaArm& b) { return rng.beta(b.shape1, b.shape2); },
                          [](const PointMassArm& p) { return p.value; },
                          [&](const DiscreteArm& d) { return d.values[pick(d.probs, rng.uniform())]; },
                          [&](const ResamplerArm& r) { return r.pool->samples()[rng.index(r.pool->size())]; },
                          [&](const MixtureArm& m) { return m.components[pick(m.weights, rng.uniform())].draw(rng); },
                      },
                      v_);
}

double ArmDistribution::cdf(double x) const {
    return std::visit(overloaded{
                          [&](const BetaArm& b) { return beta_cdf(b, x); },
                          [&](const PointMassArm& p) { return x >= p.value ? 1.0 : 0.0; },
                          [&](const DiscreteArm& d) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < d.values.size() && d.values[k] <= x; ++k) acc += d.probs[k];
                              return std::min(acc, 1.0);
                          },
                          [&](const ResamplerArm& r) { return (*r.pool)(x); },
                          [&](const MixtureArm& m) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < m.components.size(); ++k) acc += m.weights[k] * m.components[k].cdf(x);
                              return std::min(acc, 1.0);
                          },
                      },
                      v_);
}

double ArmDistribution::quantile(double alpha) const {
    if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("quantile level must lie in (0, 1], got " + format_double(alpha));
    return std::visit(
        overloaded{
            [&](const BetaArm& b) { return beta_quantile(b, alpha); },
            [](const PointMassArm& p) { return p.value; },
            [&](const DiscreteArm& d) {
                double acc = 0.0;
                for (std::size_t k = 0; k < d.values.size(); ++k) {
                    acc += d.probs[k];
                    if (acc >= alpha && d.probs[k] > 0.0) return d.values[k];
                }
                return max_value();
            },
            [&](const ResamplerArm& r) { return ecdf_quantile(*r.pool, alpha); },
            [&](const MixtureArm&) {
                // Bisection on the mixture cdf for inf{x : F(x) >= alpha}.
                double lo = min_value();
                double hi = max_value();
                if (cdf(lo) >= alpha) return lo;
                for (int it = 0; it < 200 && hi > lo; ++it) {
                    const double mid = lo + 0.5 * (hi - lo);
                    if (mid <= lo || mid >= hi) break;
                    if (cdf(mid) >= alpha) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return hi;
            },
        },
        v_);
}

double ArmDistribution::mean() const {
    return std::visit(overloaded{
                          [](const BetaArm& b) { return b.shape1 / (b.shape1 + b.shape2); },
                          [](const PointMassArm& p) { return p.value; },
                          [](const DiscreteArm& d) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < d.values.size(); ++k) acc += d.values[k] * d.probs[k];
                              return acc;
                          },
                          [](const ResamplerArm& r) { return r.pool->mean(); },
                          [](const MixtureArm& m) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k < m.components.size(); ++k) acc += m.weights[k] * m.components[k].mean();
                              return acc;
                          },
                      },
                      v_);
}

std::optional<ArmDistribution::DensityBounds> ArmDistribution::density_bounds(const SupportInterval& support) const {
    const auto* b = std::get_if<BetaArm>(&v_);
    if (b == nullptr) return std::nullopt;
    std::vector<double> candidates{beta_endpoint_density(b->shape1, b->shape2),
                                   beta_endpoint_density(b->shape2, b->shape1)};
    const double denom = b->shape1 + b->shape2 - 2.0;
    if (denom != 0.0) {
        const double x = (b->shape1 - 1.0) / denom;
        if (x > 0.0 && x < 1.0) {
            candidates.push_back(boost::math::pdf(boost::math::beta_distribution<double>(b->shape1, b->shape2), x));
        }
    }
    DensityBounds out{*std::min_element(candidates.begin(), candidates.end()),
                      *std::max_element(candidates.begin(), candidates.end())};
    // Outside [0, 1] the density vanishes.
    if (support.a < 0.0 || support.b > 1.0) out.lower = 0.0;
    return out;
}

std::string ArmDistribution::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const BetaArm& b) { os << "beta(" << format_double(b.shape1) << "," << format_double(b.shape2) << ")"; },
                   [&](const PointMassArm& p) { os << "point(" << format_double(p.value) << ")"; },
                   [&](const DiscreteArm& d) { os << "discrete(" << d.values.size() << " atoms)"; },
                   [&](const ResamplerArm& r) { os << "empirical(" << r.pool->size() << " obs)"; },
                   [&](const MixtureArm& m) { os << "mixture(" << m.components.size() << " components)"; },
               },
               v_);
    return os.str();
}

std::vector<double> sample_arm(const ArmDistribution& dist, const RandomSource& rng, std::size_t count) {
    if (count == 0) throw ConfigError("sample_arm: count must be positive");
    RandomStream stream = rng.arm_stream(0);
    std::vector<double> out(count);
    for (auto& x : out) x = dist.draw(stream);
    return out;
}

EmpiricalCdf true_cdf_grid(const ArmDistribution& dist, std::size_t grid_size, SupportInterval support) {
    if (grid_size < 2) throw ConfigError("true_cdf_grid: grid size must be at least 2");
    dist.require_within(support);
    std::vector<double> xs(grid_size);
    const double g = static_cast<double>(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
        xs[j] = dist.quantile((static_cast<double>(j) + 0.5) / g);
    }
    // Quantiles of a monotone function are already sorted; clamp guards
    // last-ulp excursions of numerical inverses.
    for (auto& x : xs) x = std::clamp(x, support.a, support.b);
    std::sort(xs.begin(), xs.end());
    return EmpiricalCdf::from_sorted_unchecked(std::move(xs), support);
}

}  // namespace fb
