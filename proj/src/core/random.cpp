#include "funcbandit/core/random.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace fb {

std::size_t RandomStream::index(std::size_t k) {
    if (k <= 1) return 0;
    const auto range = static_cast<std::uint64_t>(k);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % range);
}

double RandomStream::normal() {
    if (has_spare_normal_) {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    has_spare_normal_ = true;
    return u * factor;
}

double RandomStream::gamma(double shape) {
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double RandomStream::beta(double s1, double s2) {
    if (s1 == 1.0 && s2 == 1.0) return uniform();
    if (s1 == 1.0) return 1.0 - std::pow(uniform_open(), 1.0 / s2);
    if (s2 == 1.0) return std::pow(uniform_open(), 1.0 / s1);
    const double x = gamma(s1);
    const double y = gamma(s2);
    const double sum = x + y;
    if (sum == 0.0) return uniform() < s1 / (s1 + s2) ? 1.0 : 0.0;  // both underflowed
    return x / sum;
}

RandomStream RandomSource::stream(std::uint64_t substream) const {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::array<std::uint32_t, 9> words{0x66625f31u,  // domain tag
                                       lo(master_seed), hi(master_seed), lo(instance),  hi(instance),
                                       lo(replication), hi(replication), lo(substream), hi(substream)};
    std::seed_seq seq(words.begin(), words.end());
    return RandomStream(seq);
}

}  // namespace fb
