#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fb {

// One deterministic generator. Every variate is produced by code in this
// file from raw 64-bit words of std::mt19937_64, so streams reproduce
// bit-for-bit across standard libraries (the std:: distribution classes are
// implementation-defined and are not used).
class RandomStream {
public:
    explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // Uniform on (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }
    // Uniform integer in [0, k), unbiased (rejection on the top multiple).
    std::size_t index(std::size_t k);

    // Standard normal, Marsaglia polar method.
    double normal();
    // Gamma(shape, 1), Marsaglia-Tsang squeeze; shape < 1 via the
    // U^{1/shape} boost.
    double gamma(double shape);
    // Beta(s1, s2). When one shape equals 1 the draw is by exact inversion
    // (1 - U^{1/s2} or U^{1/s1}); otherwise X/(X+Y) with gamma variates.
    double beta(double s1, double s2);

private:
    std::mt19937_64 engine_;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

// Stream coordinates. The outcome stream is a pure function of
// (master_seed, instance, replication, substream); distinct coordinates
// seed the engine through std::seed_seq with distinct word sequences.
struct RandomSource {
    std::uint64_t master_seed = 0;
    std::uint64_t instance = 0;
    std::uint64_t replication = 0;

    // Substream 0 carries policy randomization; substream 1 + k carries the
    // outcomes of arm k.
    [[nodiscard]] RandomStream stream(std::uint64_t substream) const;
    [[nodiscard]] RandomStream policy_stream() const { return stream(0); }
    [[nodiscard]] RandomStream arm_stream(std::size_t arm) const { return stream(1 + arm); }
};

}  // namespace fb
