#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "funcbandit/core/empirical_cdf.hpp"
#include "funcbandit/core/support.hpp"

namespace fb {

// Growing multiset of observations with O(log m) insertion, rank and
// prefix-sum queries. Backed by a treap whose nodes hold one distinct value
// with its multiplicity, so heavily tied (discrete) samples stay small.
class SortedSample {
public:
    explicit SortedSample(SupportInterval support = {});

    // Throws DataError naming the value when x is outside the support.
    void insert(double x);

    [[nodiscard]] std::size_t size() const { return root_ == kNil ? 0 : nodes_[root_].size; }
    [[nodiscard]] bool empty() const { return size() == 0; }
    [[nodiscard]] double total() const { return root_ == kNil ? 0.0 : nodes_[root_].sum; }
    [[nodiscard]] const SupportInterval& support() const { return support_; }

    struct Prefix {
        std::size_t count = 0;
        double sum = 0.0;
    };
    // Count and sum of observations <= x (inclusive) or < x (strict).
    [[nodiscard]] Prefix prefix_le(double x) const;
    [[nodiscard]] Prefix prefix_lt(double x) const;

    // k-th smallest observation, 1-based.
    [[nodiscard]] double kth(std::size_t k) const;
    // Sum of the k smallest observations, 0 <= k <= size().
    [[nodiscard]] double sum_smallest(std::size_t k) const;

    // Sorted copy of all observations.
    [[nodiscard]] std::vector<double> sorted() const;
    [[nodiscard]] EmpiricalCdf to_ecdf() const;

private:
    static constexpr std::uint32_t kNil = 0xffffffffu;

    struct Node {
        double key;
        double sum;
        std::size_t mult;
        std::size_t size;
        std::uint32_t prio;
        std::uint32_t left = kNil;
        std::uint32_t right = kNil;
    };

    std::uint32_t insert_at(std::uint32_t node, double x);
    void pull(std::uint32_t node);
    std::uint32_t rotate_right(std::uint32_t node);
    std::uint32_t rotate_left(std::uint32_t node);
    std::uint32_t next_priority();

    std::vector<Node> nodes_;
    std::uint32_t root_ = kNil;
    std::uint64_t prio_state_ = 0x9e3779b97f4a7c15ULL;
    SupportInterval support_;
};

}  // namespace fb
