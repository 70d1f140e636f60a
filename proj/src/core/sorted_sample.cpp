#include "funcbandit/core/sorted_sample.hpp"

#include <algorithm>
#include <cmath>

#include "funcbandit/errors.hpp"

namespace fb {

SortedSample::SortedSample(SupportInterval support) : support_(support) {}

std::uint32_t SortedSample::next_priority() {
    // xorshift64*; only the heap shape depends on it.
    prio_state_ ^= prio_state_ >> 12;
    prio_state_ ^= prio_state_ << 25;
    prio_state_ ^= prio_state_ >> 27;
    return static_cast<std::uint32_t>((prio_state_ * 0x2545F4914F6CDD1DULL) >> 32);
}

void SortedSample::pull(std::uint32_t node) {
    Node& n = nodes_[node];
    n.size = n.mult;
    n.sum = n.key * static_cast<double>(n.mult);
    if (n.left != kNil) {
        n.size += nodes_[n.left].size;
        n.sum += nodes_[n.left].sum;
    }
    if (n.right != kNil) {
        n.size += nodes_[n.right].size;
        n.sum += nodes_[n.right].sum;
    }
}

std::uint32_t SortedSample::rotate_right(std::uint32_t node) {
    const std::uint32_t l = nodes_[node].left;
    nodes_[node].left = nodes_[l].right;
    nodes_[l].right = node;
    pull(node);
    pull(l);
    return l;
}

std::uint32_t SortedSample::rotate_left(std::uint32_t node) {
    const std::uint32_t r = nodes_[node].right;
    nodes_[node].right = nodes_[r].left;
    nodes_[r].left = node;
    pull(node);
    pull(r);
    return r;
}

std::uint32_t SortedSample::insert_at(std::uint32_t node, double x) {
    if (node == kNil) {
        nodes_.push_back(Node{x, x, 1, 1, next_priority()});
        return static_cast<std::uint32_t>(nodes_.size() - 1);
    }
    if (x == nodes_[node].key) {
        ++nodes_[node].mult;
        pull(node);
        return node;
    }
    if (x < nodes_[node].key) {
        const std::uint32_t child = insert_at(nodes_[node].left, x);
        nodes_[node].left = child;
        if (nodes_[child].prio > nodes_[node].prio) return rotate_right(node);
    } else {
        const std::uint32_t child = insert_at(nodes_[node].right, x);
        nodes_[node].right = child;
        if (nodes_[child].prio > nodes_[node].prio) return rotate_left(node);
    }
    pull(node);
    return node;
}

void SortedSample::insert(double x) {
    if (std::isnan(x)) throw DataError("observation is NaN");
    require_in_support(support_, x);
    root_ = insert_at(root_, x);
}

SortedSample::Prefix SortedSample::prefix_le(double x) const {
    Prefix out;
    std::uint32_t node = root_;
    while (node != kNil) {
        const Node& n = nodes_[node];
        if (n.key <= x) {
            out.count += n.mult + (n.left == kNil ? 0 : nodes_[n.left].size);
            out.sum += n.key * static_cast<double>(n.mult) + (n.left == kNil ? 0.0 : nodes_[n.left].sum);
            node = n.right;
        } else {
            node = n.left;
        }
    }
    return out;
}

SortedSample::Prefix SortedSample::prefix_lt(double x) const {
    Prefix out;
    std::uint32_t node = root_;
    while (node != kNil) {
        const Node& n = nodes_[node];
        if (n.key < x) {
            const std::size_t left_count = n.left == kNil ? 0 : nodes_[n.left].size;
            const double left_sum = n.left == kNil ? 0.0 : nodes_[n.left].sum;
            out.count += left_count + n.mult;
            out.sum += left_sum + n.key * static_cast<double>(n.mult);
            node = n.right;
        } else {
            node = n.left;
        }
    }
    return out;
}

double SortedSample::kth(std::size_t k) const {
    if (k == 0 || k > size()) throw ConfigError("order statistic index out of range");
    std::uint32_t node = root_;
    for (;;) {
        const Node& n = nodes_[node];
        const std::size_t left_count = n.left == kNil ? 0 : nodes_[n.left].size;
        if (k <= left_count) {
            node = n.left;
        } else if (k <= left_count + n.mult) {
            return n.key;
        } else {
            k -= left_count + n.mult;
            node = n.right;
        }
    }
}

double SortedSample::sum_smallest(std::size_t k) const {
    if (k > size()) throw ConfigError("sum_smallest: k exceeds sample size");
    double out = 0.0;
    std::uint32_t node = root_;
    while (k > 0) {
        const Node& n = nodes_[node];
        const std::size_t left_count = n.left == kNil ? 0 : nodes_[n.left].size;
        if (k <= left_count) {
            node = n.left;
        } else {
            if (n.left != kNil) out += nodes_[n.left].sum;
            const std::size_t here = std::min(k - left_count, n.mult);
            out += n.key * static_cast<double>(here);
            k -= left_count + here;
            node = n.right;
        }
    }
    return out;
}

std::vector<double> SortedSample::sorted() const {
    std::vector<double> out;
    out.reserve(size());
    std::vector<std::uint32_t> stack;
    std::uint32_t node = root_;
    while (node != kNil || !stack.empty()) {
        while (node != kNil) {
            stack.push_back(node);
            node = nodes_[node].left;
        }
        node = stack.back();
        stack.pop_back();
        out.insert(out.end(), nodes_[node].mult, nodes_[node].key);
        node = nodes_[node].right;
    }
    return out;
}

EmpiricalCdf SortedSample::to_ecdf() const {
    if (empty()) throw DataError("no observations");
    return EmpiricalCdf::from_sorted_unchecked(sorted(), support_);
}

}  // namespace fb
