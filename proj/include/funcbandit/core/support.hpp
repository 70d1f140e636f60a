#pragma once

#include <string>

namespace fb {

// Closed interval [a, b] containing every outcome.
struct SupportInterval {
    double a = 0.0;
    double b = 1.0;

    SupportInterval() = default;
    SupportInterval(double lo, double hi);

    [[nodiscard]] bool contains(double x) const { return x >= a && x <= b; }
    [[nodiscard]] double width() const { return b - a; }

    friend bool operator==(const SupportInterval&, const SupportInterval&) = default;
};

// Throws DataError naming the value if x is outside the interval.
void require_in_support(const SupportInterval& support, double x);

std::string to_string(const SupportInterval& support);

}  // namespace fb
