#include "funcbandit/core/support.hpp"

#include <cmath>

#include "funcbandit/core/format.hpp"
#include "funcbandit/errors.hpp"

namespace fb {

SupportInterval::SupportInterval(double lo, double hi) : a(lo), b(hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ConfigError("support interval requires finite a < b, got " + to_string(*this));
    }
}

void require_in_support(const SupportInterval& support, double x) {
    if (!support.contains(x)) {
        throw DataError("observation " + format_double(x) + " outside support " + to_string(support));
    }
}

std::string to_string(const SupportInterval& support) {
    return "[" + format_double(support.a) + ", " + format_double(support.b) + "]";
}

}  // namespace fb
