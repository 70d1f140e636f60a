#include "kernels.hpp"

#include <algorithm>

#include "funcbandit/errors.hpp"

namespace fb::func {

KernelBounds kernel_bounds(const Kernel& k, const SupportInterval& s) {
    switch (k.name) {
        case Kernel::Name::Identity:
            return {std::max(std::fabs(s.a), std::fabs(s.b)), s.b - s.a};
        case Kernel::Name::Power:
            // monotone on [a, b] with a >= 0
            return {std::pow(s.b, k.p), std::pow(s.b, k.p) - std::pow(s.a, k.p)};
        case Kernel::Name::Log:
            return {std::max(std::fabs(std::log(s.a)), std::fabs(std::log(s.b))), std::log(s.b) - std::log(s.a)};
        case Kernel::Name::AbsDiff:
            return {s.b - s.a, s.b - s.a};
        case Kernel::Name::HalfSquaredDiff:
            return {0.5 * (s.b - s.a) * (s.b - s.a), 0.5 * (s.b - s.a) * (s.b - s.a)};
    }
    return {0.0, 0.0};
}

void check_kernel_domain(const Kernel& k, const SupportInterval& s, const std::string& who) {
    if (k.name == Kernel::Name::Power) {
        if (!(std::isfinite(k.p) && k.p > 0.0)) throw ConfigError(who + ": power kernel exponent must be positive");
        if (s.a < 0.0) throw ConfigError(who + ": power kernel requires a >= 0");
    }
    if (k.name == Kernel::Name::Log && !(s.a > 0.0)) throw ConfigError(who + ": log kernel requires a > 0");
}

}  // namespace fb::func
