#pragma once

#include <cmath>
#include <string>

#include "funcbandit/core/support.hpp"
#include "funcbandit/functionals/spec.hpp"

namespace fb::func {

struct KernelBounds {
    double sup_abs;          // sup |phi| on [a, b]
    double total_variation;  // of phi on [a, b]
};

// Single-argument kernels only.
inline double apply_kernel(const Kernel& k, double x) {
    switch (k.name) {
        case Kernel::Name::Identity: return x;
        case Kernel::Name::Power: return std::pow(x, k.p);
        case Kernel::Name::Log: return std::log(x);
        default: return x;
    }
}

inline double apply_kernel2(const Kernel& k, double x, double y) {
    if (k.name == Kernel::Name::AbsDiff) return std::fabs(x - y);
    const double d = x - y;
    return 0.5 * d * d;
}

KernelBounds kernel_bounds(const Kernel& k, const SupportInterval& s);

// Throws ConfigError when phi is not finite and continuous on [a, b].
void check_kernel_domain(const Kernel& k, const SupportInterval& s, const std::string& who);

}  // namespace fb::func
