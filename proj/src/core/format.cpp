#include "funcbandit/core/format.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "funcbandit/errors.hpp"

namespace fb {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_short(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
    std::string s(text);
    if (s.empty()) throw ConfigError("empty value for " + std::string(what));
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw ConfigError("cannot parse '" + s + "' as a number for " + std::string(what));
    }
    return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
    std::string s(text);
    if (s.empty()) throw ConfigError("empty value for " + std::string(what));
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        // Accept integral values written in floating notation, e.g. 1e4.
        double d = parse_double(s, what);
        if (std::floor(d) != d || std::fabs(d) > 9.0e18) {
            throw ConfigError("expected an integer for " + std::string(what) + ", got '" + s + "'");
        }
        return static_cast<long long>(d);
    }
    return v;
}

}  // namespace fb
