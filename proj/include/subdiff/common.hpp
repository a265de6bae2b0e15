#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace subdiff {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inf = std::numeric_limits<double>::infinity();

// Error taxonomy, mirrored by the CLI exit codes (2/3/4).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T> inline T sqr(T x) { return x * x; }

inline double rel_diff(double a, double b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// n points, log-uniform on [lo, hi]
inline std::vector<double> logspace(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("logspace: need 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("linspace: n >= 2");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    out.back() = hi;
    return out;
}

// Shortest representation with 17 significant digits; round-trips doubles and
// keeps CSV output byte-stable across runs.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace subdiff
