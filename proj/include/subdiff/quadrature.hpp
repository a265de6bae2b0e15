#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>

#include "subdiff/common.hpp"

namespace subdiff {

// Adaptive Gauss-Kronrod on a finite interval.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10) {
    if (a == b) return 0.0;
    double err = 0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 12, rel_tol, &err);
    if (!std::isfinite(val))
        throw numerical_error("quadrature: non-finite integral");
    return val;
}

enum class LaplaceWeight {
    point,      // e^{-pt}            -> value of the transform pair member
    cumulative, // (1 - e^{-pt}) / p  -> its running integral from 0
    derivative, // p e^{-pt}          -> minus its derivative
};

// (1/pi) * Integral_0^inf w(p,t) H(p) dp evaluated through p = e^s.  The
// window [s_lo, s_hi] is grown in fixed chunks until two consecutive chunks
// on each side contribute below tol relative to the running total, so the
// dropped tails stay under ~1e-8 of the value for the algebraically decaying
// integrands these spectral functions produce.
template <class HFun>
double laplace_integral(const HFun& H, double t, LaplaceWeight w,
                        double rel_tol = 1e-9) {
    if (!(t > 0)) throw std::invalid_argument("laplace_integral: t > 0 required");

    // |s| stays below 600 so p^a and the moment sums remain representable.
    const double s_cap = 600.0;

    auto g = [&](double s) {
        const double p = std::exp(s);
        double weight;
        switch (w) {
        case LaplaceWeight::point:
            if (p * t > 745.0) return 0.0;
            weight = std::exp(-p * t);
            break;
        case LaplaceWeight::cumulative: {
            const double pt = p * t;
            weight = pt < 1e-8 ? t * (1.0 - 0.5 * pt) : -std::expm1(-pt) / p;
            break;
        }
        default:
            if (p * t > 745.0) return 0.0;
            weight = p * std::exp(-p * t);
            break;
        }
        return weight * H(p) * p; // extra p: dp = e^s ds
    };

    const double chunk = 8.0;
    double center = std::clamp(-std::log(t), -s_cap + chunk, s_cap - chunk);
    double s_lo = center - chunk, s_hi = center + chunk;
    double total = integrate(g, s_lo, s_hi, rel_tol);

    const double tail_tol = 1e-9;
    for (int side = 0; side < 2; ++side) {
        int calm = 0;
        bool capped = false;
        for (int it = 0; it < 150 && calm < 2; ++it) {
            double a, b;
            if (side == 0) { a = s_lo - chunk; b = s_lo; }
            else           { a = s_hi; b = s_hi + chunk; }
            if (std::max(std::abs(a), std::abs(b)) > s_cap) { capped = true; break; }
            if (side == 0) s_lo = a; else s_hi = b;
            double piece = integrate(g, a, b, rel_tol);
            total += piece;
            calm = (std::abs(piece) <= tail_tol * std::max(std::abs(total), 1e-300))
                       ? calm + 1 : 0;
        }
        if (calm < 2 && !capped)
            throw numerical_error("laplace_integral: tail did not settle");
    }
    if (!std::isfinite(total))
        throw numerical_error("laplace_integral: non-finite result");
    return total / pi;
}

} // namespace subdiff
