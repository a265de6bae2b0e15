#pragma once

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "subdiff/common.hpp"
#include "subdiff/quadrature.hpp"

// Relaxation functions of single-order problems.  Two independent routes are
// provided on purpose: closed forms through erfc at order 1/2, and a spectral
// integral for general order, so each can serve as a check on the other.

namespace subdiff {

// e^{x^2} erfc(x) without overflow; asymptotic series past the exp range.
inline double scaled_erfc(double x) {
    if (!(x >= 0)) throw std::invalid_argument("scaled_erfc: x >= 0 required");
    if (x < 25.0) return std::exp(x * x) * boost::math::erfc(x);
    const double ix2 = 1.0 / (x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * 0.5 * ix2;
        sum += term;
    }
    return sum / (x * std::sqrt(pi));
}

// E_{1/2}(-x) = e^{x^2} erfc(x) for x >= 0.
inline double ml_e_half(double x) { return scaled_erfc(x); }

// E_{1/2,1/2}(-x) = 1/sqrt(pi) - x e^{x^2} erfc(x) for x >= 0.
inline double ml_e_half_half(double x) {
    if (!(x >= 0)) throw std::invalid_argument("ml_e_half_half: x >= 0 required");
    return 1.0 / std::sqrt(pi) - x * scaled_erfc(x);
}

// E_a(-x) for 0 < a < 1 and x >= 0 through the completely monotone spectral
// density of the relaxation function: with t = x^{1/a},
// E_a(-t^a) = (sin(a pi)/pi) Int_0^inf r^{a-1} e^{-t r} /
// (r^{2a} + 2 r^a cos(a pi) + 1) dr.  Head and tail are mapped onto (0,1]
// with power substitutions so the integrands are smooth.
inline double mittag_leffler_neg(double alpha, double x) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("mittag_leffler_neg: order must be in (0,1)");
    if (!(x >= 0.0))
        throw std::invalid_argument("mittag_leffler_neg: x >= 0 required");
    if (x == 0.0) return 1.0;

    if (x >= 50.0) {
        // Algebraic-tail expansion  sum_k (-1)^{k+1} x^{-k} / Gamma(1 - k a),
        // with the reciprocal gamma written through reflection so the poles
        // at integer k a contribute exact zeros.  Truncated at the smallest
        // term; at x >= 50 that is far below double precision.
        double sum = 0.0, prev = inf;
        for (int k = 1; k <= 80; ++k) {
            const double mag =
                std::exp(boost::math::lgamma(k * alpha) - k * std::log(x)) / pi;
            if (mag > prev) break; // past the optimal truncation point
            sum += (k % 2 == 1 ? 1.0 : -1.0) * std::sin(pi * k * alpha) * mag;
            if (mag < 1e-18 * std::abs(sum)) break;
            prev = mag;
        }
        if (!(sum >= 0.0) || !(sum <= 1.0))
            throw numerical_error("mittag_leffler_neg: tail value escaped [0,1]");
        return sum;
    }

    const double t = std::pow(x, 1.0 / alpha);
    const double c = std::cos(alpha * pi);
    const double front = std::sin(alpha * pi) / pi;
    const int m = std::max(1, (int)std::ceil(2.0 / alpha));

    // r in (0,1]: r = s^m, integrand  m s^{m a - 1} e^{-t s^m} / Q(s^m).
    auto head = [&](double s) {
        const double r = std::pow(s, m);
        const double ra = std::pow(r, alpha);
        const double q = ra * ra + 2.0 * ra * c + 1.0;
        const double e = t * r;
        if (e > 700.0) return 0.0;
        return m * std::pow(s, m * alpha - 1.0) * std::exp(-e) / q;
    };
    // r in [1,inf): r = w^{-m}, integrand  m w^{m a - 1} e^{-t/w^m} / Q~(w^m).
    auto tail = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double v = std::pow(w, m);
        const double e = t / v;
        if (e > 700.0) return 0.0;
        const double va = std::pow(v, alpha);
        const double q = 1.0 + 2.0 * va * c + va * va;
        return m * std::pow(w, m * alpha - 1.0) * std::exp(-e) / q;
    };
    const double val =
        front * (integrate(head, 0.0, 1.0, 1e-12) + integrate(tail, 0.0, 1.0, 1e-12));
    if (!(val >= 0.0) || !(val <= 1.0 + 1e-12))
        throw numerical_error("mittag_leffler_neg: value escaped [0,1]");
    return std::min(val, 1.0);
}

} // namespace subdiff
