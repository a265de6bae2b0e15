#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "subdiff/common.hpp"

namespace subdiff {

// Monotone cubic interpolation (Fritsch-Carlson limited slopes).  Used for
// tabulating kernel evaluations that are expensive Laplace integrals; the
// monotonicity limiter matters because convolution weights derived from a
// tabulated cumulative integral must stay nonnegative.
class PchipInterpolant {
  public:
    PchipInterpolant() = default;
    PchipInterpolant(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("pchip: need >= 2 matching nodes");
        for (size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("pchip: abscissae must increase");
        m_.resize(n);
        std::vector<double> d(n - 1);
        for (size_t i = 0; i + 1 < n; ++i)
            d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                const double w1 = 2 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                const double w2 = (x_[i + 1] - x_[i]) + 2 * (x_[i] - x_[i - 1]);
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // endpoint slopes: clip to preserve monotonicity of the first/last cell
        auto clip = [](double m, double del) {
            if (del == 0.0) return 0.0;
            if (m * del < 0) return 0.0;
            return std::abs(m) > 3 * std::abs(del) ? 3 * del : m;
        };
        m_[0] = clip(m_[0], d[0]);
        m_[n - 1] = clip(m_[n - 1], d[n - 2]);
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front() + m_.front() * (x - x_.front());
        if (x >= x_.back()) return y_.back() + m_.back() * (x - x_.back());
        size_t hi = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
        size_t lo = hi - 1;
        const double h = x_[hi] - x_[lo], s = (x - x_[lo]) / h;
        const double h00 = (1 + 2 * s) * sqr(1 - s), h10 = s * sqr(1 - s);
        const double h01 = sqr(s) * (3 - 2 * s), h11 = sqr(s) * (s - 1);
        return h00 * y_[lo] + h * h10 * m_[lo] + h01 * y_[hi] + h * h11 * m_[hi];
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, m_;
};

// log-log table of a positive function on [t_lo, t_hi]; evaluations outside
// the table extrapolate with the boundary power law (linear in log-log).
class LogLogTable {
  public:
    LogLogTable() = default;
    LogLogTable(const std::function<double(double)>& f, double t_lo, double t_hi,
                int knots_per_decade = 160) {
        if (!(t_lo > 0) || !(t_hi > t_lo))
            throw std::invalid_argument("LogLogTable: need 0 < t_lo < t_hi");
        const double llo = std::log(t_lo), lhi = std::log(t_hi);
        const int n = std::max(8, (int)std::ceil((lhi - llo) / std::log(10.0) *
                                                 knots_per_decade));
        std::vector<double> lx(n + 1), ly(n + 1);
        for (int i = 0; i <= n; ++i) {
            lx[i] = llo + (lhi - llo) * i / n;
            const double v = f(std::exp(lx[i]));
            if (!(v > 0) || !std::isfinite(v))
                throw numerical_error("LogLogTable: function must be positive/finite");
            ly[i] = std::log(v);
        }
        interp_ = PchipInterpolant(std::move(lx), std::move(ly));
    }

    double operator()(double t) const {
        if (!(t > 0)) throw std::invalid_argument("LogLogTable: t > 0");
        return std::exp(interp_(std::log(t)));
    }

  private:
    PchipInterpolant interp_;
};

} // namespace subdiff
