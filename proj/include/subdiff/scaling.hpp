#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "subdiff/common.hpp"
#include "subdiff/kernels.hpp"

namespace subdiff {

// ---------------------------------------------------------------------------
// space-time boxes
// ---------------------------------------------------------------------------

// Axis-aligned space-time box, half-open in time (t_lo, t_hi] and closed in
// space [x_lo, x_hi].  The half-open time side keeps adjacent windows
// disjoint.
struct Box {
    double t_lo = 0, t_hi = 0;
    double x_lo = 0, x_hi = 0;

    bool contains(double t, double x) const {
        return t > t_lo && t <= t_hi && x >= x_lo && x <= x_hi;
    }
    double time_extent() const { return t_hi - t_lo; }
    double space_extent() const { return x_hi - x_lo; }
};

// Parameters of the comparison cylinder (t0, t0 + 2 tau Phi(2r)] x [x0 +- r].
struct CylinderSpec {
    double t0 = 0.0;   // bottom time
    double x0 = 0.0;   // spatial center
    double r = 0.25;   // spatial radius
    double delta = 0.5; // window shape parameter in (0,1)
    double tau = 0.5;  // time-scale multiplier in (0,1]

    void validate() const {
        if (!(t0 >= 0)) throw invariant_error("cylinder: t0 must be >= 0");
        if (!(r > 0)) throw invariant_error("cylinder: r must be > 0");
        if (!(delta > 0 && delta < 1))
            throw invariant_error("cylinder: delta must lie in (0,1), got " +
                                  std::to_string(delta));
        if (!(tau > 0 && tau <= 1))
            throw invariant_error("cylinder: tau must lie in (0,1], got " +
                                  std::to_string(tau));
    }
};

// The two sub-windows of the comparison cylinder that a Harnack-type
// estimate relates: an early window q_minus right above the bottom time and
// a late window q_plus at the top, separated by a waiting period whose
// length is controlled by delta.
struct HarnackBoxes {
    Box full;    // (t0, t0 + 2 tau phi2r] x [x0 - r, x0 + r]
    Box q_minus; // (t0, t0 + delta tau phi2r] x [x0 - delta r, x0 + delta r]
    Box q_plus;  // (t0 + (2 - delta) tau phi2r, t0 + 2 tau phi2r] x same
};

inline HarnackBoxes make_boxes(double t0, double x0, double r, double tau,
                               double delta, double phi2r) {
    if (!(r > 0)) throw invariant_error("make_boxes: r must be > 0");
    if (!(tau > 0 && tau <= 1))
        throw invariant_error("make_boxes: tau must lie in (0,1]");
    if (!(delta > 0 && delta < 1))
        throw invariant_error("make_boxes: delta must lie in (0,1), got " +
                              std::to_string(delta));
    if (!(phi2r > 0)) throw invariant_error("make_boxes: phi2r must be > 0");
    const double span = tau * phi2r;
    HarnackBoxes b;
    b.full = Box{t0, t0 + 2.0 * span, x0 - r, x0 + r};
    b.q_minus = Box{t0, t0 + delta * span, x0 - delta * r, x0 + delta * r};
    b.q_plus = Box{t0 + (2.0 - delta) * span, t0 + 2.0 * span,
                   x0 - delta * r, x0 + delta * r};
    return b;
}

// Backward cylinder hanging from its top time t1, with spatial radius rho*r
// and time extent theta * phi(2 rho r): shrinking rho by powers of two
// produces the nested boxes that oscillation-decay estimates walk down.
inline Box nested_cylinder(double t1, double x1, double rho, double r,
                           double theta, double phi_2rho_r) {
    if (!(rho > 0 && rho <= 1))
        throw invariant_error("nested_cylinder: rho must lie in (0,1]");
    if (!(theta > 0 && theta <= 1))
        throw invariant_error("nested_cylinder: theta must lie in (0,1]");
    if (!(r > 0)) throw invariant_error("nested_cylinder: r must be > 0");
    if (!(phi_2rho_r > 0))
        throw invariant_error("nested_cylinder: phi_2rho_r must be > 0");
    return Box{t1 - theta * phi_2rho_r, t1, x1 - rho * r, x1 + rho * r};
}

// ---------------------------------------------------------------------------
// the intrinsic time scale Phi
// ---------------------------------------------------------------------------

// Solves (1 * l)(Phi(r)) = r^2, i.e. k1(Phi(r)) = r^{-2}, for the intrinsic
// waiting time Phi(r) of a kernel pair.  (1 * l) is continuous, strictly
// increasing and vanishes at zero, so the root is unique whenever r^2 stays
// below the saturation level sup_t (1 * l)(t); kernels with a bounded
// cumulative expose that ceiling through r0 = sqrt((1 * l)(inf)) and phi()
// refuses radii at or beyond it.
class PhiSolver {
  public:
    double rel_tol = 1e-10;

    explicit PhiSolver(const KernelPair& pair, double rel_tol_ = 1e-10)
        : rel_tol(rel_tol_),
          cum_([pair](double t) { return pair.one_conv_l(t); }),
          point_([pair](double t) { return pair.l(t); }),
          r0_(pair.r0()) {}

    PhiSolver(std::function<double(double)> one_conv_l,
              std::function<double(double)> l, double r0 = inf,
              double rel_tol_ = 1e-10)
        : rel_tol(rel_tol_), cum_(std::move(one_conv_l)),
          point_(std::move(l)), r0_(r0) {}

    double saturation_radius() const { return r0_; }

    double phi(double r) const {
        if (!(r > 0)) throw invariant_error("phi: r must be > 0");
        if (r >= 0.999 * r0_)
            throw invariant_error(
                "phi: radius " + std::to_string(r) +
                " is at or beyond the saturation radius " + std::to_string(r0_) +
                "; (1*l) never reaches r^2 there");
        const double target = r * r;

        // Bracket the root, expanding/shrinking by decades from s = 1.
        double lo = 1.0, hi = 1.0;
        double f_hi = cum_(hi) - target;
        if (f_hi < 0) {
            while (f_hi < 0) {
                hi *= 10.0;
                if (hi > 1e12)
                    throw numerical_error("phi: (1*l) did not reach r^2 = " +
                                          std::to_string(target) +
                                          " before t = 1e12 (radius beyond reach)");
                f_hi = cum_(hi) - target;
            }
            lo = hi / 10.0;
        } else {
            while (cum_(lo) - target > 0) {
                lo /= 10.0;
                if (lo < 1e-300)
                    throw numerical_error("phi: root underflowed below 1e-300");
            }
            hi = std::min(1.0, lo * 10.0);
        }

        // Safeguarded Newton: d/ds (1*l)(s) = l(s); fall back to bisection
        // whenever the Newton step leaves the bracket.
        const double step_tol = std::max(1e-15, 0.01 * rel_tol);
        double s = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            const double f = cum_(s) - target;
            if (f > 0) hi = s; else lo = s;
            const double deriv = point_(s);
            double s_next = (deriv > 0 && std::isfinite(deriv)) ? s - f / deriv : s;
            if (!(s_next > lo && s_next < hi)) s_next = 0.5 * (lo + hi);
            if (std::abs(s_next - s) <= step_tol * s_next) { s = s_next; break; }
            s = s_next;
        }
        return s;
    }

    // Largest admissible radius: r* with Phi(2 r*) = min{1, t0, ttilde0},
    // i.e. r* = (1/2) sqrt((1*l)(T*)).  t0 and ttilde0 are the horizons on
    // which the kernel's comparability and derivative bounds were certified.
    double r_star(double t0 = 1.0, double ttilde0 = 1.0) const {
        if (!(t0 > 0) || !(ttilde0 > 0))
            throw invariant_error("r_star: t0 and ttilde0 must be > 0");
        const double t_star = std::min({1.0, t0, ttilde0});
        return 0.5 * std::sqrt(cum_(t_star));
    }

    // Comparison windows of the cylinder described by c.
    HarnackBoxes boxes(const CylinderSpec& c) const {
        c.validate();
        if (2.0 * c.r >= r0_)
            throw invariant_error("boxes: need r < r0/2, got r = " +
                                  std::to_string(c.r));
        return make_boxes(c.t0, c.x0, c.r, c.tau, c.delta, phi(2.0 * c.r));
    }

    // Nested backward cylinder at level l_index: rho = 2^{-l_index}.
    Box cylinder(double t1, double x1, double r, int l_index, double theta) const {
        if (l_index < 0)
            throw invariant_error("cylinder: l_index must be >= 0");
        const double rho = std::ldexp(1.0, -l_index);
        return nested_cylinder(t1, x1, rho, r, theta, phi(2.0 * rho * r));
    }

  private:
    std::function<double(double)> cum_;
    std::function<double(double)> point_;
    double r0_ = inf;
};

// Free-function form of the admissible radius for callers that have not
// built a PhiSolver.
inline double r_star(const KernelPair& pair, double t0, double ttilde0) {
    if (!(t0 > 0) || !(ttilde0 > 0))
        throw invariant_error("r_star: t0 and ttilde0 must be > 0");
    const double t_star = std::min({1.0, t0, ttilde0});
    return 0.5 * std::sqrt(pair.one_conv_l(t_star));
}

} // namespace subdiff
