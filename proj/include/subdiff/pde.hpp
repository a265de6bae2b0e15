#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "subdiff/common.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"
#include "subdiff/scaling.hpp"

// Finite-difference solver for the memory-flux equation
//   d/dt (k * (u - u0))(t,x) - d/dx (A(t,x) du/dx) = f(t,x)
// on (0,T] x [0,1].  The memory term uses product integration with exact
// cell masses of 1*k; rearranging its history by summation by parts makes
// every coefficient nonnegative, so the implicit step is an M-matrix solve
// and the scheme inherits the comparison principle.

namespace subdiff {

// ---------------------------------------------------------------------------
// problem description
// ---------------------------------------------------------------------------

enum class BoundaryKind { dirichlet, neumann };

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::dirichlet;
    std::function<double(double)> left;  // Dirichlet trace at x = 0
    std::function<double(double)> right; // Dirichlet trace at x = 1

    static BoundaryCondition dirichlet(double gl, double gr) {
        BoundaryCondition bc;
        bc.left = [gl](double) { return gl; };
        bc.right = [gr](double) { return gr; };
        return bc;
    }
    static BoundaryCondition dirichlet(std::function<double(double)> gl,
                                       std::function<double(double)> gr) {
        BoundaryCondition bc;
        bc.left = std::move(gl);
        bc.right = std::move(gr);
        return bc;
    }
    // zero-flux walls; boundary rows become half-cell balances
    static BoundaryCondition neumann() {
        BoundaryCondition bc;
        bc.kind = BoundaryKind::neumann;
        return bc;
    }
};

struct ProblemSpec {
    KernelSpec kernel;
    double t_max = 1.0;
    int nt = 256;
    int nx = 129;
    double grading = 0.0; // 0 selects the kernel-matched default
    double nu = 1.0, Lambda = 1.0; // declared ellipticity window of A
    std::function<double(double, double)> A;  // A(t, x)
    std::function<double(double)> u0;         // initial state u0(x)
    std::function<double(double, double)> f;  // forcing f(t, x)
    BoundaryCondition bc = BoundaryCondition::dirichlet(0.0, 0.0);

    void validate() const {
        if (!(t_max > 0)) throw std::invalid_argument("problem: t_max must be > 0");
        if (nt < 1) throw std::invalid_argument("problem: nt must be >= 1");
        if (nx < 3) throw std::invalid_argument("problem: nx must be >= 3");
        if (!(nu > 0) || !(Lambda >= nu))
            throw std::invalid_argument("problem: need 0 < nu <= Lambda");
        if (!u0) throw std::invalid_argument("problem: u0 is not set");
        if (bc.kind == BoundaryKind::dirichlet && (!bc.left || !bc.right))
            throw std::invalid_argument("problem: Dirichlet data is not set");
    }
};

// ---------------------------------------------------------------------------
// space-time grid function
// ---------------------------------------------------------------------------

struct DiscreteField {
    GradedTimeMesh time;
    std::vector<double> x;      // uniform nodes on [0,1]
    std::vector<double> values; // (nt+1) x nx, row-major in time levels

    int nt() const { return time.n_steps; }
    int nx() const { return (int)x.size(); }
    double at(int n, int i) const { return values[(std::size_t)n * x.size() + i]; }
    double& at(int n, int i) { return values[(std::size_t)n * x.size() + i]; }
    double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }

    double min_value() const {
        return *std::min_element(values.begin(), values.end());
    }
    double max_value() const {
        return *std::max_element(values.begin(), values.end());
    }
};

// measure of the node-centered cell of x[i] clipped to [lo, hi]
inline double clipped_node_weight(const std::vector<double>& x, int i,
                                  double lo, double hi) {
    const int n = (int)x.size();
    const double a = i == 0 ? x[0] : 0.5 * (x[i - 1] + x[i]);
    const double b = i + 1 == n ? x[n - 1] : 0.5 * (x[i] + x[i + 1]);
    return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

// ---------------------------------------------------------------------------
// solver
// ---------------------------------------------------------------------------

namespace detail {

// Tridiagonal solve (Thomas); diag/sub/sup are overwritten.
inline void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                              std::vector<double>& sup, std::vector<double>& rhs,
                              int step) {
    const int n = (int)diag.size();
    for (int i = 1; i < n; ++i) {
        if (!(diag[i - 1] > 0))
            throw numerical_error("pde: lost pivot positivity at step " +
                                  std::to_string(step) + ", row " +
                                  std::to_string(i - 1));
        const double m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if (!(diag[n - 1] > 0))
        throw numerical_error("pde: lost pivot positivity at step " +
                              std::to_string(step) + ", last row");
    rhs[n - 1] /= diag[n - 1];
    for (int i = n - 2; i >= 0; --i)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

} // namespace detail

inline DiscreteField solve(const ProblemSpec& spec) {
    spec.validate();

    const double grading = spec.grading > 0
                               ? spec.grading
                               : GradedTimeMesh::default_grading(
                                     KernelSpec(spec.kernel).report_alpha());
    const GradedTimeMesh mesh = GradedTimeMesh::make(spec.t_max, spec.nt, grading);
    const auto& t = mesh.nodes;

    const KernelPair pair(spec.kernel);
    const double t_lo = 0.5 * spec.t_max * std::pow(double(spec.nt), -grading);
    const AcceleratedKernel acc(pair, std::min(t_lo, 1e-9), spec.t_max * 1.01);

    DiscreteField u;
    u.time = mesh;
    u.x = linspace(0.0, 1.0, spec.nx);
    u.values.assign((std::size_t)(spec.nt + 1) * spec.nx, 0.0);
    const double h = u.dx();
    const int nx = spec.nx;

    auto coeff_A = [&](double tn, double xm) {
        const double a = spec.A ? spec.A(tn, xm) : 1.0;
        if (!(a >= spec.nu * (1 - 1e-12)) || !(a <= spec.Lambda * (1 + 1e-12)))
            throw invariant_error(
                "pde: A(" + std::to_string(tn) + ", " + std::to_string(xm) +
                ") = " + std::to_string(a) + " leaves the declared window [" +
                std::to_string(spec.nu) + ", " + std::to_string(spec.Lambda) + "]");
        return a;
    };

    for (int i = 0; i < nx; ++i) u.at(0, i) = spec.u0(u.x[i]);

    // backward-cell averages of k: b_{n,j} = [Kk(t_n-t_j) - Kk(t_n-t_{j+1})]/d_j
    std::vector<double> b(spec.nt, 0.0);
    std::vector<double> sub(nx), diag(nx), sup(nx), rhs(nx);
    std::vector<double> a_half(nx - 1); // A at the cell midpoints, harmonic

    for (int n = 1; n <= spec.nt; ++n) {
        double hi = acc.one_conv_k(t[n]);
        for (int j = 0; j < n; ++j) {
            const double lo = (j + 1 == n) ? 0.0 : acc.one_conv_k(t[n] - t[j + 1]);
            b[j] = (hi - lo) / mesh.cell_width(j);
            hi = lo;
        }

        // history with summation by parts: all coefficients are >= 0 because
        // backward-cell averages of a nonincreasing kernel grow with j
        for (int i = 0; i < nx; ++i) rhs[i] = b[0] * u.at(0, i);
        for (int j = 1; j < n; ++j) {
            const double c = b[j] - b[j - 1];
            for (int i = 0; i < nx; ++i) rhs[i] += c * u.at(j, i);
        }

        const double tn = t[n];
        for (int i = 0; i + 1 < nx; ++i) {
            const double al = coeff_A(tn, u.x[i]), ar = coeff_A(tn, u.x[i + 1]);
            a_half[i] = 2.0 * al * ar / (al + ar);
        }

        const double bd = b[n - 1];
        for (int i = 0; i < nx; ++i) {
            rhs[i] += spec.f ? spec.f(tn, u.x[i]) : 0.0;
            sub[i] = sup[i] = 0.0;
            diag[i] = bd;
            if (i > 0) {
                sub[i] = -a_half[i - 1] / (h * h);
                diag[i] += a_half[i - 1] / (h * h);
            }
            if (i + 1 < nx) {
                sup[i] = -a_half[i] / (h * h);
                diag[i] += a_half[i] / (h * h);
            }
        }

        if (spec.bc.kind == BoundaryKind::dirichlet) {
            diag[0] = 1.0; sup[0] = 0.0; rhs[0] = spec.bc.left(tn);
            diag[nx - 1] = 1.0; sub[nx - 1] = 0.0; rhs[nx - 1] = spec.bc.right(tn);
        } else {
            // half-cell balances double the single flux against the wall
            diag[0] = bd + 2.0 * a_half[0] / (h * h);
            sup[0] = -2.0 * a_half[0] / (h * h);
            diag[nx - 1] = bd + 2.0 * a_half[nx - 2] / (h * h);
            sub[nx - 1] = -2.0 * a_half[nx - 2] / (h * h);
        }

        detail::solve_tridiagonal(sub, diag, sup, rhs, n);
        for (int i = 0; i < nx; ++i) {
            if (!std::isfinite(rhs[i]))
                throw numerical_error("pde: non-finite value at step " +
                                      std::to_string(n) + ", node " +
                                      std::to_string(i));
            u.at(n, i) = rhs[i];
        }
    }
    return u;
}

// ---------------------------------------------------------------------------
// mixed space-time norms
// ---------------------------------------------------------------------------

// Iterated norm: q2 inside over space, q1 outside over time; either exponent
// may be +inf.  d is the interpolation offset of the admissibility relation
//   p0'/q1 + 1/(2 q2) = 1 - d  (one space dimension).
struct MixedNormSpec {
    double q1 = inf;
    double q2 = inf;
    double d = 0.25;

    void validate(double p0_conjugate) const {
        if (!(q1 >= 1.0) || !(q2 >= 1.0))
            throw invariant_error("mixed norm: exponents must be >= 1");
        if (!(d > 0.0 && d < 0.5))
            throw invariant_error("mixed norm: offset d must lie in (0, 1/2)");
        const double lhs = (std::isinf(q1) ? 0.0 : p0_conjugate / q1) +
                           (std::isinf(q2) ? 0.0 : 0.5 / q2);
        if (std::abs(lhs - (1.0 - d)) > 1e-10)
            throw invariant_error(
                "mixed norm: p0'/q1 + 1/(2 q2) = " + std::to_string(lhs) +
                " does not match 1 - d = " + std::to_string(1.0 - d));
        const double lo = p0_conjugate / (1.0 - d);
        const double hi = 2.0 * p0_conjugate / (1.0 - 2.0 * d);
        if (!std::isinf(q1) && (q1 < lo * (1 - 1e-12) || q1 > hi * (1 + 1e-12)))
            throw invariant_error("mixed norm: q1 = " + std::to_string(q1) +
                                  " outside the admissible range [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) +
                                  "]");
    }
};

// Grid-function norm over a box.  Finite exponents integrate node-centered
// cell weights clipped to the box; infinite exponents take the maximum over
// the nodes inside it (time half-open from below, space closed).
inline double mixed_norm(const DiscreteField& fld, const Box& box,
                         const MixedNormSpec& spec) {
    const auto& t = fld.time.nodes;
    double outer = 0.0, outer_max = 0.0;
    for (int n = 0; n <= fld.nt(); ++n) {
        const double wt = clipped_node_weight(t, n, box.t_lo, box.t_hi);
        const bool t_in = t[n] > box.t_lo && t[n] <= box.t_hi;
        if (wt <= 0.0 && !t_in) continue;

        double inner = 0.0, inner_max = 0.0;
        for (int i = 0; i < fld.nx(); ++i) {
            const double v = std::abs(fld.at(n, i));
            if (!std::isinf(spec.q2)) {
                const double wx =
                    clipped_node_weight(fld.x, i, box.x_lo, box.x_hi);
                if (wx > 0.0) inner += wx * std::pow(v, spec.q2);
            } else if (fld.x[i] >= box.x_lo && fld.x[i] <= box.x_hi) {
                inner_max = std::max(inner_max, v);
            }
        }
        const double level =
            std::isinf(spec.q2) ? inner_max : std::pow(inner, 1.0 / spec.q2);

        if (std::isinf(spec.q1)) {
            if (t_in) outer_max = std::max(outer_max, level);
        } else if (wt > 0.0) {
            outer += wt * std::pow(level, spec.q1);
        }
    }
    return std::isinf(spec.q1) ? outer_max : std::pow(outer, 1.0 / spec.q1);
}

// evaluator norm over a box via tensor trapezoid sampling
inline double mixed_norm(const std::function<double(double, double)>& f,
                         const Box& box, const MixedNormSpec& spec,
                         int samples_per_axis = 512) {
    if (!(box.t_hi > box.t_lo) || !(box.x_hi > box.x_lo)) return 0.0;
    const auto ts = linspace(box.t_lo, box.t_hi, samples_per_axis);
    const auto xs = linspace(box.x_lo, box.x_hi, samples_per_axis);
    const double dt = ts[1] - ts[0], dx = xs[1] - xs[0];

    double outer = 0.0, outer_max = 0.0;
    for (int n = 0; n < samples_per_axis; ++n) {
        double inner = 0.0, inner_max = 0.0;
        for (int i = 0; i < samples_per_axis; ++i) {
            const double v = std::abs(f(ts[n], xs[i]));
            const double wx =
                (i == 0 || i + 1 == samples_per_axis) ? 0.5 * dx : dx;
            inner_max = std::max(inner_max, v);
            if (!std::isinf(spec.q2)) inner += wx * std::pow(v, spec.q2);
        }
        const double level =
            std::isinf(spec.q2) ? inner_max : std::pow(inner, 1.0 / spec.q2);
        outer_max = std::max(outer_max, level);
        if (!std::isinf(spec.q1)) {
            const double wt = (n == 0 || n + 1 == samples_per_axis) ? 0.5 * dt : dt;
            outer += wt * std::pow(level, spec.q1);
        }
    }
    return std::isinf(spec.q1) ? outer_max : std::pow(outer, 1.0 / spec.q1);
}

// Forcing shift entering the comparison estimates:
//   b = r^{2 - 1/q2} Phi(2r)^{-1/q1} ||f||  (one space dimension),
// with the convention 1/inf = 0; a vanishing norm returns epsilon.
inline double shift_constant_b(double f_norm, double r, const MixedNormSpec& spec,
                               const PhiSolver& phi, double epsilon = 0.0) {
    if (!(r > 0)) throw std::invalid_argument("shift_constant_b: r must be > 0");
    if (!(f_norm >= 0))
        throw std::invalid_argument("shift_constant_b: f_norm must be >= 0");
    if (f_norm == 0.0) return epsilon;
    const double space_pow = std::isinf(spec.q2) ? 2.0 : 2.0 - 1.0 / spec.q2;
    const double time_pow = std::isinf(spec.q1) ? 0.0 : -1.0 / spec.q1;
    const double phi_factor =
        time_pow == 0.0 ? 1.0 : std::pow(phi.phi(2.0 * r), time_pow);
    return std::pow(r, space_pow) * phi_factor * f_norm;
}

} // namespace subdiff
