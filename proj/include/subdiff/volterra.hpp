#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "subdiff/common.hpp"
#include "subdiff/convolution.hpp"
#include "subdiff/mesh.hpp"

// Volterra-equation layer: product-integration collocation for second-kind
// equations driven by the kernel cell masses, the resolvent regularization
// of a singular kernel, and a discrete check of the convexity transport
// identity that underpins the energy estimates.

namespace subdiff {

// ---------------------------------------------------------------------------
// collocation core
// ---------------------------------------------------------------------------

// Solve  w(t_i) + (l * (theta w))(t_i) = g(t_i)  at the mesh nodes, with the
// unknown represented as piecewise constant from the right (the value on
// cell (t_{j-1}, t_j] is w_j) and l entering through exact cell integrals.
// Forward substitution; the diagonal weight is the l-mass of the last cell,
// which is positive for any nonnegative nontrivial l.  Returns cell values
// (size n_steps); g and theta are node arrays (entry 0 unused).
inline std::vector<double> solve_collocation(const ConvolutionWeights& w,
                                             const std::vector<double>& theta,
                                             const std::vector<double>& g) {
    const auto& t = w.mesh.nodes;
    const int n = w.mesh.n_steps;
    if ((int)theta.size() != n + 1 || (int)g.size() != n + 1)
        throw std::invalid_argument(
            "solve_collocation: theta and g must have one entry per node (" +
            std::to_string(n + 1) + "), got " + std::to_string(theta.size()) +
            " and " + std::to_string(g.size()));

    std::vector<double> cell(n, 0.0);
    for (int i = 1; i <= n; ++i) {
        double acc = 0.0;
        double hi = w.cumulative(t[i]); // running value of L(t_i - t_m)
        for (int m = 0; m + 1 < i; ++m) {
            const double lo = w.cumulative(t[i] - t[m + 1]);
            acc += (hi - lo) * theta[m + 1] * cell[m];
            hi = lo;
        }
        const double diag = hi; // L(t_i - t_{i-1}) - L(0)
        const double denom = 1.0 + diag * theta[i];
        if (!(denom > 0.0) || !std::isfinite(denom))
            throw numerical_error("solve_collocation: lost positivity at step " +
                                  std::to_string(i) +
                                  " (denominator = " + std::to_string(denom) + ")");
        cell[i - 1] = (g[i] - acc) / denom;
    }
    return cell;
}

// Apply the discrete convolution operator to a node array interpreted as
// piecewise constant from the right: (C v)(t_i) = sum_j W_{i,j-1} v_j.
inline std::vector<double> apply_collocation(const ConvolutionWeights& w,
                                             const std::vector<double>& v) {
    const auto& t = w.mesh.nodes;
    const int n = w.mesh.n_steps;
    if ((int)v.size() != n + 1)
        throw std::invalid_argument("apply_collocation: node array size mismatch");
    std::vector<double> out(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        double acc = 0.0;
        double hi = w.cumulative(t[i]);
        for (int m = 0; m < i; ++m) {
            const double lo = (m + 1 == i) ? 0.0 : w.cumulative(t[i] - t[m + 1]);
            acc += (hi - lo) * v[m + 1];
            hi = lo;
        }
        out[i] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// resolvent regularization
// ---------------------------------------------------------------------------

// h_n solves  h_n + n (l * h_n) = n l.  The regularized kernel k_n := k * h_n
// collapses to the exact closed form  k_n = n (1 - 1*h_n)  because k*l == 1,
// which keeps k_n(0) = n and ties its monotonicity to h_n >= 0.  With h_n
// piecewise constant on the cells, 1*h_n is piecewise linear and k_n,
// 1*k_n evaluate exactly at arbitrary arguments.
struct ResolventKernel {
    int index = 0; // the regularization parameter n
    GradedTimeMesh mesh;
    std::vector<double> h_cell;     // cell values of h_n
    std::vector<double> h;          // node values; h[0] repeats the first cell
    std::vector<double> one_conv_h; // (1*h_n) at the nodes, exact
    std::vector<double> k;          // k_n at the nodes
    double residual = 0.0;          // recomputed collocation residual, scaled

    double k_at(double t) const { return index * (1.0 - cum_h(t)); }

    // exact running integral of the piecewise representation of k_n
    double one_conv_k_at(double t) const {
        if (!(t >= 0.0)) throw std::invalid_argument("one_conv_k_at: t >= 0");
        const int m = locate(t);
        const double dt = t - mesh.nodes[m];
        const double inner = cum_cum_h_[m] + one_conv_h[m] * dt +
                             (m < mesh.n_steps ? h_cell[m] : 0.0) * dt * dt / 2.0;
        return index * (t - inner);
    }

    void finalize() {
        cum_cum_h_.assign(mesh.nodes.size(), 0.0);
        for (int m = 0; m < mesh.n_steps; ++m) {
            const double d = mesh.cell_width(m);
            cum_cum_h_[m + 1] =
                cum_cum_h_[m] + one_conv_h[m] * d + h_cell[m] * d * d / 2.0;
        }
    }

  private:
    double cum_h(double t) const {
        const int m = locate(t);
        return one_conv_h[m] +
               (m < mesh.n_steps ? h_cell[m] : 0.0) * (t - mesh.nodes[m]);
    }

    int locate(double t) const {
        if (t >= mesh.t_max) return mesh.n_steps;
        const auto& nd = mesh.nodes;
        int m = int(std::upper_bound(nd.begin(), nd.end(), t) - nd.begin()) - 1;
        return std::clamp(m, 0, mesh.n_steps - 1);
    }

    std::vector<double> cum_cum_h_; // int_0^{t_m} (1*h_n), exact
};

inline ResolventKernel make_resolvent(const ConvolutionWeights& l_weights,
                                      int n_index) {
    if (n_index < 1)
        throw std::invalid_argument("make_resolvent: index must be >= 1");
    const auto& t = l_weights.mesh.nodes;
    const int n = l_weights.mesh.n_steps;

    std::vector<double> theta(n + 1, double(n_index));
    std::vector<double> g(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) g[i] = n_index * l_weights.point(t[i]);

    ResolventKernel rk;
    rk.index = n_index;
    rk.mesh = l_weights.mesh;
    rk.h_cell = solve_collocation(l_weights, theta, g);

    rk.h.assign(n + 1, 0.0);
    rk.h[0] = rk.h_cell.empty() ? 0.0 : rk.h_cell[0];
    for (int i = 1; i <= n; ++i) rk.h[i] = rk.h_cell[i - 1];

    rk.one_conv_h.assign(n + 1, 0.0);
    for (int m = 0; m < n; ++m)
        rk.one_conv_h[m + 1] =
            rk.one_conv_h[m] + rk.h_cell[m] * rk.mesh.cell_width(m);

    rk.k.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) rk.k[i] = n_index * (1.0 - rk.one_conv_h[i]);
    rk.finalize();

    // honest residual: re-evaluate the collocation equations
    const auto conv = apply_collocation(l_weights, rk.h);
    for (int i = 1; i <= n; ++i) {
        const double res = rk.h[i] + n_index * conv[i] - g[i];
        rk.residual = std::max(rk.residual, std::abs(res) / std::max(1.0, g[i]));
    }
    return rk;
}

// ---------------------------------------------------------------------------
// linear second-kind equations
// ---------------------------------------------------------------------------

struct SecondKindSolution {
    GradedTimeMesh mesh;
    std::vector<double> v;   // node values, v[0] = 0
    double residual = 0.0;   // recomputed equation residual, scaled
};

// Solve  v + l*(theta v) = l*rhs  by the same collocation; theta and rhs are
// evaluated at the nodes.
inline SecondKindSolution solve_second_kind(const ConvolutionWeights& l_weights,
                                            const std::function<double(double)>& theta,
                                            const std::function<double(double)>& rhs) {
    const auto& t = l_weights.mesh.nodes;
    const int n = l_weights.mesh.n_steps;

    std::vector<double> th(n + 1, 0.0), f(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) {
        th[i] = theta(t[i]);
        f[i] = rhs(t[i]);
    }
    const auto g = apply_collocation(l_weights, f);
    const auto cell = solve_collocation(l_weights, th, g);

    SecondKindSolution sol;
    sol.mesh = l_weights.mesh;
    sol.v.assign(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) sol.v[i] = cell[i - 1];

    std::vector<double> tv(n + 1, 0.0);
    for (int i = 1; i <= n; ++i) tv[i] = th[i] * sol.v[i];
    const auto conv = apply_collocation(l_weights, tv);
    for (int i = 1; i <= n; ++i) {
        const double res = sol.v[i] + conv[i] - g[i];
        sol.residual =
            std::max(sol.residual, std::abs(res) / std::max(1.0, std::abs(g[i])));
    }
    return sol;
}

// ---------------------------------------------------------------------------
// convexity transport identity
// ---------------------------------------------------------------------------

struct IdentityCheck {
    double max_residual = 0.0;  // max scaled gap between the two sides
    double min_remainder = 0.0; // most negative discrete remainder term
    double worst_t = 0.0;
};

// Discrete form of the identity
//   H'(u) d/dt(k_n*u) = d/dt(k_n*H(u)) + (H'(u)u - H(u)) k_n
//                       + int_0^t [H(u(t-s)) - H(u(t)) - H'(u(t))(u(t-s)-u(t))] (-k_n'(s)) ds.
// Both transport terms use the same product-integration stencil (exact cell
// masses of 1*k_n against cell slopes), so an affine H cancels to round-off.
// The remainder integrand is pointwise nonnegative for convex H and the
// (-k_n') cell masses are k_n differences, so the discrete remainder cannot
// go negative beyond round-off either.
inline IdentityCheck
check_fundamental_identity(const ResolventKernel& rk,
                           const std::function<double(double)>& u,
                           const std::function<double(double)>& H,
                           const std::function<double(double)>& Hp) {
    const auto& t = rk.mesh.nodes;
    const int n = rk.mesh.n_steps;

    std::vector<double> un(n + 1), hn(n + 1);
    for (int i = 0; i <= n; ++i) {
        un[i] = u(t[i]);
        hn[i] = H(un[i]);
    }

    // d/dt(k_n * w)(t_i) = k_n(t_i) w(0) + sum_j kappa_{i,j} (w_{j+1}-w_j)/d_j
    auto transport = [&](int i, const std::vector<double>& w) {
        double acc = rk.k_at(t[i]) * w[0];
        double hi = rk.one_conv_k_at(t[i]);
        for (int j = 0; j < i; ++j) {
            const double lo = (j + 1 == i) ? 0.0 : rk.one_conv_k_at(t[i] - t[j + 1]);
            acc += (hi - lo) * (w[j + 1] - w[j]) / rk.mesh.cell_width(j);
            hi = lo;
        }
        return acc;
    };

    IdentityCheck out;
    for (int i = 1; i <= n; ++i) {
        const double lhs = Hp(un[i]) * transport(i, un);

        double remainder = 0.0;
        auto psi = [&](double s) {
            const double us = (s == 0.0) ? un[i] : u(t[i] - s);
            return H(us) - hn[i] - Hp(un[i]) * (us - un[i]);
        };
        double psi_lo = psi(0.0), k_lo = rk.k_at(0.0);
        for (int j = 1; j <= i; ++j) {
            const double psi_hi = psi(t[j]);
            const double k_hi = rk.k_at(t[j]);
            remainder += (k_lo - k_hi) * 0.5 * (psi_lo + psi_hi);
            psi_lo = psi_hi;
            k_lo = k_hi;
        }

        const double rhs = transport(i, hn) +
                           (Hp(un[i]) * un[i] - hn[i]) * rk.k_at(t[i]) + remainder;
        const double gap = std::abs(lhs - rhs) /
                           std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (gap > out.max_residual) {
            out.max_residual = gap;
            out.worst_t = t[i];
        }
        out.min_remainder = std::min(out.min_remainder, remainder);
    }
    return out;
}

} // namespace subdiff
