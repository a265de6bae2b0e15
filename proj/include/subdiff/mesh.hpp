#pragma once

#include <cmath>
#include <vector>

#include "subdiff/common.hpp"

namespace subdiff {

// Time mesh t_i = t_max * (i/n)^grading, i = 0..n.  grading = 1 is uniform;
// larger exponents cluster nodes at t = 0 where the memory kernels are
// singular.
struct GradedTimeMesh {
    double t_max = 1.0;
    int n_steps = 0;
    double grading = 1.0;
    std::vector<double> nodes; // size n_steps + 1

    static GradedTimeMesh make(double t_max, int n_steps, double grading) {
        if (!(t_max > 0)) throw invariant_error("mesh: t_max must be > 0");
        if (n_steps < 1) throw invariant_error("mesh: n_steps must be >= 1");
        if (!(grading >= 1.0)) throw invariant_error("mesh: grading must be >= 1");
        GradedTimeMesh m;
        m.t_max = t_max;
        m.n_steps = n_steps;
        m.grading = grading;
        m.nodes.resize(n_steps + 1);
        for (int i = 0; i <= n_steps; ++i)
            m.nodes[i] = t_max * std::pow(double(i) / n_steps, grading);
        m.nodes[n_steps] = t_max;
        return m;
    }

    // Default grading 2/alpha for a kernel with l ~ t^{alpha-1}, clamped to
    // [1,4]; resolves the t^alpha solution layer at t = 0.
    static double default_grading(double alpha) {
        return std::clamp(2.0 / std::max(alpha, 1e-12), 1.0, 4.0);
    }

    double cell_width(int j) const { return nodes[j + 1] - nodes[j]; }

    GradedTimeMesh halved() const {
        if (n_steps % 2 != 0)
            throw std::invalid_argument("mesh: halved() needs even n_steps");
        return make(t_max, n_steps / 2, grading);
    }
};

} // namespace subdiff
