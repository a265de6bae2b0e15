#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "subdiff/common.hpp"
#include "subdiff/kernels.hpp"
#include "subdiff/mesh.hpp"

namespace subdiff {

// Product-integration weights for a weakly singular kernel K on a graded
// mesh.  Every quantity below is expressed through the running integral
// of K, so the singular cell at the origin is integrated exactly instead
// of being sampled.
struct ConvolutionWeights {
    GradedTimeMesh mesh;
    std::function<double(double)> cumulative; // t -> int_0^t K
    std::function<double(double)> point;      // t -> K(t), t > 0
    std::string kernel_id;

    // Exact integral of K over [t - b, t - a] for 0 <= a < b <= t:
    // cell_integral(t, a, b) = (1*K)(t - a) - (1*K)(t - b).
    double cell_integral(double t, double a, double b) const {
        return cumulative(t - a) - cumulative(t - b);
    }

    static ConvolutionWeights make_k(const GradedTimeMesh& mesh, const KernelPair& pair) {
        ConvolutionWeights w;
        w.mesh = mesh;
        w.cumulative = [pair](double t) { return pair.one_conv_k(t); };
        w.point = [pair](double t) { return pair.k(t); };
        w.kernel_id = family_name(pair.spec().family) + std::string(":k");
        return w;
    }

    static ConvolutionWeights make_l(const GradedTimeMesh& mesh, const KernelPair& pair) {
        ConvolutionWeights w;
        w.mesh = mesh;
        w.cumulative = [pair](double t) { return pair.one_conv_l(t); };
        w.point = [pair](double t) { return pair.l(t); };
        w.kernel_id = family_name(pair.spec().family) + std::string(":l");
        return w;
    }
};

// Discrete convolution (K * v)(t_i) where v is known at the mesh nodes and
// is treated as piecewise linear: each cell contributes its exact kernel
// mass times the cell-average of v,
//
//   (K * v)(t_i) ~= sum_{j<i} [ (1*K)(t_i - t_j) - (1*K)(t_i - t_{j+1}) ]
//                             * (v_j + v_{j+1}) / 2.
//
// Returns values at every node; entry 0 is zero.
inline std::vector<double> convolve(const ConvolutionWeights& w,
                                    const std::vector<double>& v) {
    const auto& t = w.mesh.nodes;
    const std::size_t n = t.size();
    if (v.size() != n)
        throw std::invalid_argument("convolve: v must be sampled at the mesh nodes (got " +
                                    std::to_string(v.size()) + ", mesh has " +
                                    std::to_string(n) + ")");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double mass = w.cumulative(t[i] - t[j]) - w.cumulative(t[i] - t[j + 1]);
            acc += mass * 0.5 * (v[j] + v[j + 1]);
        }
        out[i] = acc;
    }
    return out;
}

// Backward-cell kernel masses kappa_{n,j} = (1*K)(t_n - t_j) - (1*K)(t_n - t_{j+1})
// for j = 0..n-1, the building block of the time-stepping scheme.
inline std::vector<double> backward_cell_masses(const ConvolutionWeights& w, int n) {
    const auto& t = w.mesh.nodes;
    std::vector<double> kappa(n);
    for (int j = 0; j < n; ++j)
        kappa[j] = w.cumulative(t[n] - t[j]) - w.cumulative(t[n] - t[j + 1]);
    return kappa;
}

} // namespace subdiff
