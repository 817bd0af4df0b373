#pragma once

#include <cmath>

#include "soqo/environments.hpp"
#include "soqo/spectral.hpp"

namespace soqo::testing {

// Random SPD matrix Q diag(eig) Qᵀ with eigenvalues log-uniform in
// [lo, hi]; Q from Gram-Schmidt on a Gaussian matrix.
inline Mat random_spd(RngStream& rng, int d, double lo = 0.05, double hi = 4.0) {
    Mat q(d);
    for (int c = 0; c < d; ++c) {
        Vec col(static_cast<size_t>(d));
        for (int r = 0; r < d; ++r) col[static_cast<size_t>(r)] = rng.normal();
        for (int p = 0; p < c; ++p) {
            double proj = 0.0;
            for (int r = 0; r < d; ++r) proj += q(r, p) * col[static_cast<size_t>(r)];
            for (int r = 0; r < d; ++r) col[static_cast<size_t>(r)] -= proj * q(r, p);
        }
        double norm = 0.0;
        for (double v : col) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-8) return random_spd(rng, d, lo, hi);  // degenerate draw, retry
        for (int r = 0; r < d; ++r) q(r, c) = col[static_cast<size_t>(r)] / norm;
    }
    Vec eig(static_cast<size_t>(d));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (double& e : eig) e = std::exp(llo + (lhi - llo) * rng.next_unit());
    Mat m(d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += q(r, k) * eig[static_cast<size_t>(k)] * q(c, k);
            m(r, c) = s;
        }
    // Exact symmetry despite rounding in the triple product.
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) m(c, r) = m(r, c);
    return m;
}

// Gaussian martingale trace drawn outside the library's keyed-stream
// plumbing, for tests that want an arbitrary fixed trace.
inline MinimizerTrace random_trace(RngStream& rng, int d, int horizon, double sigma_c = 1.0) {
    MinimizerTrace trace;
    trace.x0.assign(static_cast<size_t>(d), 0.0);
    for (double& v : trace.x0) v = rng.normal();
    trace.spec.dim = d;
    trace.spec.horizon = horizon;
    Vec level = trace.x0;
    for (int t = 0; t < horizon; ++t) {
        for (double& v : level) v += sigma_c * rng.normal();
        trace.v.push_back(level);
    }
    return trace;
}

}  // namespace soqo::testing
