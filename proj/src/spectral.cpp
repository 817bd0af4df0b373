#include "soqo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "soqo/errors.hpp"

namespace soqo {

namespace {

double off_diagonal_frobenius(const Mat& m) {
    const int n = m.dim();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

}  // namespace

SpectralMatrix SpectralMatrix::decompose(const Mat& m) {
    const int n = m.dim();
    if (n == 0) throw EmptyInput("decompose: empty matrix");
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > 1e-10) throw NotSymmetric("decompose: asymmetry exceeds 1e-10");

    Mat a = m;
    // Symmetrize exactly so rotations preserve symmetry bit-for-bit.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
    Mat p = Mat::identity(n);

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_frobenius(a) >= 1e-12; ++sweep) {
        for (int q = 1; q < n; ++q) {
            for (int pr = 0; pr < q; ++pr) {
                const double apq = a(pr, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(pr, pr)) / (2.0 * apq);
                // Smaller-magnitude root of t² + 2θt − 1 = 0, for stability.
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, pr), akq = a(k, q);
                    a(k, pr) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(pr, k), aqk = a(q, k);
                    a(pr, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double pkp = p(k, pr), pkq = p(k, q);
                    p(k, pr) = c * pkp - s * pkq;
                    p(k, q) = s * pkp + c * pkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    SpectralMatrix out;
    out.eigvals_.resize(n);
    out.eigvecs_ = Mat(n);
    for (int k = 0; k < n; ++k) {
        out.eigvals_[k] = a(order[k], order[k]);
        for (int r = 0; r < n; ++r) out.eigvecs_(r, k) = p(r, order[k]);
    }
    if (out.eigvals_.front() <= 1e-12)
        throw NotPositiveDefinite("decompose: eigenvalue at or below 1e-12");
    return out;
}

SpectralMatrix SpectralMatrix::from_eigvals(Vec eigvals) {
    if (eigvals.empty()) throw EmptyInput("from_eigvals: no eigenvalues");
    for (double v : eigvals)
        if (!(v > 1e-12) || !std::isfinite(v))
            throw NotPositiveDefinite("from_eigvals: eigenvalue at or below 1e-12");
    const int n = static_cast<int>(eigvals.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return eigvals[i] < eigvals[j]; });
    SpectralMatrix out;
    out.eigvals_.resize(n);
    out.eigvecs_ = Mat(n);
    for (int k = 0; k < n; ++k) {
        out.eigvals_[k] = eigvals[order[k]];
        out.eigvecs_(order[k], k) = 1.0;
    }
    return out;
}

Mat SpectralMatrix::reconstruct() const {
    const int n = dim();
    Mat r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += eigvecs_(i, k) * eigvals_[k] * eigvecs_(j, k);
            r(i, j) = s;
        }
    return r;
}

SpectralMatrix SpectralMatrix::map(const std::function<double(double)>& f) const {
    const int n = dim();
    Vec mapped(eigvals_);
    for (double& v : mapped) {
        const double fv = f(v);
        if (!(fv > 0.0) || !std::isfinite(fv))
            throw RangeViolation("map: image eigenvalue not positive and finite");
        v = fv;
    }
    // A decreasing f reverses the order, so re-sort and carry the columns
    // along to keep the ascending invariant.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return mapped[i] < mapped[j]; });
    SpectralMatrix out;
    out.eigvals_.resize(n);
    out.eigvecs_ = Mat(n);
    for (int k = 0; k < n; ++k) {
        out.eigvals_[k] = mapped[order[k]];
        for (int r = 0; r < n; ++r) out.eigvecs_(r, k) = eigvecs_(r, order[k]);
    }
    return out;
}

Vec SpectralMatrix::to_eigenbasis(const Vec& x) const {
    const int n = dim();
    if (static_cast<int>(x.size()) != n)
        throw DimensionMismatch("to_eigenbasis: dimension mismatch");
    Vec y(n, 0.0);
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += eigvecs_(r, k) * x[r];
        y[k] = s;
    }
    return y;
}

Vec SpectralMatrix::from_eigenbasis(const Vec& y) const {
    const int n = dim();
    if (static_cast<int>(y.size()) != n)
        throw DimensionMismatch("from_eigenbasis: dimension mismatch");
    Vec x(n, 0.0);
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += eigvecs_(r, k) * y[k];
        x[r] = s;
    }
    return x;
}

Vec SpectralMatrix::eigenvector(int i) const {
    const int n = dim();
    if (i < 0 || i >= n) throw InvalidParameter("eigenvector: index out of range");
    Vec v(n);
    for (int r = 0; r < n; ++r) v[r] = eigvecs_(r, i);
    return v;
}

bool SpectralMatrix::is_scalar() const {
    return eigvals_.back() - eigvals_.front() <= 1e-12;
}

double fixed_point_eigenvalue(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw EigvalOutOfRange("fixed_point_eigenvalue: eigenvalue must be positive");
    return 2.0 / (lambda + 2.0 + std::sqrt(lambda * lambda + 4.0 * lambda));
}

SpectralMatrix fixed_point_matrix(const SpectralMatrix& a) {
    return a.map([](double l) { return fixed_point_eigenvalue(l); });
}

}  // namespace soqo
