#include "soqo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "soqo/errors.hpp"

namespace soqo {

Mat Mat::identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transpose() const {
    Mat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Mat Mat::operator*(const Mat& rhs) const {
    if (rhs.n_ != n_) throw DimensionMismatch("matrix product: dimension mismatch");
    Mat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n_; ++j) r(i, j) += aik * rhs(k, j);
        }
    return r;
}

Mat Mat::operator+(const Mat& rhs) const {
    if (rhs.n_ != n_) throw DimensionMismatch("matrix sum: dimension mismatch");
    Mat r(n_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + rhs.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& rhs) const {
    if (rhs.n_ != n_) throw DimensionMismatch("matrix difference: dimension mismatch");
    Mat r(n_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - rhs.a_[i];
    return r;
}

Vec Mat::operator*(const Vec& x) const {
    if (static_cast<int>(x.size()) != n_) throw DimensionMismatch("matvec: dimension mismatch");
    Vec y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat Mat::scaled(double s) const {
    Mat r(n_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: dimension mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2_sq(const Vec& a) { return dot(a, a); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("sub: dimension mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("add: dimension mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec scaled(const Vec& a, double s) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Mat cholesky(const Mat& m) {
    const int n = m.dim();
    Mat l(n);
    for (int j = 0; j < n; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= 0.0 || !std::isfinite(d))
            throw NotPositiveDefinite("cholesky: matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Mat invert(const Mat& m) {
    const int n = m.dim();
    Mat a = m;
    Mat inv = Mat::identity(n);
    const double scale = std::max(1.0, a.max_abs());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) < 1e-13 * scale)
            throw SolveFailure("invert: pivot below tolerance, matrix is singular");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const double p = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

}  // namespace soqo
