#pragma once

#include <vector>

namespace soqo {

using Vec = std::vector<double>;

// Dense square matrix, row-major. Sized for desk-scale problems (d <= a few
// hundred); no BLAS, no views.
class Mat {
  public:
    Mat() = default;
    explicit Mat(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

    static Mat identity(int n);

    int dim() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    Mat transpose() const;
    Mat operator*(const Mat& rhs) const;
    Mat operator+(const Mat& rhs) const;
    Mat operator-(const Mat& rhs) const;
    Vec operator*(const Vec& x) const;
    Mat scaled(double s) const;

    double max_abs() const;
    double frobenius() const;

  private:
    int n_ = 0;
    std::vector<double> a_;
};

double dot(const Vec& a, const Vec& b);
double norm2_sq(const Vec& a);     // squared Euclidean norm
double norm_inf(const Vec& a);
Vec sub(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double s);
double max_abs_diff(const Vec& a, const Vec& b);

// Lower-triangular L with L Lᵀ = m. Throws NotPositiveDefinite.
Mat cholesky(const Mat& m);

// Inverse by Gauss-Jordan with partial pivoting. Throws SolveFailure on a
// pivot below 1e-13 * scale.
Mat invert(const Mat& m);

}  // namespace soqo
