#pragma once

#include <functional>

#include "soqo/linalg.hpp"

namespace soqo {

// Symmetric positive definite matrix held in factored form P diag(λ) Pᵀ with
// eigenvalues sorted ascending and eigenvectors in the columns of P. All
// per-round machinery downstream works on the eigenvalues and only touches P
// at the basis-change boundary.
class SpectralMatrix {
  public:
    SpectralMatrix() = default;

    // Eigendecomposition of a dense symmetric input via cyclic Jacobi
    // rotations; converges when the off-diagonal Frobenius norm drops below
    // 1e-12. Throws NotSymmetric (asymmetry above 1e-10) or
    // NotPositiveDefinite (any eigenvalue below 1e-12).
    static SpectralMatrix decompose(const Mat& m);

    // Diagonal matrix with the given positive eigenvalues; eigenvectors are
    // the standard basis, eigenvalues re-sorted ascending.
    static SpectralMatrix from_eigvals(Vec eigvals);

    int dim() const { return static_cast<int>(eigvals_.size()); }
    const Vec& eigvals() const { return eigvals_; }
    const Mat& eigvecs() const { return eigvecs_; }
    double min_eigval() const { return eigvals_.front(); }
    double max_eigval() const { return eigvals_.back(); }
    double condition_number() const { return eigvals_.back() / eigvals_.front(); }

    Mat reconstruct() const;  // P diag(λ) Pᵀ

    // Applies f to each eigenvalue, keeping the eigenvectors. Throws
    // RangeViolation if any f(λ) is non-positive or non-finite.
    SpectralMatrix map(const std::function<double(double)>& f) const;

    Vec to_eigenbasis(const Vec& x) const;    // Pᵀ x
    Vec from_eigenbasis(const Vec& y) const;  // P y

    // Column i of P (the eigenvector paired with eigvals()[i]).
    Vec eigenvector(int i) const;

    // All eigenvalues equal within 1e-12 (λI case).
    bool is_scalar() const;

  private:
    Vec eigvals_;
    Mat eigvecs_;
};

// Per-eigenvalue fixed point of the backward coefficient recursion:
// c satisfies c + 1/c = λ + 2 with c in (0,1). Evaluated in the
// cancellation-free form 2 / (λ + 2 + sqrt(λ² + 4λ)).
double fixed_point_eigenvalue(double lambda);

// Matrix with the same eigenvectors as a and eigenvalues c(λᵢ).
SpectralMatrix fixed_point_matrix(const SpectralMatrix& a);

}  // namespace soqo
