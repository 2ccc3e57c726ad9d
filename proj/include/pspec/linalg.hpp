#pragma once

#include "pspec/types.hpp"

#include <functional>
#include <optional>

namespace pspec {

/// Unitary Q and upper-triangular T with M = Q T Q*.  The strictly lower
/// part of T is exactly zero; diag(T) are the eigenvalues of M.
struct SchurForm {
    Matrix Q;
    Matrix T;
    std::vector<std::string> warnings;

    Index size() const { return T.rows(); }
    Vector eigenvalues() const { return T.diagonal(); }
};

/// Complex Schur factorization of a square matrix.
SchurForm schur(const Matrix& M);

/// Reorder a Schur form so that every eigenvalue satisfying `select` occupies
/// the leading diagonal block.  Uses adjacent Givens swaps; the relative order
/// of selected (and of unselected) eigenvalues is preserved.  A swap that
/// perturbs the eigenvalue multiset beyond `tol_swap` appends a warning but
/// still completes.
SchurForm reorder_schur(const SchurForm& sf,
                        const std::function<bool(Complex)>& select,
                        double tol_swap = 1e-10);

/// Positional variant: entry i of `select_position` refers to the i-th
/// diagonal entry of the input form.  Needed when repeated eigenvalues make a
/// value predicate ambiguous.
SchurForm reorder_schur_positions(const SchurForm& sf,
                                  const std::vector<char>& select_position,
                                  double tol_swap = 1e-10);

/// Smallest singular value of a square matrix.  Dense SVD up to
/// `dense_cutoff`; above that, inverse iteration on M*M using triangular or
/// LU solves.  Returns 0 when M is singular to working precision.
double smallest_singular_value(const Matrix& M, Index dense_cutoff = 64);

/// Largest singular value (spectral norm).
double largest_singular_value(const Matrix& M);

/// Matrix exponential by scaling-and-squaring with a fixed-degree Pade
/// approximant and 1-norm based scaling.  Throws NumericalError when the
/// input norm is extreme enough to overflow.
Matrix expm(const Matrix& M);

/// Economy-size QR of an m x k matrix (m >= k): M = Z S with Z*Z = I and S
/// upper triangular with real nonnegative diagonal.  Throws on rank
/// deficiency, naming the deficient column.
struct EconomyQR {
    Matrix Z;  // m x k, orthonormal columns
    Matrix S;  // k x k, upper triangular, diag real >= 0
};
EconomyQR qr_economy(const Matrix& M);

/// Upper-triangular Cholesky factor R of a Hermitian positive definite H,
/// H = R* R with real positive diagonal.  Throws on a non-positive pivot,
/// naming its index, and on a non-Hermitian input.
Matrix cholesky_upper(const Matrix& H, const Tolerances& tol = Tolerances::defaults());

/// Solve T x = b for upper or lower triangular T, checking the diagonal
/// against the rank cutoff first.
Matrix triangular_solve(const Matrix& T, const Matrix& B, bool upper = true);

/// Inverse of a nonsingular triangular matrix.
Matrix invert_triangular(const Matrix& T, bool upper = true);

/// Solve M x = b by LU with partial pivoting; throws when M is singular to
/// working precision, reporting the offending pivot.
Matrix lu_solve(const Matrix& M, const Matrix& B);

/// Hager-Higham style estimate of ||inv(M)||_1 from an LU factorization.
/// Returns +inf when M is numerically singular.
double inverse_norm1_estimate(const Eigen::PartialPivLU<Matrix>& lu, Index n);

/// 1-norm condition estimate of M (||M||_1 * est ||inv(M)||_1).
double condest_1(const Matrix& M);

}  // namespace pspec
