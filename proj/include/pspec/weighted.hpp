#pragma once

#include "pspec/pencil.hpp"

namespace pspec {

/// Inner product <x, y> = y* H x with H Hermitian positive definite, carried
/// together with its upper-triangular Cholesky factor H = R* R.
struct InnerProductNorm {
    Matrix H;
    Matrix R;

    explicit InnerProductNorm(Matrix h, const Tolerances& tol = Tolerances::defaults())
        : H(std::move(h)), R(cholesky_upper(H, tol)) {}

    static InnerProductNorm identity(Index n) {
        return InnerProductNorm(Matrix::Identity(n, n));
    }
};

/// ||x||_H = ||R x||_2.
double h_vector_norm(const Vector& x, const InnerProductNorm& ipn);

/// ||M||_H = ||R M R^{-1}||_2.
double h_matrix_norm(const Matrix& M, const InnerProductNorm& ipn);

/// Approach 1: pseudospectra in the H-norm are the 2-norm pseudospectra of
/// the transformed pencil (A R^{-1}, E R^{-1}).
Pencil h_transform_pencil(const Pencil& p, const InnerProductNorm& ipn);

/// Approach 2: transform existing Euclidean Schur data.  From the economy QR
/// factorization R Q = Z S, the H-norm pseudospectra are the 2-norm
/// pseudospectra of S G^{-1} S^{-1} + mu I.
struct HSchurTransform {
    Matrix S;            // k x k upper triangular from the QR of R Q
    Matrix Z;            // orthonormal basis of Ran(R Q)
    Matrix generator;    // S G^{-1} S^{-1} + mu I (upper triangular)
    Complex mu{};
};
HSchurTransform h_schur_transform(const FiniteDecomposition& fd, const InnerProductNorm& ipn);

}  // namespace pspec
