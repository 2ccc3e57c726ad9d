#include "pspec/weighted.hpp"

namespace pspec {

namespace {

// Right-division by an upper-triangular factor: X = B R^{-1}.
Matrix solve_right_triangular(const Matrix& B, const Matrix& R) {
    return R.transpose()
        .triangularView<Eigen::Lower>()
        .solve(B.transpose())
        .transpose();
}

}  // namespace

double h_vector_norm(const Vector& x, const InnerProductNorm& ipn) {
    if (x.size() != ipn.R.rows()) throw InputError("h_vector_norm: dimension mismatch");
    return (ipn.R * x).norm();
}

double h_matrix_norm(const Matrix& M, const InnerProductNorm& ipn) {
    require_square(M, "h_matrix_norm");
    if (M.rows() != ipn.R.rows()) throw InputError("h_matrix_norm: dimension mismatch");
    return largest_singular_value(solve_right_triangular(ipn.R * M, ipn.R));
}

Pencil h_transform_pencil(const Pencil& p, const InnerProductNorm& ipn) {
    if (p.size() != ipn.R.rows()) throw InputError("h_transform_pencil: dimension mismatch");
    return Pencil(solve_right_triangular(p.A, ipn.R),
                  solve_right_triangular(p.E, ipn.R));
}

HSchurTransform h_schur_transform(const FiniteDecomposition& fd, const InnerProductNorm& ipn) {
    if (fd.n() != ipn.R.rows()) throw InputError("h_schur_transform: dimension mismatch");
    const Index m = fd.finite_dim();
    EconomyQR qr = qr_economy(ipn.R * fd.Q);

    HSchurTransform out;
    out.mu = fd.mu;
    out.Z = std::move(qr.Z);
    out.S = std::move(qr.S);
    const Matrix Ginv = invert_triangular(fd.G);
    out.generator = solve_right_triangular(out.S * Ginv, out.S) +
                    fd.mu * Matrix::Identity(m, m);
    // The product of upper-triangular factors is upper triangular; enforce the
    // structural zeros so downstream evaluation takes the fast path.
    out.generator = out.generator.triangularView<Eigen::Upper>();
    return out;
}

}  // namespace pspec
