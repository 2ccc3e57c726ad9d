#pragma once

#include "pspec/grid.hpp"
#include "pspec/pencil.hpp"
#include "pspec/transient.hpp"
#include "pspec/weighted.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <memory>

namespace pspec {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

/// Sparse pencil in coordinate form; duplicates are summed on ingest and
/// explicit zeros dropped.  Saddle-structured problems carry (n_v, n_p).
struct SparsePencil {
    SparseMatrix A;
    SparseMatrix E;
    Index n_v = 0;  // 0 when no block metadata is known
    Index n_p = 0;

    Index size() const { return A.rows(); }
    Pencil dense() const { return Pencil(Matrix(A), Matrix(E)); }
};

SparsePencil make_sparse_pencil(Index n, const std::vector<Triplet>& a_entries,
                                const std::vector<Triplet>& e_entries,
                                Index n_v = 0, Index n_p = 0);

/// Shift-invert application w = (A - mu E)^{-1} (E v).  The default backing
/// is a dense LU, limited to n <= 2000; larger problems need an external
/// solver plugged in through this interface.
class ShiftInvertOperator {
public:
    virtual ~ShiftInvertOperator() = default;
    virtual Vector apply(const Vector& v) const = 0;
    virtual Index size() const = 0;
};

std::unique_ptr<ShiftInvertOperator> make_dense_shift_invert(const SparsePencil& p,
                                                             Complex mu);

/// Orthonormal basis V of an approximate invariant subspace of E_mu for the
/// k largest-magnitude eigenvalues, with the projected block Ghat = V* E_mu V.
struct ProjectionResult {
    Complex mu{};
    Matrix V;                       // n x k, orthonormal
    Matrix Ghat;                    // k x k
    std::vector<Complex> ritz_values;
    std::vector<double> residuals;  // ||E_mu v_i - V Ghat e_i||, unclipped
    double basis_condition = 1.0;
    bool converged = true;
    std::vector<std::string> warnings;
    Matrix S;                       // optional H-norm factor (empty if unset)

    Index k() const { return V.cols(); }
    /// Ghat^{-1} + mu I, the projected generator.
    Matrix generator() const;
};

struct ArnoldiOptions {
    Index max_basis = 0;        // 0: min(n, 3k)
    int max_restarts = 40;
    double tol = 1e-8;          // Ritz residual < tol * |ritz|
    std::uint64_t seed = 7;
};

/// Krylov-Schur iteration (Arnoldi with thick restarts), modified
/// Gram-Schmidt with one reorthogonalization pass, deterministic start
/// vector.  Non-convergence returns the partial result flagged, with honest
/// residuals.
ProjectionResult arnoldi_invariant_subspace(const SparsePencil& p, Complex mu, Index k,
                                            const ShiftInvertOperator& op,
                                            const ArnoldiOptions& opts = {});

/// Convenience overload using the dense default solver.
ProjectionResult arnoldi_invariant_subspace(const SparsePencil& p, Complex mu, Index k,
                                            const ArnoldiOptions& opts = {});

/// Interior pseudospectra estimate: the field of Ghat^{-1} + mu I, a subset
/// of sigma_eps(A, E) by the projection bound.
ResolventField interior_pseudospectra(const ProjectionResult& pr, const GridSpec& grid);

/// H-norm variant: attach S from the economy QR of R V; the interior bound
/// then reads sigma_{eps,2}(S Ghat^{-1} S^{-1} + mu I) within the H-norm
/// pseudospectra.
ProjectionResult projected_h_norm(ProjectionResult pr, const InnerProductNorm& ipn);

/// Projected generator in the H-norm (S Ghat^{-1} S^{-1} + mu I).
Matrix projected_h_generator(const ProjectionResult& pr);

/// Guaranteed transient growth factor alpha_eps(projected generator)/eps.
double projected_growth_bound(const ProjectionResult& pr, double epsilon);

/// Seeded sparse saddle-point pencil A = [[K, B^T], [B, 0]], E = [[M, 0],
/// [0, 0]] with K invertible (negative-definite symmetric part plus a skew
/// perturbation), B full rank, M Hermitian positive definite.  The result has
/// 2 n_p infinite eigenvalues and index 2.
SparsePencil generate_saddle_pencil(Index n_v, Index n_p, std::uint64_t seed,
                                    double density = 0.25);

}  // namespace pspec
