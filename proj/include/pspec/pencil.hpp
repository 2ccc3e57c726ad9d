#pragma once

#include "pspec/linalg.hpp"
#include "pspec/types.hpp"

#include <optional>

namespace pspec {

/// The pair (A, E) defining the descriptor system E x'(t) = A x(t).
/// Regularity (invertibility of A - mu E for some mu) is certified when a
/// shift is selected or a decomposition is built.
struct Pencil {
    Matrix A;
    Matrix E;

    Pencil() = default;
    Pencil(Matrix a, Matrix e) : A(std::move(a)), E(std::move(e)) {
        require_square(A, "Pencil.A");
        require_finite(A, "Pencil.A");
        require_finite(E, "Pencil.E");
        if (E.rows() != A.rows() || E.cols() != A.cols())
            throw InputError("Pencil: A and E must have the same square dimension");
    }

    Index size() const { return A.rows(); }
};

/// Spectral split of the shifted operator (A - mu E)^{-1} E:
///
///   [Q Qtilde]* E_mu [Q Qtilde] = [ G  D ]
///                                 [ 0  N ]
///
/// with G upper triangular invertible (finite part) and N upper triangular
/// nilpotent (infinite part).  G^{-1} + mu I generates the solution flow and
/// is shared by every admissible shift up to unitary similarity.
struct FiniteDecomposition {
    Complex mu{};
    Index d = 0;        // number of zero eigenvalues of E_mu
    Index index = 0;    // nilpotency degree of N (DAE index); 0 when d == 0
    Matrix Q;           // n x (n-d), orthonormal columns spanning the solution space
    Matrix Qtilde;      // n x d
    Matrix G;           // (n-d) x (n-d), upper triangular, invertible
    Matrix D;           // (n-d) x d coupling block
    Matrix N;           // d x d, upper triangular, nilpotent
    std::vector<std::string> warnings;

    Index n() const { return Q.rows(); }
    Index finite_dim() const { return G.rows(); }

    /// G^{-1} + mu I, the (upper-triangular) generator of the solution flow.
    const Matrix& generator() const { return generator_; }

    Matrix generator_;  // cached at construction by decompose()
};

/// E_mu = (A - mu E)^{-1} E.  Throws when A - mu E is singular or too
/// ill-conditioned to solve reliably, carrying the condition estimate.
Matrix shifted_operator(const Pencil& p, Complex mu, double* condest_out = nullptr);

/// First shift from `candidates` (default {0, 0.25, 1, -1, i, -i, 1+i}) whose
/// A - mu E has 1-norm condition estimate below 1/sqrt(eps).  Certifies
/// regularity; throws with the per-candidate estimates when all fail.
Complex select_shift(const Pencil& p,
                     const std::vector<Complex>& candidates = {});

/// Build the finite/infinite split at shift mu.  With d_hint, exactly the
/// d_hint smallest-magnitude eigenvalues of E_mu populate N (overestimates
/// give interior approximations and are flagged).  Without a hint, zero
/// eigenvalues are classified by threshold, with defective zero clusters
/// recognized by verifying that the trailing block is numerically nilpotent.
FiniteDecomposition decompose(const Pencil& p, Complex mu,
                              std::optional<Index> d_hint = std::nullopt);

/// Finite spectrum of the pencil: {1/g_ii + mu} over diag(G).
std::vector<Complex> finite_eigenvalues(const FiniteDecomposition& fd);

/// Max real part of the finite spectrum.
double spectral_abscissa(const FiniteDecomposition& fd);

struct MuIndependenceReport {
    double max_resolvent_rel_diff = 0.0;  // over the probe points
    double max_eigenvalue_diff = 0.0;     // sorted finite spectra, matched
};

/// Compare decompositions at two admissible shifts: resolvent norms of the
/// two generators at the probe points, and the finite spectra.
MuIndependenceReport check_mu_independence(const Pencil& p, Complex mu, Complex nu,
                                           const std::vector<Complex>& probes);

/// ||(I - Q Q*) x0||: distance of x0 from the consistent subspace.
double consistency_residual(const FiniteDecomposition& fd, const Vector& x0);

/// Solution x(t) = Q exp(t (G^{-1} + mu I)) Q* x0 of E x' = A x.  Throws for
/// inconsistent x0, reporting the residual and the projected consistent part.
Vector solution_at(const FiniteDecomposition& fd, const Vector& x0, double t,
                   const Tolerances& tol = Tolerances::defaults());

/// Discrete-time solution x_k = Q (G^{-1} + mu I)^k Q* x0 of E x_{k+1} = A x_k.
Vector discrete_solution(const FiniteDecomposition& fd, const Vector& x0, Index k,
                         const Tolerances& tol = Tolerances::defaults());

}  // namespace pspec
