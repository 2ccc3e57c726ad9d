#include "pspec/pencil.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pspec {

namespace {

constexpr double kShiftCondLimit = 6.7e7;  // 1/sqrt(eps)

std::vector<Complex> default_shift_candidates() {
    return {Complex(0, 0),  Complex(0.25, 0), Complex(1, 0), Complex(-1, 0),
            Complex(0, 1),  Complex(0, -1),   Complex(1, 1)};
}

// Zero-classification threshold on |lambda| for eigenvalues of E_mu.
double zero_threshold(Index n, double scale) {
    return std::max(double(n) * kEps, 1e-10) * std::max(1.0, scale);
}

// Nilpotency acceptance: ||N^k||_F <= 1e-10 * max(1, ||N||_F^k).
bool is_nilpotent(const Matrix& N, Index* index_out) {
    const Index d = N.rows();
    if (d == 0) { *index_out = 0; return true; }
    const double base = std::max(1.0, N.norm());
    Matrix P = N;
    double tol = 1e-10 * base;
    for (Index k = 1; k <= d; ++k) {
        if (P.norm() <= tol) { *index_out = k; return true; }
        if (k == d) break;
        P = P * N;
        tol *= base;
    }
    *index_out = d;
    return false;
}

}  // namespace

Matrix shifted_operator(const Pencil& p, Complex mu, double* condest_out) {
    const Matrix shifted = p.A - mu * p.E;
    const double norm1 = shifted.cwiseAbs().colwise().sum().maxCoeff();
    Eigen::PartialPivLU<Matrix> lu(shifted);
    const double inv1 = inverse_norm1_estimate(lu, shifted.rows());
    const double cond = norm1 * inv1;
    if (condest_out) *condest_out = cond;
    if (!std::isfinite(cond) || cond > kShiftCondLimit) {
        std::ostringstream os;
        os << "shifted_operator: A - mu E is singular or too ill-conditioned at mu = ("
           << mu.real() << ", " << mu.imag() << "); condition estimate " << cond;
        throw NumericalError(os.str());
    }
    return lu.solve(p.E);
}

Complex select_shift(const Pencil& p, const std::vector<Complex>& candidates) {
    const std::vector<Complex> cands =
        candidates.empty() ? default_shift_candidates() : candidates;
    std::ostringstream failures;
    for (const Complex mu : cands) {
        double cond = 0.0;
        try {
            shifted_operator(p, mu, &cond);
            return mu;
        } catch (const NumericalError&) {
            failures << "  mu = (" << mu.real() << ", " << mu.imag()
                     << "): condition estimate " << cond << "\n";
        }
    }
    throw NumericalError(
        "select_shift: pencil appears singular or badly scaled; all shift "
        "candidates failed:\n" + failures.str());
}

namespace {

// Partition a reordered Schur form (finite part leading) into the blocks of
// the decomposition and finish the bookkeeping.
FiniteDecomposition assemble(const SchurForm& sf, Complex mu, Index d,
                             std::vector<std::string> warnings) {
    const Index n = sf.T.rows();
    const Index m = n - d;
    FiniteDecomposition fd;
    fd.mu = mu;
    fd.d = d;
    fd.Q = sf.Q.leftCols(m);
    fd.Qtilde = sf.Q.rightCols(d);
    fd.G = sf.T.topLeftCorner(m, m);
    fd.D = sf.T.topRightCorner(m, d);
    fd.N = sf.T.bottomRightCorner(d, d);
    fd.warnings = std::move(warnings);

    Index idx = 0;
    if (!is_nilpotent(fd.N, &idx)) {
        std::ostringstream os;
        os << "decompose: trailing block of dimension " << d
           << " is not numerically nilpotent (interior approximation: the "
              "requested split keeps nonzero eigenvalues out of G)";
        fd.warnings.push_back(os.str());
    }
    fd.index = idx;

    if (m > 0) {
        const double gmin = fd.G.diagonal().cwiseAbs().minCoeff();
        const double scale = std::max(1.0, fd.G.norm());
        if (gmin <= double(n) * kEps * scale)
            throw NumericalError(
                "decompose: finite block G is singular to working precision; "
                "the zero classification is inconsistent");
        fd.generator_ = invert_triangular(fd.G) + mu * Matrix::Identity(m, m);
    } else {
        fd.generator_ = Matrix(0, 0);
    }
    return fd;
}

}  // namespace

namespace {

// Reorder so that all but the `d` smallest-magnitude eigenvalues lead.
SchurForm split_at(const SchurForm& sf, const std::vector<Index>& order, Index d) {
    const Index n = sf.T.rows();
    std::vector<char> keep(size_t(n), 0);
    for (Index i = d; i < n; ++i) keep[size_t(order[size_t(i)])] = 1;
    return reorder_schur_positions(sf, keep);
}

}  // namespace

FiniteDecomposition decompose(const Pencil& p, Complex mu, std::optional<Index> d_hint) {
    const Matrix Emu = shifted_operator(p, mu);
    const Index n = Emu.rows();
    const double scale = Emu.norm();
    const SchurForm sf = schur(Emu);
    const Vector eigs = sf.T.diagonal();

    // Magnitude ranking; ties broken by position for determinism.
    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return std::abs(eigs(a)) < std::abs(eigs(b));
    });
    auto magnitude = [&](Index rank) { return std::abs(eigs(order[size_t(rank)])); };

    const double thresh = zero_threshold(n, scale);
    std::vector<std::string> warnings;

    if (d_hint) {
        // Sanity ceiling: overestimated hints are allowed (they truncate the
        // farthest finite eigenvalues and give interior bounds), but a hint
        // that would swallow a dominant eigenvalue of E_mu is a modeling
        // error.
        const double ceiling = 0.9 * std::abs(eigs(order[size_t(n - 1)]));
        Index below = 0;
        for (Index i = 0; i < n; ++i)
            if (magnitude(i) <= ceiling) below = i + 1;
        if (*d_hint > below) {
            std::ostringstream os;
            os << "decompose: d_hint = " << *d_hint << " exceeds the " << below
               << " eigenvalues of E_mu below the sanity ceiling " << ceiling;
            throw InputError(os.str());
        }
        return assemble(split_at(sf, order, *d_hint), mu, *d_hint, std::move(warnings));
    }

    // Tier 1: plain threshold on |lambda|.
    Index d1 = 0;
    for (Index i = 0; i < n; ++i)
        if (magnitude(i) <= thresh) d1 = i + 1;

    // Tier 2: defective zero clusters split like sqrt(eps) in double precision
    // and overshoot the plain threshold.  Admit candidates inside the
    // sqrt(eps) window when the trailing block verifies as nilpotent.
    const double window = 10.0 * std::sqrt(kEps) * std::max(1.0, scale);
    Index d2 = 0;
    for (Index i = 0; i < n; ++i)
        if (magnitude(i) <= window) d2 = i + 1;

    for (Index i = 0; i < n; ++i) {
        const double m = magnitude(i);
        if (m > thresh / 10.0 && m < thresh * 10.0) {
            std::ostringstream os;
            os << "decompose: eigenvalue magnitude " << m
               << " straddles the zero-classification threshold " << thresh;
            warnings.push_back(os.str());
            break;
        }
    }

    for (Index cand = d2; cand > d1; --cand) {
        SchurForm trial = split_at(sf, order, cand);
        Index idx = 0;
        if (is_nilpotent(trial.T.bottomRightCorner(cand, cand), &idx))
            return assemble(trial, mu, cand, std::move(warnings));
    }
    return assemble(split_at(sf, order, d1), mu, d1, std::move(warnings));
}

std::vector<Complex> finite_eigenvalues(const FiniteDecomposition& fd) {
    std::vector<Complex> out;
    out.reserve(size_t(fd.finite_dim()));
    for (Index i = 0; i < fd.finite_dim(); ++i)
        out.push_back(1.0 / fd.G(i, i) + fd.mu);
    return out;
}

double spectral_abscissa(const FiniteDecomposition& fd) {
    double a = -std::numeric_limits<double>::infinity();
    for (const Complex l : finite_eigenvalues(fd)) a = std::max(a, l.real());
    return a;
}

MuIndependenceReport check_mu_independence(const Pencil& p, Complex mu, Complex nu,
                                           const std::vector<Complex>& probes) {
    const FiniteDecomposition fmu = decompose(p, mu);
    const FiniteDecomposition fnu = decompose(p, nu);
    MuIndependenceReport rep;

    for (const Complex z : probes) {
        const Index m1 = fmu.finite_dim(), m2 = fnu.finite_dim();
        const double s1 = smallest_singular_value(
            z * Matrix::Identity(m1, m1) - fmu.generator());
        const double s2 = smallest_singular_value(
            z * Matrix::Identity(m2, m2) - fnu.generator());
        // A probe sitting on an eigenvalue reads as working-precision zero on
        // both sides; compare against that floor rather than each other.
        const double floor = 64.0 * kEps *
                             (fmu.generator().norm() + std::abs(z) + 1.0);
        if (std::max(s1, s2) <= floor) continue;
        rep.max_resolvent_rel_diff =
            std::max(rep.max_resolvent_rel_diff, std::abs(s1 - s2) / std::max(s1, s2));
    }

    // Greedy closest-pair matching of the two finite spectra; a plain sort
    // mispairs conjugate eigenvalues whose real parts tie only approximately.
    std::vector<Complex> e1 = finite_eigenvalues(fmu);
    std::vector<Complex> e2 = finite_eigenvalues(fnu);
    if (e1.size() != e2.size()) {
        rep.max_eigenvalue_diff = std::numeric_limits<double>::infinity();
        return rep;
    }
    while (!e1.empty()) {
        size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < e1.size(); ++i) {
            for (size_t j = 0; j < e2.size(); ++j) {
                const double dd = std::abs(e1[i] - e2[j]);
                if (dd < best) { best = dd; bi = i; bj = j; }
            }
        }
        rep.max_eigenvalue_diff = std::max(rep.max_eigenvalue_diff, best);
        e1.erase(e1.begin() + long(bi));
        e2.erase(e2.begin() + long(bj));
    }
    return rep;
}

double consistency_residual(const FiniteDecomposition& fd, const Vector& x0) {
    if (x0.size() != fd.n())
        throw InputError("consistency_residual: dimension mismatch");
    return (x0 - fd.Q * (fd.Q.adjoint() * x0)).norm();
}

namespace {

void require_consistent(const FiniteDecomposition& fd, const Vector& x0,
                        const Tolerances& tol, const char* who) {
    const double res = consistency_residual(fd, x0);
    if (res > tol.consistent * std::max(1e-300, x0.norm())) {
        std::ostringstream os;
        os << who << ": initial condition is inconsistent with the algebraic "
           << "constraints (residual " << res << "); the nearest consistent state "
           << "is Q Q* x0";
        throw InputError(os.str());
    }
}

}  // namespace

Vector solution_at(const FiniteDecomposition& fd, const Vector& x0, double t,
                   const Tolerances& tol) {
    if (t < 0) throw InputError("solution_at: t must be nonnegative");
    require_consistent(fd, x0, tol, "solution_at");
    const Vector y0 = fd.Q.adjoint() * x0;
    return fd.Q * (expm(t * fd.generator()) * y0);
}

Vector discrete_solution(const FiniteDecomposition& fd, const Vector& x0, Index k,
                         const Tolerances& tol) {
    if (k < 0) throw InputError("discrete_solution: k must be nonnegative");
    require_consistent(fd, x0, tol, "discrete_solution");
    Vector y = fd.Q.adjoint() * x0;
    for (Index i = 0; i < k; ++i) y = fd.generator() * y;
    return fd.Q * y;
}

}  // namespace pspec
