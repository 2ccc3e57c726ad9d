#include "pspec/projection.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace pspec {

SparsePencil make_sparse_pencil(Index n, const std::vector<Triplet>& a_entries,
                                const std::vector<Triplet>& e_entries,
                                Index n_v, Index n_p) {
    for (const auto& list : {&a_entries, &e_entries}) {
        for (const Triplet& t : *list) {
            if (t.row() < 0 || t.row() >= n || t.col() < 0 || t.col() >= n)
                throw InputError("make_sparse_pencil: triplet index out of range");
        }
    }
    SparsePencil p;
    p.A.resize(n, n);
    p.E.resize(n, n);
    p.A.setFromTriplets(a_entries.begin(), a_entries.end());  // duplicates summed
    p.E.setFromTriplets(e_entries.begin(), e_entries.end());
    p.A.prune(Complex(0, 0));
    p.E.prune(Complex(0, 0));
    p.n_v = n_v;
    p.n_p = n_p;
    return p;
}

namespace {

class DenseShiftInvert final : public ShiftInvertOperator {
public:
    DenseShiftInvert(const SparsePencil& p, Complex mu) : E_(Matrix(p.E)) {
        const Index n = p.size();
        if (n > 2000)
            throw InputError(
                "shift-invert: the built-in dense factorization is limited to n <= 2000; "
                "plug in an external sparse solver through ShiftInvertOperator");
        const Matrix shifted = Matrix(p.A) - mu * E_;
        lu_.compute(shifted);
        const double norm1 = shifted.cwiseAbs().colwise().sum().maxCoeff();
        const double cond = norm1 * inverse_norm1_estimate(lu_, n);
        if (!std::isfinite(cond) || cond > 6.7e7) {
            std::ostringstream os;
            os << "shift-invert: A - mu E is singular or too ill-conditioned at mu = ("
               << mu.real() << ", " << mu.imag() << ") (condition estimate " << cond
               << "); try another shift";
            throw NumericalError(os.str());
        }
    }

    Vector apply(const Vector& v) const override { return lu_.solve(E_ * v); }
    Index size() const override { return E_.rows(); }

private:
    Matrix E_;
    Eigen::PartialPivLU<Matrix> lu_;
};

Vector deterministic_start(Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v = Vector::Ones(n);
    for (Index i = 0; i < n; ++i) v(i) += Complex(1e-3 * dist(rng), 1e-3 * dist(rng));
    return v / v.norm();
}

// Orthogonalize w against the leading `cols` columns of V (MGS plus one
// reorthogonalization pass); coefficients accumulate into h.
double orthogonalize(const Matrix& V, Index cols, Vector& w, Vector& h) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < cols; ++i) {
            const Complex c = V.col(i).dot(w);
            w -= c * V.col(i);
            h(i) += c;
        }
    }
    return w.norm();
}

}  // namespace

std::unique_ptr<ShiftInvertOperator> make_dense_shift_invert(const SparsePencil& p,
                                                             Complex mu) {
    return std::make_unique<DenseShiftInvert>(p, mu);
}

Matrix ProjectionResult::generator() const {
    const Index k = Ghat.rows();
    const double scale = std::max(1.0, Ghat.norm());
    for (const Complex r : ritz_values) {
        if (std::abs(r) <= 10.0 * std::sqrt(kEps) * scale)
            throw NumericalError(
                "projection: a retained Ritz value is zero to working precision; "
                "the subspace leaked into the infinite-eigenvalue part");
    }
    return lu_solve(Ghat, Matrix::Identity(k, k)) + mu * Matrix::Identity(k, k);
}

ProjectionResult arnoldi_invariant_subspace(const SparsePencil& p, Complex mu, Index k,
                                            const ShiftInvertOperator& op,
                                            const ArnoldiOptions& opts) {
    const Index n = p.size();
    if (k < 1) throw InputError("arnoldi: k must be positive");
    if (k > n) throw InputError("arnoldi: k exceeds the problem dimension");

    const Index maxdim = opts.max_basis > 0
                             ? std::min(opts.max_basis, n)
                             : std::min(n, std::max(Index(3) * k, k + 2));

    Matrix V = Matrix::Zero(n, maxdim + 1);
    Matrix H = Matrix::Zero(maxdim + 1, maxdim);
    V.col(0) = deterministic_start(n, opts.seed);

    std::vector<std::string> warnings;
    Index j = 0;                 // active basis size
    double frontier_beta = 0.0;  // |w| left after the last expansion
    int injected = 0;

    auto expand_to = [&](Index limit) {
        while (j < limit) {
            Vector w = op.apply(V.col(j));
            const double before = std::max(w.norm(), 1e-300);
            Vector h = Vector::Zero(maxdim + 1);
            double beta = orthogonalize(V, j + 1, w, h);
            H.col(j).head(j + 1) = h.head(j + 1);
            if (beta <= 1e-13 * before) {
                // Lucky breakdown: the span so far is invariant.  Continue in
                // a fresh deterministic direction orthogonal to it.
                H(j + 1, j) = Complex(0, 0);
                Vector fresh = deterministic_start(n, opts.seed + 1000 + ++injected);
                Vector dummy = Vector::Zero(maxdim + 1);
                const double fn = orthogonalize(V, j + 1, fresh, dummy);
                if (fn <= 1e-13) { ++j; return false; }  // the whole space is spanned
                V.col(j + 1) = fresh / fn;
                frontier_beta = 0.0;
            } else {
                H(j + 1, j) = beta;
                V.col(j + 1) = w / beta;
                frontier_beta = beta;
            }
            ++j;
        }
        return true;
    };

    auto ritz_order = [](const Vector& diag) {
        std::vector<Index> order(static_cast<size_t>(diag.size()));
        std::iota(order.begin(), order.end(), Index(0));
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
            return std::abs(diag(a)) > std::abs(diag(b));
        });
        return order;
    };

    bool converged = false;
    SchurForm sf;
    Index want = std::min(k, maxdim);
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        const bool space_left = expand_to(maxdim);
        sf = schur(H.topLeftCorner(j, j));
        const std::vector<Index> order = ritz_order(sf.T.diagonal());
        std::vector<char> select(size_t(j), 0);
        want = std::min(k, j);
        for (Index i = 0; i < want; ++i) select[size_t(order[size_t(i)])] = 1;
        sf = reorder_schur_positions(sf, select);

        bool all_ok = true;
        for (Index i = 0; i < want; ++i) {
            const double resid = frontier_beta * std::abs(sf.Q(j - 1, i));
            const double target = opts.tol * std::max(std::abs(sf.T(i, i)), 1e-30);
            if (resid > target) { all_ok = false; break; }
        }
        if (all_ok || !space_left) { converged = all_ok; break; }
        if (restart == opts.max_restarts) break;

        // Thick restart: keep the wanted Schur block plus the frontier vector.
        const Index keep = std::min(j - 1, std::max(want, std::min(j - 1, want + (j - want) / 2)));
        Matrix Vnew = V.leftCols(j) * sf.Q.leftCols(keep);
        Matrix Hnew = Matrix::Zero(maxdim + 1, maxdim);
        Hnew.topLeftCorner(keep, keep) = sf.T.topLeftCorner(keep, keep);
        for (Index i = 0; i < keep; ++i)
            Hnew(keep, i) = frontier_beta * sf.Q(j - 1, i);
        V.leftCols(keep) = Vnew;
        V.col(keep) = V.col(j);
        H = Hnew;
        j = keep;
    }

    // Assemble the result from the selected Schur vectors, with residuals
    // recomputed honestly from the operator.
    ProjectionResult out;
    out.mu = mu;
    out.warnings = std::move(warnings);
    out.converged = converged;
    if (!converged)
        out.warnings.push_back(
            "arnoldi: iteration budget exhausted before all Ritz residuals "
            "converged; the reported residuals are the achieved ones");

    Matrix Vsel = V.leftCols(j) * sf.Q.leftCols(want);
    // Re-orthonormalize to guard against drift across many restarts.
    Eigen::HouseholderQR<Matrix> qr(Vsel);
    out.V = qr.householderQ() * Matrix::Identity(n, want);
    {
        Eigen::JacobiSVD<Matrix> svd(Vsel);
        const double smin = svd.singularValues()(want - 1);
        out.basis_condition = smin > 0 ? svd.singularValues()(0) / smin
                                       : std::numeric_limits<double>::infinity();
    }

    Matrix W(n, want);
    for (Index i = 0; i < want; ++i) W.col(i) = op.apply(out.V.col(i));
    out.Ghat = out.V.adjoint() * W;
    out.residuals.resize(size_t(want));
    const Matrix R = W - out.V * out.Ghat;
    for (Index i = 0; i < want; ++i) out.residuals[size_t(i)] = R.col(i).norm();

    Eigen::ComplexEigenSolver<Matrix> es(out.Ghat, false);
    out.ritz_values.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    std::stable_sort(out.ritz_values.begin(), out.ritz_values.end(),
                     [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });

    // Drop Ritz directions that are zero to working precision (they belong to
    // the infinite part and poison Ghat^{-1}).
    const double zero_cut = 10.0 * std::sqrt(kEps) * std::max(1.0, Matrix(p.E).norm() + out.Ghat.norm());
    Index nonzero = 0;
    for (const Complex r : out.ritz_values)
        if (std::abs(r) > zero_cut) ++nonzero;
    if (nonzero < want) {
        std::ostringstream os;
        os << "arnoldi: " << (want - nonzero)
           << " Ritz value(s) are zero to working precision and were dropped "
              "from the projected block";
        out.warnings.push_back(os.str());
        // Re-select within the projected block by a small dense split.
        SchurForm gsf = schur(out.Ghat);
        const std::vector<Index> order = ritz_order(gsf.T.diagonal());
        std::vector<char> select(size_t(want), 0);
        for (Index i = 0; i < nonzero; ++i) select[size_t(order[size_t(i)])] = 1;
        gsf = reorder_schur_positions(gsf, select);
        out.V = out.V * gsf.Q.leftCols(nonzero);
        Matrix W2(n, nonzero);
        for (Index i = 0; i < nonzero; ++i) W2.col(i) = op.apply(out.V.col(i));
        out.Ghat = out.V.adjoint() * W2;
        const Matrix R2 = W2 - out.V * out.Ghat;
        out.residuals.resize(size_t(nonzero));
        for (Index i = 0; i < nonzero; ++i) out.residuals[size_t(i)] = R2.col(i).norm();
        Eigen::ComplexEigenSolver<Matrix> es2(out.Ghat, false);
        out.ritz_values.assign(es2.eigenvalues().data(),
                               es2.eigenvalues().data() + es2.eigenvalues().size());
        std::stable_sort(out.ritz_values.begin(), out.ritz_values.end(),
                         [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
    }
    return out;
}

ProjectionResult arnoldi_invariant_subspace(const SparsePencil& p, Complex mu, Index k,
                                            const ArnoldiOptions& opts) {
    const auto op = make_dense_shift_invert(p, mu);
    return arnoldi_invariant_subspace(p, mu, k, *op, opts);
}

ResolventField interior_pseudospectra(const ProjectionResult& pr, const GridSpec& grid) {
    return field_for_matrix(pr.generator(), grid, FieldKind::dae, pr.mu);
}

ProjectionResult projected_h_norm(ProjectionResult pr, const InnerProductNorm& ipn) {
    if (ipn.R.rows() != pr.V.rows())
        throw InputError("projected_h_norm: H dimension does not match the basis");
    pr.S = qr_economy(ipn.R * pr.V).S;
    return pr;
}

Matrix projected_h_generator(const ProjectionResult& pr) {
    if (pr.S.size() == 0)
        throw InputError("projected_h_generator: attach an inner product with projected_h_norm first");
    const Index k = pr.Ghat.rows();
    const Matrix Ghat_inv = lu_solve(pr.Ghat, Matrix::Identity(k, k));
    const Matrix SG = pr.S * Ghat_inv;
    const Matrix out = pr.S.transpose()
                           .triangularView<Eigen::Lower>()
                           .solve(SG.transpose())
                           .transpose();
    return out + pr.mu * Matrix::Identity(k, k);
}

double projected_growth_bound(const ProjectionResult& pr, double epsilon) {
    if (!(epsilon > 0)) throw InputError("projected_growth_bound: epsilon must be positive");
    return pseudospectral_abscissa_of(pr.generator(), epsilon).value / epsilon;
}

SparsePencil generate_saddle_pencil(Index n_v, Index n_p, std::uint64_t seed,
                                    double density) {
    if (!(n_v > 2 * n_p) || n_p < 1)
        throw InputError("generate_saddle_pencil: need n_v > 2 n_p and n_p >= 1");
    if (!(density > 0.0 && density <= 1.0))
        throw InputError("generate_saddle_pencil: density must be in (0, 1]");

    const Index n = n_v + n_p;
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::mt19937_64 rng(seed + 101 * std::uint64_t(attempt));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);

        std::vector<Triplet> a_entries, e_entries;

        // K: negative-definite symmetric part (diagonal) plus a sparse skew
        // perturbation, so K is invertible and the pencil is stable but
        // nonnormal.
        for (Index i = 0; i < n_v; ++i)
            a_entries.emplace_back(i, i, Complex(-(0.5 + 2.0 * unit(rng)), 0));
        for (Index i = 0; i < n_v; ++i) {
            for (Index jj = i + 1; jj < n_v; ++jj) {
                if (unit(rng) >= density) continue;
                const double v = 0.8 * gauss(rng);
                a_entries.emplace_back(i, jj, Complex(v, 0));
                a_entries.emplace_back(jj, i, Complex(-v, 0));
            }
        }

        // B full rank: a shuffled diagonal backbone plus sparse fill.
        std::vector<Index> cols(static_cast<size_t>(n_v));
        std::iota(cols.begin(), cols.end(), Index(0));
        std::shuffle(cols.begin(), cols.end(), rng);
        Eigen::MatrixXd Bdense = Eigen::MatrixXd::Zero(n_p, n_v);
        for (Index i = 0; i < n_p; ++i)
            Bdense(i, cols[size_t(i)]) = 1.0 + unit(rng);
        for (Index i = 0; i < n_p; ++i)
            for (Index jj = 0; jj < n_v; ++jj)
                if (unit(rng) < density) Bdense(i, jj) += 0.5 * gauss(rng);

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Bdense);
        qr.setThreshold(1e-8);
        if (qr.rank() < n_p) continue;  // rare; reseed

        for (Index i = 0; i < n_p; ++i) {
            for (Index jj = 0; jj < n_v; ++jj) {
                if (Bdense(i, jj) == 0.0) continue;
                a_entries.emplace_back(n_v + i, jj, Complex(Bdense(i, jj), 0));
                a_entries.emplace_back(jj, n_v + i, Complex(Bdense(i, jj), 0));
            }
        }

        // M: diagonally dominant Hermitian positive definite, sparse.
        std::vector<double> rowsum(size_t(n_v), 0.0);
        std::vector<Triplet> m_offdiag;
        for (Index i = 0; i < n_v; ++i) {
            for (Index jj = i + 1; jj < n_v; ++jj) {
                if (unit(rng) >= density * 0.5) continue;
                const double v = 0.1 * gauss(rng);
                m_offdiag.emplace_back(i, jj, Complex(v, 0));
                m_offdiag.emplace_back(jj, i, Complex(v, 0));
                rowsum[size_t(i)] += std::abs(v);
                rowsum[size_t(jj)] += std::abs(v);
            }
        }
        for (Index i = 0; i < n_v; ++i)
            e_entries.emplace_back(i, i, Complex(1.0 + unit(rng) + rowsum[size_t(i)], 0));
        e_entries.insert(e_entries.end(), m_offdiag.begin(), m_offdiag.end());

        return make_sparse_pencil(n, a_entries, e_entries, n_v, n_p);
    }
    throw NumericalError(
        "generate_saddle_pencil: could not construct a full-rank B after 3 reseeds");
}

}  // namespace pspec
