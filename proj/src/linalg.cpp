#include "pspec/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pspec {

namespace {

// Givens rotation [cs, sn; -conj(sn), cs] with real cs mapping (f, g) to
// (r, 0), as in the LAPACK zlartg convention.
struct Rotation {
    double cs;
    Complex sn;
};

Rotation make_rotation(Complex f, Complex g) {
    if (g == Complex(0, 0)) return {1.0, Complex(0, 0)};
    if (f == Complex(0, 0)) return {0.0, std::conj(g) / std::abs(g)};
    const double af = std::abs(f), ag = std::abs(g);
    const double denom = std::hypot(af, ag);
    const Complex phase = f / af;
    return {af / denom, phase * std::conj(g) / denom};
}

// Swap the adjacent diagonal entries k and k+1 of the Schur form (T, Q) by a
// unitary similarity.  The off-diagonal entry T(k,k+1) is invariant under the
// swap; the diagonal entries exchange exactly.
void swap_adjacent(Matrix& T, Matrix& Q, Index k) {
    const Index n = T.rows();
    const Complex t11 = T(k, k);
    const Complex t22 = T(k + 1, k + 1);
    const Rotation rot = make_rotation(T(k, k + 1), t22 - t11);
    const double cs = rot.cs;
    const Complex sn = rot.sn;

    // Rows k, k+1 of T, columns right of the pair.
    for (Index j = k + 2; j < n; ++j) {
        const Complex a = T(k, j), b = T(k + 1, j);
        T(k, j) = cs * a + sn * b;
        T(k + 1, j) = cs * b - std::conj(sn) * a;
    }
    // Columns k, k+1 of T, rows above the pair (conjugated rotation).
    for (Index i = 0; i < k; ++i) {
        const Complex a = T(i, k), b = T(i, k + 1);
        T(i, k) = cs * a + std::conj(sn) * b;
        T(i, k + 1) = cs * b - sn * a;
    }
    T(k, k) = t22;
    T(k + 1, k + 1) = t11;
    // Accumulate into Q.
    for (Index i = 0; i < Q.rows(); ++i) {
        const Complex a = Q(i, k), b = Q(i, k + 1);
        Q(i, k) = cs * a + std::conj(sn) * b;
        Q(i, k + 1) = cs * b - sn * a;
    }
}

std::vector<Complex> sorted_multiset(const Vector& v) {
    std::vector<Complex> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

}  // namespace

SchurForm schur(const Matrix& M) {
    require_square(M, "schur");
    require_finite(M, "schur");
    Eigen::ComplexSchur<Matrix> cs;
    cs.compute(M, /*computeU=*/true);
    if (cs.info() != Eigen::Success) {
        // Locate the largest unresolved subdiagonal entry for the diagnostic.
        const Matrix& T = cs.matrixT();
        Index stalled = 0;
        double worst = -1.0;
        for (Index i = 0; i + 1 < T.rows(); ++i) {
            const double s = std::abs(T(i + 1, i));
            if (s > worst) { worst = s; stalled = i; }
        }
        std::ostringstream os;
        os << "schur: QR iteration did not converge within the iteration budget"
           << " (stalled near index " << stalled << ", subdiagonal " << worst << ")";
        throw NumericalError(os.str());
    }
    SchurForm out;
    out.Q = cs.matrixU();
    out.T = cs.matrixT().triangularView<Eigen::Upper>();
    return out;
}

SchurForm reorder_schur_positions(const SchurForm& sf,
                                  const std::vector<char>& select_position,
                                  double tol_swap) {
    SchurForm out = sf;
    const Index n = out.T.rows();
    if (Index(select_position.size()) != n)
        throw InputError("reorder_schur: selection length does not match dimension");
    const std::vector<Complex> before = sorted_multiset(out.T.diagonal());

    // Track where each original position currently sits while bubbling the
    // selected ones to the front with adjacent swaps.
    std::vector<char> flags = select_position;
    Index target = 0;
    for (Index scan = 0; scan < n; ++scan) {
        if (!flags[size_t(scan)]) continue;
        for (Index k = scan; k > target; --k) {
            swap_adjacent(out.T, out.Q, k - 1);
            std::swap(flags[size_t(k - 1)], flags[size_t(k)]);
        }
        ++target;
    }

    const std::vector<Complex> after = sorted_multiset(out.T.diagonal());
    double drift = 0.0;
    for (size_t i = 0; i < before.size(); ++i)
        drift = std::max(drift, std::abs(before[i] - after[i]));
    if (drift > tol_swap) {
        std::ostringstream os;
        os << "reorder_schur: eigenvalue multiset drifted by " << drift
           << " while swapping nearly-equal entries";
        out.warnings.push_back(os.str());
    }
    return out;
}

SchurForm reorder_schur(const SchurForm& sf,
                        const std::function<bool(Complex)>& select,
                        double tol_swap) {
    // Swaps exchange diagonal entries exactly, so evaluating the predicate on
    // the initial diagonal is equivalent and keeps it a single pass.
    std::vector<char> flags(static_cast<size_t>(sf.T.rows()), 0);
    for (Index i = 0; i < sf.T.rows(); ++i)
        flags[size_t(i)] = select(sf.T(i, i)) ? 1 : 0;
    return reorder_schur_positions(sf, flags, tol_swap);
}

double largest_singular_value(const Matrix& M) {
    if (M.rows() == 0 || M.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& M, Index dense_cutoff) {
    require_square(M, "smallest_singular_value");
    const Index n = M.rows();
    if (n <= dense_cutoff) {
        Eigen::JacobiSVD<Matrix> svd(M);
        return svd.singularValues()(n - 1);
    }

    // Inverse iteration on M*M.  Each step applies inv(M*M) through a pair of
    // solves; triangular inputs get O(n^2) solves, general inputs one LU.
    const bool upper = M.isUpperTriangular();
    const double scale = M.norm();
    if (scale == 0.0) return 0.0;

    std::optional<Eigen::PartialPivLU<Matrix>> lu;
    if (upper) {
        double dmin = M.diagonal().cwiseAbs().minCoeff();
        if (dmin <= 4.0 * kEps * scale) {
            // sigma_min <= min |eigenvalue| for triangular M.
            Eigen::JacobiSVD<Matrix> svd(M);
            return svd.singularValues()(n - 1);
        }
    } else {
        lu.emplace(M);
        const Vector diagU = lu->matrixLU().diagonal();
        if (diagU.cwiseAbs().minCoeff() <= 4.0 * kEps * scale) {
            Eigen::JacobiSVD<Matrix> svd(M);
            return svd.singularValues()(n - 1);
        }
    }

    auto apply_inv = [&](const Vector& v) -> Vector {
        if (upper) {
            Vector z = M.adjoint().triangularView<Eigen::Lower>().solve(v);
            return M.triangularView<Eigen::Upper>().solve(z);
        }
        Vector z = lu->adjoint().solve(v);
        return lu->solve(z);
    };

    Vector v = Vector::Ones(n) / std::sqrt(double(n));
    double sigma = scale;
    for (int it = 0; it < 200; ++it) {
        Vector w = apply_inv(v);
        const double wn = w.norm();
        if (!std::isfinite(wn) || wn == 0.0) return 0.0;
        v = w / wn;
        const double est = (M * v).norm();
        if (std::abs(est - sigma) <= 1e-14 * est && it > 1) { sigma = est; break; }
        sigma = est;
    }
    return sigma;
}

Matrix expm(const Matrix& M) {
    require_square(M, "expm");
    require_finite(M, "expm");
    const Index n = M.rows();
    const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
    if (!(norm1 < 1e6)) {
        std::ostringstream os;
        os << "expm: input 1-norm " << norm1 << " is too large to exponentiate reliably";
        throw NumericalError(os.str());
    }

    static const double theta[] = {1.495585217958292e-2, 2.539398330063230e-1,
                                   9.504178996162932e-1, 2.097847961257068e0,
                                   5.371920351148152e0};
    static const std::vector<std::vector<double>> pade_b = {
        {120, 60, 12, 1},
        {30240, 15120, 3360, 420, 30, 1},
        {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1},
        {17643225600, 8821612800, 2075673600, 302702400, 30270240, 2162160,
         110880, 3960, 90, 1},
        {64764752532480000, 32382376266240000, 7771770303897600,
         1187353796428800, 129060195264000, 10559470521600, 670442572800,
         33522128640, 1323241920, 40840800, 960960, 16380, 182, 1}};

    int degree_idx = 4;
    int squarings = 0;
    for (int i = 0; i < 4; ++i) {
        if (norm1 <= theta[i]) { degree_idx = i; break; }
    }
    Matrix A = M;
    if (degree_idx == 4 && norm1 > theta[4]) {
        squarings = std::max(0, int(std::ceil(std::log2(norm1 / theta[4]))));
        A /= std::pow(2.0, squarings);
    }

    const std::vector<double>& b = pade_b[degree_idx];
    const Matrix A2 = A * A;
    const Matrix I = Matrix::Identity(n, n);
    Matrix U, V;
    if (degree_idx < 4) {
        // U = A (b1 I + b3 A^2 + ...), V = b0 I + b2 A^2 + ...
        U = b[1] * I;
        V = b[0] * I;
        Matrix P = A2;
        for (size_t k = 2; k < b.size(); k += 2) {
            V += b[k] * P;
            if (k + 1 < b.size()) U += b[k + 1] * P;
            if (k + 2 < b.size()) P = P * A2;
        }
        U = A * U;
    } else {
        const Matrix A4 = A2 * A2;
        const Matrix A6 = A4 * A2;
        U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 +
                 b[5] * A4 + b[3] * A2 + b[1] * I);
        V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 +
            b[2] * A2 + b[0] * I;
    }

    Matrix F = (V - U).partialPivLu().solve(V + U);
    for (int s = 0; s < squarings; ++s) F = F * F;
    if (!F.allFinite()) {
        std::ostringstream os;
        os << "expm: overflow while exponentiating (input 1-norm " << norm1 << ")";
        throw NumericalError(os.str());
    }
    return F;
}

EconomyQR qr_economy(const Matrix& M) {
    require_finite(M, "qr_economy");
    const Index m = M.rows(), k = M.cols();
    if (m < k) throw InputError("qr_economy: need rows >= cols");
    Eigen::HouseholderQR<Matrix> qr(M);
    Matrix Z = qr.householderQ() * Matrix::Identity(m, k);
    Matrix S = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

    const double scale = M.norm();
    const double cutoff = double(std::max(m, k)) * kEps * scale;
    for (Index i = 0; i < k; ++i) {
        const double d = std::abs(S(i, i));
        if (d <= cutoff) {
            std::ostringstream os;
            os << "qr_economy: rank deficiency detected at column " << i
               << " (|S(" << i << "," << i << ")| = " << d << ")";
            throw NumericalError(os.str());
        }
        // Phase-normalize so diag(S) is real nonnegative.
        const Complex phase = S(i, i) / d;
        S.row(i) *= std::conj(phase);
        Z.col(i) *= phase;
        S(i, i) = Complex(d, 0.0);
    }
    return {std::move(Z), std::move(S)};
}

Matrix cholesky_upper(const Matrix& H, const Tolerances& tol) {
    require_square(H, "cholesky");
    require_finite(H, "cholesky");
    const Index n = H.rows();
    const double scale = H.norm();
    if ((H - H.adjoint()).norm() > tol.herm * std::max(1.0, scale))
        throw InputError("cholesky: matrix is not Hermitian to tolerance");

    // Lower factor L with H = L L*; returned as R = L*.
    Matrix L = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        Complex sum = H(j, j);
        for (Index k = 0; k < j; ++k) sum -= L(j, k) * std::conj(L(j, k));
        const double pivot = sum.real();
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            std::ostringstream os;
            os << "cholesky: non-positive pivot " << pivot << " at index " << j
               << " (matrix is not positive definite)";
            throw NumericalError(os.str());
        }
        L(j, j) = std::sqrt(pivot);
        for (Index i = j + 1; i < n; ++i) {
            Complex s = H(i, j);
            for (Index k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
            L(i, j) = s / L(j, j);
        }
    }
    return L.adjoint();
}

namespace {

void check_triangular_diagonal(const Matrix& T) {
    const double scale = T.norm();
    const double cutoff = double(T.rows()) * kEps * std::max(1.0, scale);
    for (Index i = 0; i < T.rows(); ++i) {
        if (std::abs(T(i, i)) <= cutoff) {
            std::ostringstream os;
            os << "triangular matrix is singular to working precision at diagonal index "
               << i << " (|T(" << i << "," << i << ")| = " << std::abs(T(i, i)) << ")";
            throw NumericalError(os.str());
        }
    }
}

}  // namespace

Matrix triangular_solve(const Matrix& T, const Matrix& B, bool upper) {
    require_square(T, "triangular_solve");
    if (T.rows() != B.rows()) throw InputError("triangular_solve: dimension mismatch");
    check_triangular_diagonal(T);
    if (upper) return T.triangularView<Eigen::Upper>().solve(B);
    return T.triangularView<Eigen::Lower>().solve(B);
}

Matrix invert_triangular(const Matrix& T, bool upper) {
    return triangular_solve(T, Matrix::Identity(T.rows(), T.rows()), upper);
}

Matrix lu_solve(const Matrix& M, const Matrix& B) {
    require_square(M, "lu_solve");
    if (M.rows() != B.rows()) throw InputError("lu_solve: dimension mismatch");
    Eigen::PartialPivLU<Matrix> lu(M);
    const Vector diagU = lu.matrixLU().diagonal();
    const double scale = M.norm();
    const double cutoff = double(M.rows()) * kEps * std::max(1.0, scale);
    Index worst = 0;
    double dmin = diagU.cwiseAbs().minCoeff(&worst);
    if (dmin <= cutoff) {
        std::ostringstream os;
        os << "lu_solve: matrix is singular to working precision (pivot " << dmin
           << " at index " << worst << ", growth " << diagU.cwiseAbs().maxCoeff() / std::max(dmin, 1e-300)
           << ")";
        throw NumericalError(os.str());
    }
    return lu.solve(B);
}

double inverse_norm1_estimate(const Eigen::PartialPivLU<Matrix>& lu, Index n) {
    const Vector diagU = lu.matrixLU().diagonal();
    if (diagU.cwiseAbs().minCoeff() == 0.0) return std::numeric_limits<double>::infinity();

    // Hager's power method on |inv(M)| in the 1-norm.
    Vector x = Vector::Constant(n, Complex(1.0 / double(n), 0.0));
    double est = 0.0;
    for (int pass = 0; pass < 5; ++pass) {
        Vector y = lu.solve(x);
        if (!y.allFinite()) return std::numeric_limits<double>::infinity();
        est = y.lpNorm<1>();
        Vector xi(n);
        for (Index i = 0; i < n; ++i) {
            const double a = std::abs(y(i));
            xi(i) = a == 0.0 ? Complex(1, 0) : y(i) / a;
        }
        Vector z = lu.adjoint().solve(xi);
        Index j = 0;
        double zmax = z.cwiseAbs().maxCoeff(&j);
        if (zmax <= std::abs(z.dot(x).real()) + 1e-14 * zmax) break;
        x.setZero();
        x(j) = Complex(1, 0);
    }
    return est;
}

double condest_1(const Matrix& M) {
    require_square(M, "condest_1");
    const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 == 0.0) return std::numeric_limits<double>::infinity();
    Eigen::PartialPivLU<Matrix> lu(M);
    const double inv1 = inverse_norm1_estimate(lu, M.rows());
    return norm1 * inv1;
}

}  // namespace pspec
