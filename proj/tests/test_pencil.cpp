#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pspec/pencil.hpp"
#include "pspec/projection.hpp"
#include "test_support.hpp"

using namespace pspec;
using namespace pspec::testing;

namespace {

double decomposition_residual(const FiniteDecomposition& fd, const Matrix& Emu) {
    const Index n = fd.n(), d = fd.d, m = n - d;
    Matrix Qfull(n, n), T = Matrix::Zero(n, n);
    Qfull << fd.Q, fd.Qtilde;
    T.topLeftCorner(m, m) = fd.G;
    T.topRightCorner(m, d) = fd.D;
    T.bottomRightCorner(d, d) = fd.N;
    return (Qfull * T * Qfull.adjoint() - Emu).norm() / std::max(1e-300, Emu.norm());
}

}  // namespace

TEST_CASE("shifted_operator: identity E gives A inverse at mu=0") {
    const Matrix A = random_well_conditioned(5, 3);
    const Pencil p(A, Matrix::Identity(5, 5));
    const Matrix E0 = shifted_operator(p, Complex(0, 0));
    CHECK((E0 - A.inverse()).norm() < 1e-12 * E0.norm());
}

TEST_CASE("shifted_operator: P1 at mu=0 has eigenvalues {-1,-1,0}") {
    const Matrix E0 = shifted_operator(example_p1(), Complex(0, 0));
    Eigen::ComplexEigenSolver<Matrix> es(E0, false);
    std::vector<Complex> got(es.eigenvalues().data(), es.eigenvalues().data() + 3);
    CHECK(multiset_distance(got, {Complex(-1, 0), Complex(-1, 0), Complex(0, 0)}) < 1e-8);
}

TEST_CASE("shifted_operator: eigenvalue shift is rejected") {
    const Pencil p1 = example_p1();
    CHECK_THROWS_AS((void)shifted_operator(p1, Complex(-1, 0)), NumericalError);
}

TEST_CASE("select_shift: well-conditioned A picks mu = 0") {
    const Pencil p(random_well_conditioned(6, 11), random_matrix(6, 6, 12));
    CHECK(select_shift(p) == Complex(0, 0));
}

TEST_CASE("select_shift: singular A falls through to 0.25") {
    // A singular but A - 0.25 E well conditioned.
    Matrix A = Matrix::Zero(2, 2);
    A(0, 1) = Complex(1, 0);
    const Pencil p(A, Matrix::Identity(2, 2));
    CHECK(select_shift(p) == Complex(0.25, 0));
}

TEST_CASE("select_shift: singular pencil is rejected with diagnostics") {
    Matrix A = Matrix::Zero(2, 2), E = Matrix::Zero(2, 2);
    A(0, 0) = Complex(1, 0);
    E(0, 0) = Complex(1, 0);
    CHECK_THROWS_WITH_AS((void)select_shift(Pencil(A, E)),
                         doctest::Contains("singular or badly scaled"), NumericalError);
}

TEST_CASE("decompose: invertible E gives d = 0") {
    const Pencil p(random_matrix(6, 6, 21), random_well_conditioned(6, 22));
    const FiniteDecomposition fd = decompose(p, select_shift(p));
    CHECK(fd.d == 0);
    CHECK(fd.index == 0);
    CHECK(fd.N.size() == 0);
    CHECK(decomposition_residual(fd, shifted_operator(p, fd.mu)) < 1e-12);
}

TEST_CASE("decompose: P1 has d = 1, index 1, G diag -1") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    CHECK(fd.d == 1);
    CHECK(fd.index == 1);
    CHECK(std::abs(fd.G(0, 0) - Complex(-1, 0)) < 1e-10);
    CHECK(std::abs(fd.G(1, 1) - Complex(-1, 0)) < 1e-10);
    CHECK(decomposition_residual(fd, shifted_operator(example_p1(), Complex(0, 0))) < 1e-12);
    // [Q Qtilde] unitary
    Matrix Qfull(3, 3);
    Qfull << fd.Q, fd.Qtilde;
    CHECK((Qfull.adjoint() * Qfull - Matrix::Identity(3, 3)).norm() < 1e-12 * 3);
}

TEST_CASE("decompose: saddle pencil certifies d = 2 n_p, index 2") {
    const SparsePencil sp = generate_saddle_pencil(8, 3, 42);
    const Pencil p = sp.dense();
    const FiniteDecomposition fd = decompose(p, Complex(0.25, 0));
    CHECK(fd.d == 6);
    CHECK(fd.index == 2);
    CHECK(decomposition_residual(fd, shifted_operator(p, fd.mu)) < 1e-10);
    // matches the dense generalized eigenvalue oracle
    const auto oracle = oracle_finite_spectrum(p, Complex(1, 0));
    CHECK(oracle.size() == 5);
    CHECK(multiset_distance(finite_eigenvalues(fd), oracle) < 1e-8);
}

TEST_CASE("decompose: d_hint overrides classification and flags overestimates") {
    const SparsePencil sp = generate_saddle_pencil(8, 3, 43);
    const Pencil p = sp.dense();
    const FiniteDecomposition fd = decompose(p, Complex(0.25, 0), Index(6));
    CHECK(fd.d == 6);
    CHECK(fd.index == 2);

    // Overestimating d keeps the decomposition usable but warns.
    const FiniteDecomposition over = decompose(p, Complex(0.25, 0), Index(7));
    CHECK(over.d == 7);
    CHECK(!over.warnings.empty());

    // A hint beyond the sanity ceiling is an input error.
    CHECK_THROWS_AS((void)decompose(p, Complex(0.25, 0), Index(10)), InputError);
}

TEST_CASE("finite_eigenvalues: P1 and P2 match the paper spectra") {
    const FiniteDecomposition f1 = decompose(example_p1(), Complex(0, 0));
    CHECK(multiset_distance(finite_eigenvalues(f1), {Complex(-1, 0), Complex(-1, 0)}) < 1e-10);

    const FiniteDecomposition f2 = decompose(example_p2(), Complex(0, 0));
    CHECK(multiset_distance(finite_eigenvalues(f2), {Complex(-1, 5), Complex(-1, -5)}) < 1e-10);
}

TEST_CASE("finite_eigenvalues: E = I reduces to eigenvalues of A") {
    const Matrix A = random_matrix(7, 7, 61);
    const Pencil p(A, Matrix::Identity(7, 7));
    const FiniteDecomposition fd = decompose(p, select_shift(p));
    Eigen::ComplexEigenSolver<Matrix> es(A, false);
    std::vector<Complex> expect(es.eigenvalues().data(), es.eigenvalues().data() + 7);
    CHECK(multiset_distance(finite_eigenvalues(fd), expect) < 1e-9);
}

TEST_CASE("check_mu_independence: same shift gives zero discrepancy") {
    const Pencil p = example_p1();
    const auto rep = check_mu_independence(p, Complex(0, 0), Complex(0, 0),
                                           {Complex(0.5, 0.5), Complex(-2, 1)});
    CHECK(rep.max_resolvent_rel_diff == 0.0);
    CHECK(rep.max_eigenvalue_diff == 0.0);
}

TEST_CASE("check_mu_independence: P1 and P2 across admissible shifts") {
    std::vector<Complex> probes;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            probes.emplace_back(-1.4 + 0.2 * i, -0.4 + 0.2 * j);

    const auto rep1 = check_mu_independence(example_p1(), Complex(0, 0), Complex(1, 0), probes);
    CHECK(rep1.max_resolvent_rel_diff < 1e-8);
    CHECK(rep1.max_eigenvalue_diff < 1e-8);

    const auto rep2 =
        check_mu_independence(example_p2(), Complex(0, 0), Complex(0.25, 0), probes);
    CHECK(rep2.max_eigenvalue_diff < 1e-10);
}

TEST_CASE("consistency_residual: range vectors, the paper constraint, violations") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    const Vector y = random_vector(2, 71);
    CHECK(consistency_residual(fd, fd.Q * y) < 1e-12 * y.norm());

    Vector x0(3);
    x0 << Complex(-1, 0), Complex(1, 0), Complex(0, 0);  // x1 + x2 + x3 = 0
    CHECK(consistency_residual(fd, x0) < 1e-10);

    Vector bad(3);
    bad << Complex(1, 0), Complex(0, 0), Complex(0, 0);
    CHECK(consistency_residual(fd, bad) > 0.1);
}

TEST_CASE("solution_at: t = 0 returns x0; inconsistent x0 is an error") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    Vector x0(3);
    x0 << Complex(-1, 0), Complex(1, 0), Complex(0, 0);
    CHECK((solution_at(fd, x0, 0.0) - x0).norm() < 1e-12);

    Vector bad(3);
    bad << Complex(1, 0), Complex(0, 0), Complex(0, 0);
    CHECK_THROWS_WITH_AS((void)solution_at(fd, bad, 1.0), doctest::Contains("inconsistent"),
                         InputError);
}

TEST_CASE("solution_at: P1 transient growth and decay") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    Vector x0(3);
    x0 << Complex(-1, 0), Complex(1, 0), Complex(0, 0);
    double peak = 0.0;
    for (double t = 0.0; t <= 20.0; t += 0.05)
        peak = std::max(peak, solution_at(fd, x0, t).norm());
    CHECK(peak > x0.norm());                          // transient growth
    CHECK(solution_at(fd, x0, 40.0).norm() < 1e-10);  // asymptotic decay
}

TEST_CASE("solution_at: satisfies the DAE by central differences") {
    const Pencil p = example_p1();
    const FiniteDecomposition fd = decompose(p, Complex(0, 0));
    Vector x0(3);
    x0 << Complex(-1, 0), Complex(1, 0), Complex(0, 0);
    const double h = 1e-5;
    for (double t : {0.3, 1.0, 2.5}) {
        const Vector dx = (solution_at(fd, x0, t + h) - solution_at(fd, x0, t - h)) / (2 * h);
        const Vector res = p.E * dx - p.A * solution_at(fd, x0, t);
        CHECK(res.norm() < 50.0 * h * h * x0.norm() + 1e-10);
    }
}

TEST_CASE("solution_at: norm equals the reduced exponential norm") {
    const FiniteDecomposition fd = decompose(example_p2(), Complex(0, 0));
    Vector x0 = fd.Q * random_vector(2, 81);
    for (double t : {0.1, 0.7, 3.0}) {
        const double full = solution_at(fd, x0, t).norm();
        const double reduced = (expm(t * fd.generator()) * (fd.Q.adjoint() * x0)).norm();
        CHECK(std::abs(full - reduced) < 1e-10 * std::max(1.0, full));
    }
}

TEST_CASE("discrete_solution: k = 0 identity and residual recursion") {
    const Pencil p = example_p1();
    const FiniteDecomposition fd = decompose(p, Complex(0, 0));
    Vector x0(3);
    x0 << Complex(-1, 0), Complex(1, 0), Complex(0, 0);
    CHECK((discrete_solution(fd, x0, 0) - x0).norm() < 1e-12);

    const double scale = p.A.norm() + p.E.norm();
    for (Index k = 0; k < 50; ++k) {
        const Vector xk = discrete_solution(fd, x0, k);
        const Vector xk1 = discrete_solution(fd, x0, k + 1);
        CHECK((p.E * xk1 - p.A * xk).norm() <= 1e-10 * scale * std::max(1.0, xk.norm()));
    }
}

TEST_CASE("property: 100 seeded planted pencils") {
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<int> nsize(4, 12);
    std::uniform_int_distribution<int> dsize(0, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = nsize(rng);
        const Index d = std::min<Index>(dsize(rng), n - 2);
        const PlantedPencil pp = plant_pencil(n, d, 9000 + std::uint64_t(trial));

        const Complex mu = select_shift(pp.pencil);
        const FiniteDecomposition fd = decompose(pp.pencil, mu, pp.d);
        CHECK(fd.d == pp.d);
        CHECK(decomposition_residual(fd, shifted_operator(pp.pencil, mu)) < 1e-10);

        CHECK(multiset_distance(finite_eigenvalues(fd), pp.finite) < 1e-8);

        // mu-independence of the finite spectrum across a second shift.
        const Complex nu = (mu == Complex(0, 0)) ? Complex(0.25, 0) : Complex(0, 0);
        try {
            const FiniteDecomposition fd2 = decompose(pp.pencil, nu, pp.d);
            CHECK(multiset_distance(finite_eigenvalues(fd), finite_eigenvalues(fd2)) < 1e-8);
        } catch (const NumericalError&) {
            // nu happened to be (near) an eigenvalue; acceptable for random data
        }

        // Nilpotency of the planted infinite structure.
        if (fd.d > 0) {
            CHECK(fd.index == pp.index);
            Matrix P = fd.N;
            for (Index k = 1; k < fd.index; ++k) P = P * fd.N;
            CHECK(P.norm() < 1e-8 * std::max(1.0, std::pow(fd.N.norm(), double(fd.index))));
        }
    }
}

TEST_CASE("property: solution_at consistency over planted pencils") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const PlantedPencil pp = plant_pencil(7, 2, 7000 + seed);
        const Complex mu = select_shift(pp.pencil);
        const FiniteDecomposition fd = decompose(pp.pencil, mu, pp.d);
        const Vector x0 = fd.Q * random_vector(fd.finite_dim(), seed);
        const double h = 1e-5;
        const Vector dx =
            (solution_at(fd, x0, 1.0 + h) - solution_at(fd, x0, 1.0 - h)) / (2 * h);
        const Vector res = pp.pencil.E * dx - pp.pencil.A * solution_at(fd, x0, 1.0);
        CHECK(res.norm() < 1e-6 * std::max(1.0, x0.norm()));
    }
}
