#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pspec/contours.hpp"
#include "pspec/grid.hpp"
#include "pspec/numerical_range.hpp"
#include "test_support.hpp"

#include <Eigen/SVD>

#include <numbers>

using namespace pspec;
using namespace pspec::testing;

namespace {

// Pointwise relative agreement of two fields with the eigenvalue-sentinel
// floor: values that are both zero to working precision count as equal.
double field_rel_diff(const ResolventField& a, const ResolventField& b, double floor = 1e-12) {
    REQUIRE(a.grid.nx == b.grid.nx);
    REQUIRE(a.grid.ny == b.grid.ny);
    double worst = 0.0;
    for (Index j = 0; j < a.grid.ny; ++j) {
        for (Index i = 0; i < a.grid.nx; ++i) {
            const double x = a.value(i, j), y = b.value(i, j);
            if (std::max(x, y) <= floor) continue;
            worst = std::max(worst, std::abs(x - y) / std::max(x, y));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("resolvent_norm: scalar case and eigenvalue sentinel") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = Complex(-1, 0);
    A(1, 1) = Complex(-3, 0);
    const Pencil p(A, Matrix::Identity(2, 2));
    const FiniteDecomposition fd = decompose(p, select_shift(p));
    CHECK(resolvent_norm(fd, Complex(0, 0)) == doctest::Approx(1.0));  // dist to -1 is 1
    CHECK(std::isinf(resolvent_norm(fd, Complex(-1, 0))));
}

TEST_CASE("resolvent_norm: P2 eigenvalue gives the infinity sentinel") {
    const FiniteDecomposition fd = decompose(example_p2(), Complex(0, 0));
    CHECK(std::isinf(resolvent_norm(fd, Complex(-1, 5))));
    CHECK(std::isfinite(resolvent_norm(fd, Complex(-1, 4.5))));
}

TEST_CASE("resolvent_norm: P1 matches a dense SVD oracle at z = 0") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    const Matrix M = fd.generator();
    Eigen::JacobiSVD<Matrix> svd(-M);
    const double expected = 1.0 / svd.singularValues()(1);
    CHECK(resolvent_norm(fd, Complex(0, 0)) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pseudospectra_grid: normal matrix gives distance to spectrum") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = Complex(-1, 1);
    A(1, 1) = Complex(-2, -1);
    const Pencil p(A, Matrix::Identity(2, 2));
    const FiniteDecomposition fd = decompose(p, select_shift(p));
    const GridSpec grid(-3, 0, -2, 2, 21, 17);
    const ResolventField f = pseudospectra_grid(fd, grid);
    for (Index j = 0; j < grid.ny; ++j) {
        for (Index i = 0; i < grid.nx; ++i) {
            const Complex z = grid.z(i, j);
            const double dist = std::min(std::abs(z - Complex(-1, 1)),
                                         std::abs(z - Complex(-2, -1)));
            CHECK(std::abs(f.value(i, j) - dist) <= 1e-10 * std::max(1.0, dist));
        }
    }
}

TEST_CASE("pseudospectra_grid: P1 epsilon=1 sublevel set crosses Re z = 1") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    const GridSpec grid(-3, 1, -2, 2, 101, 101);
    const ResolventField f = pseudospectra_grid(fd, grid);
    bool crossing = false;
    for (Index j = 0; j < grid.ny; ++j)
        crossing |= f.value(grid.nx - 1, j) < 1.0;  // rightmost column is Re z = 1
    CHECK(crossing);
}

TEST_CASE("pseudospectra_grid: refinement subsamples exactly") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    const ResolventField coarse = pseudospectra_grid(fd, GridSpec(-3, 1, -2, 2, 51, 51));
    const ResolventField fine = pseudospectra_grid(fd, GridSpec(-3, 1, -2, 2, 101, 101));
    for (Index j = 0; j < 51; ++j)
        for (Index i = 0; i < 51; ++i)
            CHECK(coarse.value(i, j) == fine.value(2 * i, 2 * j));
}

TEST_CASE("pseudospectra_grid: row-parallel evaluation is bit-identical") {
    const FiniteDecomposition fd = decompose(example_p2(), Complex(0, 0));
    const GridSpec grid(-4, 2, -7, 7, 41, 41);
    const ResolventField serial = pseudospectra_grid(fd, grid);
    setenv("PSPEC_THREADS", "4", 1);
    const ResolventField parallel = pseudospectra_grid(fd, grid);
    unsetenv("PSPEC_THREADS");
    CHECK((serial.sigmin - parallel.sigmin).norm() == 0.0);
}

TEST_CASE("legacy_grid: all definitions coincide for E = I") {
    const Matrix A = random_matrix(5, 5, 300);
    const Pencil p(A, Matrix::Identity(5, 5));
    const FiniteDecomposition fd = decompose(p, select_shift(p));
    const GridSpec grid(-3, 3, -3, 3, 21, 21);
    const ResolventField dae = pseudospectra_grid(fd, grid);
    const ResolventField gen1 = legacy_grid(p, grid, FieldKind::gen1);
    const ResolventField ruhe = legacy_grid(p, grid, FieldKind::ruhe);
    CHECK(field_rel_diff(dae, gen1) < 1e-8);
    CHECK(field_rel_diff(dae, ruhe) < 1e-8);
}

TEST_CASE("legacy_grid: ruhe rejects singular E") {
    CHECK_THROWS_WITH_AS((void)legacy_grid(example_p1(), GridSpec(-1, 1, -1, 1, 5, 5),
                                           FieldKind::ruhe),
                         doctest::Contains("dae"), NumericalError);
}

TEST_CASE("legacy_grid: premultiplication changes gen1 but not dae") {
    const Pencil p = example_p1();
    Matrix T1(3, 3), T2(3, 3);
    T1 << Complex(1), Complex(-4), Complex(16),
          Complex(0), Complex(1),  Complex(-1),
          Complex(0), Complex(0),  Complex(1);
    T2 << Complex(1), Complex(-10), Complex(0),
          Complex(0), Complex(1),   Complex(0),
          Complex(0), Complex(0),   Complex(1);
    const GridSpec grid(-3, 1, -2, 2, 41, 41);
    const FiniteDecomposition fd = decompose(p, Complex(0, 0));
    const ResolventField dae = pseudospectra_grid(fd, grid);

    auto max_ratio = [&](const ResolventField& a, const ResolventField& b) {
        double worst = 0.0;
        for (Index j = 0; j < grid.ny; ++j) {
            for (Index i = 0; i < grid.nx; ++i) {
                const double x = a.value(i, j), y = b.value(i, j);
                if (std::min(x, y) <= 1e-12) continue;
                worst = std::max(worst, std::max(x / y, y / x));
            }
        }
        return worst;
    };

    std::vector<ResolventField> gen1_fields{legacy_grid(p, grid, FieldKind::gen1)};
    for (const Matrix& T : {T1, T2}) {
        const Pencil tp(T * p.A, T * p.E);
        const FiniteDecomposition tfd = decompose(tp, Complex(0, 0));
        CHECK(field_rel_diff(dae, pseudospectra_grid(tfd, grid)) < 1e-8);

        gen1_fields.push_back(legacy_grid(tp, grid, FieldKind::gen1));
        CHECK(max_ratio(gen1_fields.front(), gen1_fields.back()) > 3.0);
    }
    // Across the three pencils of the experiment the legacy fields disagree
    // by more than an order of magnitude at some point.
    double trio = 0.0;
    for (size_t i = 0; i < gen1_fields.size(); ++i)
        for (size_t j = i + 1; j < gen1_fields.size(); ++j)
            trio = std::max(trio, max_ratio(gen1_fields[i], gen1_fields[j]));
    CHECK(trio > 10.0);
}

TEST_CASE("property: monotone nesting of sublevel sets") {
    const FiniteDecomposition fd = decompose(example_p2(), Complex(0, 0));
    const ResolventField f = pseudospectra_grid(fd, GridSpec(-4, 2, -7, 7, 41, 41));
    for (Index j = 0; j < f.grid.ny; ++j)
        for (Index i = 0; i < f.grid.nx; ++i)
            if (f.value(i, j) < 0.1) CHECK(f.value(i, j) < 1.0);  // nesting by definition
}

TEST_CASE("property: mu-invariance and T-invariance of dae fields") {
    const GridSpec grid(-3, 1, -2, 2, 31, 31);
    for (std::uint64_t seed : {41u, 42u, 43u}) {
        const PlantedPencil pp = plant_pencil(6, 2, 4000 + seed);
        const FiniteDecomposition f1 = decompose(pp.pencil, select_shift(pp.pencil), pp.d);
        const FiniteDecomposition f2 = decompose(pp.pencil, Complex(0.5, 0.5), pp.d);
        CHECK(field_rel_diff(pseudospectra_grid(f1, grid), pseudospectra_grid(f2, grid)) <
              1e-8);

        const Matrix T = random_well_conditioned(6, 5000 + seed);
        const Pencil tp(T * pp.pencil.A, T * pp.pencil.E);
        const FiniteDecomposition f3 = decompose(tp, select_shift(tp), pp.d);
        CHECK(field_rel_diff(pseudospectra_grid(f1, grid), pseudospectra_grid(f3, grid)) <
              1e-8);
    }
}

TEST_CASE("extract_contours: epsilon disk of a scalar") {
    Matrix A(1, 1);
    A(0, 0) = Complex(-1, 0.5);
    const Pencil p(A, Matrix::Identity(1, 1));
    const FiniteDecomposition fd = decompose(p, select_shift(p));
    const double eps = 0.4;
    const GridSpec grid(-2, 0, -0.5, 1.5, 201, 201);
    const ContourSet cs = extract_contours(pseudospectra_grid(fd, grid), {eps});
    REQUIRE(cs.levels.size() == 1);
    REQUIRE(cs.levels[0].polylines.size() == 1);
    const Polyline& pl = cs.levels[0].polylines[0];
    CHECK(pl.closed);
    // circle of radius eps: vertices on it, length within 1% of 2 pi eps
    for (const Complex v : pl.vertices)
        CHECK(std::abs(std::abs(v - Complex(-1, 0.5)) - eps) < 2e-3);
    CHECK(pl.length == doctest::Approx(2 * std::numbers::pi * eps).epsilon(0.01));
}

TEST_CASE("extract_contours: P1 nested closed curves") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    const GridSpec grid(-8, 4, -6, 6, 201, 201);
    const ContourSet cs =
        extract_contours(pseudospectra_grid(fd, grid), {1.0, 0.1, 0.01});
    REQUIRE(cs.levels.size() == 3);
    for (const ContourLevel& level : cs.levels) {
        REQUIRE(!level.polylines.empty());
        for (const Polyline& pl : level.polylines) CHECK(pl.closed);
    }
    // nesting: a point on the 0.1 curve lies inside the 1.0 curve, and the
    // 0.01 curve inside the 0.1 curve (sigma_min sublevel sets nest).
    const auto& outer = cs.levels[0].polylines;
    for (const Polyline& pl : cs.levels[1].polylines) {
        for (const Complex v : pl.vertices) {
            bool inside = false;
            for (const Polyline& o : outer) inside |= point_in_polygon(o.vertices, v);
            CHECK(inside);
        }
    }
    const auto& mid = cs.levels[1].polylines;
    for (const Polyline& pl : cs.levels[2].polylines) {
        for (const Complex v : pl.vertices) {
            bool inside = false;
            for (const Polyline& o : mid) inside |= point_in_polygon(o.vertices, v);
            CHECK(inside);
        }
    }
}

TEST_CASE("extract_contours: level above the field range is empty") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    const ResolventField f = pseudospectra_grid(fd, GridSpec(-2, 0, -1, 1, 31, 31));
    const ContourSet cs = extract_contours(f, {f.max_value() * 10.0});
    CHECK(cs.levels[0].polylines.empty());
    CHECK(cs.levels[0].total_length == 0.0);
}

TEST_CASE("numerical_range: Hermitian matrix gives the real segment") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = Complex(-2, 0);
    A(1, 1) = Complex(1, 0);
    const NumericalRangeBoundary nr = numerical_range_of(A, 64);
    CHECK(nr.omega == doctest::Approx(1.0).epsilon(1e-12));
    for (const Complex p : nr.points) {
        CHECK(std::abs(p.imag()) < 1e-10);
        CHECK(p.real() > -2.0 - 1e-10);
        CHECK(p.real() < 1.0 + 1e-10);
    }
}

TEST_CASE("numerical_range: Jordan block gives the half-radius disk") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 1) = Complex(1, 0);
    const NumericalRangeBoundary nr = numerical_range_of(A, 128);
    CHECK(nr.omega == doctest::Approx(0.5).epsilon(1e-10));
    for (const Complex p : nr.points) CHECK(std::abs(std::abs(p) - 0.5) < 1e-10);
    CHECK(is_convex_boundary(nr.points));
}

TEST_CASE("numerical_range: P1 has positive abscissa and contains the spectrum") {
    const FiniteDecomposition fd = decompose(example_p1(), Complex(0, 0));
    const NumericalRangeBoundary nr = numerical_range(fd);
    CHECK(nr.omega > 0.0);
    CHECK(is_convex_boundary(nr.points));

    // omega agrees with the Hermitian-part eigenvalue oracle
    const Matrix M = fd.generator();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.adjoint()));
    CHECK(nr.omega == doctest::Approx(es.eigenvalues()(M.rows() - 1)).epsilon(1e-10));
}

TEST_CASE("check_inclusion: normal matrices and the paper fixtures") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = Complex(-1, 1);
    A(1, 1) = Complex(-2, 0);
    const Pencil pn(A, Matrix::Identity(2, 2));
    const FiniteDecomposition fn = decompose(pn, select_shift(pn));
    const ResolventField f = pseudospectra_grid(fn, GridSpec(-4, 1, -2, 3, 101, 101));
    CHECK(check_inclusion(fn, f, 1.0) == 0);
    CHECK(check_inclusion(fn, f, 0.1) == 0);

    for (const Pencil& p : {example_p1(), example_p2()}) {
        const FiniteDecomposition fd = decompose(p, Complex(0, 0));
        const ResolventField field =
            pseudospectra_grid(fd, GridSpec(-8, 6, -8, 8, 101, 101));
        CHECK(check_inclusion(fd, field, 1.0) == 0);
        CHECK(check_inclusion(fd, field, 0.1) == 0);
    }
}

TEST_CASE("property: spectrum lies inside the numerical range polygon") {
    for (std::uint64_t seed : {61u, 62u, 63u}) {
        const PlantedPencil pp = plant_pencil(7, 2, 6000 + seed);
        const FiniteDecomposition fd =
            decompose(pp.pencil, select_shift(pp.pencil), pp.d);
        const NumericalRangeBoundary nr = numerical_range(fd, 512);
        CHECK(is_convex_boundary(nr.points, 1e-6));
        for (const Complex l : finite_eigenvalues(fd)) {
            // distance from the eigenvalue to the polygon is at most the
            // boundary-sampling tolerance
            double dist = std::numeric_limits<double>::infinity();
            const size_t n = nr.points.size();
            bool inside = point_in_polygon(nr.points, l);
            for (size_t i = 0, j = n - 1; i < n; j = i++) {
                const Complex a = nr.points[j], b = nr.points[i], d = b - a;
                double t = std::norm(d) == 0.0
                               ? 0.0
                               : std::clamp(((l - a).real() * d.real() +
                                             (l - a).imag() * d.imag()) /
                                                std::norm(d),
                                            0.0, 1.0);
                dist = std::min(dist, std::abs(l - (a + t * d)));
            }
            CHECK((inside || dist < 1e-8));
        }
    }
}
