#include "pspec/numerical_range.hpp"

#include "pspec/contours.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace pspec {

NumericalRangeBoundary numerical_range_of(const Matrix& M, Index n_theta) {
    require_square(M, "numerical_range");
    if (n_theta < 8) throw InputError("numerical_range: need at least 8 angles");

    NumericalRangeBoundary b;
    b.theta.reserve(size_t(n_theta));
    b.points.reserve(size_t(n_theta));
    b.omega = -std::numeric_limits<double>::infinity();

    for (Index k = 0; k < n_theta; ++k) {
        const double th = 2.0 * std::numbers::pi * double(k) / double(n_theta);
        const Complex rot = std::polar(1.0, th);
        const Matrix H = 0.5 * (rot * M + std::conj(rot) * M.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(H);
        const Vector x = es.eigenvectors().col(M.rows() - 1);  // rightmost
        const Complex p = (x.adjoint() * (M * x))(0, 0);
        b.theta.push_back(th);
        b.points.push_back(p);
        b.omega = std::max(b.omega, p.real());
    }
    return b;
}

NumericalRangeBoundary numerical_range(const FiniteDecomposition& fd, Index n_theta) {
    return numerical_range_of(fd.generator(), n_theta);
}

namespace {

double cross(Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
}

// Andrew's monotone chain; returns CCW hull without closing repeat.
std::vector<Complex> convex_hull(std::vector<Complex> pts) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Complex a, Complex b) { return a == b; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Complex> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double point_segment_distance(Complex p, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

double distance_to_polygon(const std::vector<Complex>& poly, Complex z) {
    double best = std::numeric_limits<double>::infinity();
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++)
        best = std::min(best, point_segment_distance(z, poly[j], poly[i]));
    return best;
}

}  // namespace

bool is_convex_boundary(const std::vector<Complex>& points, double rel_tol) {
    if (points.size() < 3) return true;
    double diam = 0.0;
    for (const Complex p : points)
        for (const Complex q : points) diam = std::max(diam, std::abs(p - q));
    const double tol = rel_tol * std::max(1.0, diam * diam);
    double sign = 0.0;
    const size_t n = points.size();
    for (size_t i = 0; i < n; ++i) {
        const double c = cross(points[i], points[(i + 1) % n], points[(i + 2) % n]);
        if (std::abs(c) <= tol) continue;
        if (sign == 0.0) sign = c > 0 ? 1.0 : -1.0;
        else if (c * sign < 0) return false;
    }
    return true;
}

int check_inclusion(const FiniteDecomposition& fd, const ResolventField& field,
                    double epsilon, Index n_theta) {
    const NumericalRangeBoundary nr = numerical_range(fd, n_theta);
    const std::vector<Complex> hull = convex_hull(nr.points);
    if (hull.empty()) return 0;

    double diam = 0.0;
    for (const Complex p : hull)
        for (const Complex q : hull) diam = std::max(diam, std::abs(p - q));
    // Inscribed-polygon deficit of the angular sampling plus roundoff headroom.
    const double angle = std::numbers::pi / double(n_theta);
    const double slack = 0.5 * (diam + 1.0) * angle * angle + 1e-10;

    int violations = 0;
    for (Index j = 0; j < field.grid.ny; ++j) {
        for (Index i = 0; i < field.grid.nx; ++i) {
            if (!(field.value(i, j) < epsilon)) continue;
            const Complex z = field.grid.z(i, j);
            if (hull.size() >= 3 && point_in_polygon(hull, z)) continue;
            if (distance_to_polygon(hull, z) <= epsilon + slack) continue;
            ++violations;
        }
    }
    return violations;
}

}  // namespace pspec
