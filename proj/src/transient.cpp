#include "pspec/transient.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pspec {

namespace {

Vector eigenvalues_of(const Matrix& M) {
    if (M.isUpperTriangular()) return M.diagonal();
    Eigen::ComplexEigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
    return es.eigenvalues();
}

double max_real(const Vector& v) {
    double a = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < v.size(); ++i) a = std::max(a, v(i).real());
    return a;
}

double sigmin_shifted(const Matrix& M, Complex z) {
    return smallest_singular_value(z * Matrix::Identity(M.rows(), M.rows()) - M);
}

// Imaginary parts y where some singular value of M - (x + iy) I equals eps:
// the purely imaginary eigenvalues of the 2m x 2m level-set test matrix.
std::vector<double> vertical_crossings(const Matrix& M, double eps, double x,
                                       double scale) {
    const Index m = M.rows();
    Matrix H(2 * m, 2 * m);
    const Matrix I = Matrix::Identity(m, m);
    H.topLeftCorner(m, m) = M - x * I;
    H.topRightCorner(m, m) = -eps * I;
    H.bottomLeftCorner(m, m) = eps * I;
    H.bottomRightCorner(m, m) = x * I - M.adjoint();
    Eigen::ComplexEigenSolver<Matrix> es(H, false);
    std::vector<double> ys;
    const double tol = 1e-6 * std::max(1.0, scale);
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex l = es.eigenvalues()(i);
        if (std::abs(l.real()) <= tol) ys.push_back(l.imag());
    }
    std::sort(ys.begin(), ys.end());
    return ys;
}

// Real crossings x where some singular value of M - (x + iy) I equals eps.
std::vector<double> horizontal_crossings(const Matrix& M, double eps, double y,
                                         double scale) {
    const Index m = M.rows();
    Matrix C(2 * m, 2 * m);
    const Matrix I = Matrix::Identity(m, m);
    C.topLeftCorner(m, m) = M - Complex(0, y) * I;
    C.topRightCorner(m, m) = -eps * I;
    C.bottomLeftCorner(m, m) = -eps * I;
    C.bottomRightCorner(m, m) = M.adjoint() + Complex(0, y) * I;
    Eigen::ComplexEigenSolver<Matrix> es(C, false);
    std::vector<double> xs;
    const double tol = 1e-6 * std::max(1.0, scale);
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex l = es.eigenvalues()(i);
        if (std::abs(l.imag()) <= tol) xs.push_back(l.real());
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

// Grid sweep plus local refinement; the robust (and slow) fallback.
LevelSearchResult fallback_abscissa(const Matrix& M, double eps) {
    const Vector eigs = eigenvalues_of(M);
    const double alpha = max_real(eigs);
    const double omega = numerical_abscissa_of(M);
    const double skew = largest_singular_value(
        0.5 * (M - M.adjoint()));
    double x_lo = alpha - eps, x_hi = omega + eps + 1e-12;
    double y_lo = -skew - eps, y_hi = skew + eps;
    for (Index i = 0; i < eigs.size(); ++i) {
        y_lo = std::min(y_lo, eigs(i).imag() - eps);
        y_hi = std::max(y_hi, eigs(i).imag() + eps);
    }

    LevelSearchResult out;
    out.used_fallback = true;
    Complex best(alpha, 0.0);
    for (int round = 0; round < 4; ++round) {
        const int nx = 61, ny = 61;
        double found = -std::numeric_limits<double>::infinity();
        Complex arg = best;
        for (int j = 0; j < ny; ++j) {
            const double y = y_lo + (y_hi - y_lo) * j / double(ny - 1);
            for (int i = 0; i < nx; ++i) {
                const double x = x_lo + (x_hi - x_lo) * i / double(nx - 1);
                if (x <= found) continue;
                if (sigmin_shifted(M, {x, y}) < eps) { found = x; arg = {x, y}; }
            }
        }
        if (std::isfinite(found)) best = arg;
        const double hx = (x_hi - x_lo) / double(nx - 1);
        const double hy = (y_hi - y_lo) / double(ny - 1);
        x_lo = best.real() - 2 * hx; x_hi = best.real() + 2 * hx;
        y_lo = best.imag() - 2 * hy; y_hi = best.imag() + 2 * hy;
    }
    out.value = best.real();
    out.argpoint = best;
    return out;
}

}  // namespace

double numerical_abscissa_of(const Matrix& M) {
    require_square(M, "numerical_abscissa");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.adjoint()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues()(M.rows() - 1);
}

double numerical_abscissa(const FiniteDecomposition& fd) {
    return numerical_abscissa_of(fd.generator());
}

LevelSearchResult pseudospectral_abscissa_of(const Matrix& M, double epsilon, double tol) {
    require_square(M, "pseudospectral_abscissa");
    if (!(epsilon > 0)) throw InputError("pseudospectral_abscissa: epsilon must be positive");
    const Index m = M.rows();
    if (m == 1)
        return {M(0, 0).real() + epsilon, M(0, 0) + epsilon, false, 0};

    const Vector eigs = eigenvalues_of(M);
    const double scale = M.norm() + epsilon;
    const double tol_abs = tol * std::max(1.0, scale);

    double x = max_real(eigs);
    Complex arg(x, 0.0);
    for (Index i = 0; i < eigs.size(); ++i)
        if (eigs(i).real() == x) arg = eigs(i);

    for (int it = 1; it <= 60; ++it) {
        std::vector<double> ys = vertical_crossings(M, epsilon, x, scale);
        if (ys.size() < 2) {
            if (it == 1) return fallback_abscissa(M, epsilon);
            return {x, arg, false, it};
        }
        double x_new = x;
        Complex arg_new = arg;
        bool any_inside = false;
        for (size_t k = 0; k + 1 < ys.size(); ++k) {
            const double ym = 0.5 * (ys[k] + ys[k + 1]);
            if (!(sigmin_shifted(M, {x, ym}) < epsilon)) continue;
            any_inside = true;
            const std::vector<double> xs = horizontal_crossings(M, epsilon, ym, scale);
            if (xs.empty()) continue;
            const double cand = xs.back();
            if (cand > x_new) { x_new = cand; arg_new = {cand, ym}; }
        }
        if (!any_inside) {
            if (it == 1) return fallback_abscissa(M, epsilon);
            return {x, arg, false, it};
        }
        if (x_new <= x + tol_abs) return {std::max(x, x_new), arg_new, false, it};
        x = x_new;
        arg = arg_new;
    }
    return fallback_abscissa(M, epsilon);
}

LevelSearchResult pseudospectral_abscissa(const FiniteDecomposition& fd, double epsilon,
                                          double tol) {
    if (fd.finite_dim() == 0)
        throw NumericalError("pseudospectral_abscissa: pencil has no finite eigenvalues");
    return pseudospectral_abscissa_of(fd.generator(), epsilon, tol);
}

namespace {

// Angles theta with some singular value of M - r e^{i theta} I equal to eps:
// unimodular eigenvalues of the pencil A2 - lambda B2 (solved as inv(B2) A2).
std::vector<double> circle_crossings(const Matrix& M, double eps, double r,
                                     double scale, bool* failed) {
    const Index m = M.rows();
    const Matrix I = Matrix::Identity(m, m);
    Matrix A2(2 * m, 2 * m), B2(2 * m, 2 * m);
    A2.setZero();
    B2.setZero();
    A2.topLeftCorner(m, m) = M;
    A2.topRightCorner(m, m) = -eps * I;
    A2.bottomRightCorner(m, m) = r * I;
    B2.topLeftCorner(m, m) = r * I;
    B2.bottomLeftCorner(m, m) = -eps * I;
    B2.bottomRightCorner(m, m) = M.adjoint();

    Eigen::PartialPivLU<Matrix> lu(B2);
    const double dmin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (dmin <= 16.0 * kEps * std::max(1.0, B2.norm())) {
        *failed = true;
        return {};
    }
    *failed = false;
    Eigen::ComplexEigenSolver<Matrix> es(lu.solve(A2), false);
    std::vector<double> thetas;
    const double tol = 1e-6 * std::max(1.0, scale / std::max(r, 1e-30));
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex l = es.eigenvalues()(i);
        if (std::abs(std::abs(l) - 1.0) <= tol) {
            double th = std::arg(l);
            if (th < 0) th += 2.0 * std::numbers::pi;
            thetas.push_back(th);
        }
    }
    std::sort(thetas.begin(), thetas.end());
    return thetas;
}

// Radii r > 0 with some singular value of M - r e^{i theta} I equal to eps:
// real eigenvalues of the Hermitian-structured ray matrix.
std::vector<double> ray_crossings(const Matrix& M, double eps, double theta,
                                  double scale) {
    const Index m = M.rows();
    const Matrix I = Matrix::Identity(m, m);
    const Complex rot = std::polar(1.0, theta);
    Matrix C(2 * m, 2 * m);
    C.topLeftCorner(m, m) = std::conj(rot) * M;
    C.topRightCorner(m, m) = -eps * I;
    C.bottomLeftCorner(m, m) = -eps * I;
    C.bottomRightCorner(m, m) = rot * M.adjoint();
    Eigen::ComplexEigenSolver<Matrix> es(C, false);
    std::vector<double> rs;
    const double tol = 1e-6 * std::max(1.0, scale);
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex l = es.eigenvalues()(i);
        if (std::abs(l.imag()) <= tol && l.real() > 0) rs.push_back(l.real());
    }
    std::sort(rs.begin(), rs.end());
    return rs;
}

LevelSearchResult fallback_radius(const Matrix& M, double eps) {
    const Vector eigs = eigenvalues_of(M);
    double rho = 0.0;
    for (Index i = 0; i < eigs.size(); ++i) rho = std::max(rho, std::abs(eigs(i)));
    const double r_hi = largest_singular_value(M) + eps + 1e-12;

    LevelSearchResult out;
    out.used_fallback = true;
    double best_r = rho;
    double best_th = 0.0;
    double th_lo = 0.0, th_hi = 2.0 * std::numbers::pi;
    double r_lo = 0.0, r_top = r_hi;
    for (int round = 0; round < 5; ++round) {
        const int nr = 61, nt = 121;
        double found = -1.0;
        for (int j = 0; j < nt; ++j) {
            const double th = th_lo + (th_hi - th_lo) * j / double(nt - 1);
            for (int i = nr - 1; i >= 0; --i) {
                const double r = r_lo + (r_top - r_lo) * i / double(nr - 1);
                if (r <= found) break;
                if (sigmin_shifted(M, std::polar(r, th)) < eps) {
                    if (r > found) { found = r; best_th = th; }
                    break;
                }
            }
        }
        if (found >= 0) best_r = std::max(best_r, found);
        const double hr = (r_top - r_lo) / double(nr - 1);
        const double ht = (th_hi - th_lo) / double(nt - 1);
        r_lo = std::max(0.0, best_r - 2 * hr);
        r_top = best_r + 2 * hr;
        th_lo = best_th - 2 * ht;
        th_hi = best_th + 2 * ht;
    }
    out.value = best_r;
    out.argpoint = std::polar(best_r, best_th);
    return out;
}

}  // namespace

LevelSearchResult pseudospectral_radius_of(const Matrix& M, double epsilon, double tol) {
    require_square(M, "pseudospectral_radius");
    if (!(epsilon > 0)) throw InputError("pseudospectral_radius: epsilon must be positive");
    const Index m = M.rows();
    if (m == 1)
        return {std::abs(M(0, 0)) + epsilon,
                M(0, 0) + std::polar(epsilon, std::arg(M(0, 0) == Complex(0, 0)
                                                           ? Complex(1, 0)
                                                           : M(0, 0))),
                false, 0};

    const Vector eigs = eigenvalues_of(M);
    const double scale = M.norm() + epsilon;
    const double tol_abs = tol * std::max(1.0, scale);

    double r = 0.0;
    double theta_best = 0.0;
    for (Index i = 0; i < eigs.size(); ++i) {
        if (std::abs(eigs(i)) > r) { r = std::abs(eigs(i)); theta_best = std::arg(eigs(i)); }
    }
    // Seed from a ray search when the spectrum collapses at the origin.
    if (r < tol_abs) {
        const std::vector<double> rs = ray_crossings(M, epsilon, 0.0, scale);
        if (!rs.empty()) { r = rs.back(); theta_best = 0.0; }
        else return fallback_radius(M, epsilon);
    }

    for (int it = 1; it <= 60; ++it) {
        bool failed = false;
        std::vector<double> ths = circle_crossings(M, epsilon, r, scale, &failed);
        if (failed) return fallback_radius(M, epsilon);

        std::vector<double> mids;
        if (ths.size() < 2) {
            // No (or a tangent) crossing: either the circle lies inside the
            // level set or we have converged.
            if (sigmin_shifted(M, std::polar(r, 0.0)) < epsilon) {
                for (int k = 0; k < 8; ++k)
                    mids.push_back(2.0 * std::numbers::pi * k / 8.0);
            } else if (it == 1) {
                return fallback_radius(M, epsilon);
            } else {
                return {r, std::polar(r, theta_best), false, it};
            }
        } else {
            for (size_t k = 0; k < ths.size(); ++k) {
                const double a = ths[k];
                const double b = (k + 1 < ths.size()) ? ths[k + 1]
                                                      : ths[0] + 2.0 * std::numbers::pi;
                mids.push_back(0.5 * (a + b));
            }
        }

        double r_new = r;
        double th_new = theta_best;
        bool any_inside = false;
        for (const double th : mids) {
            if (!(sigmin_shifted(M, std::polar(r, th)) < epsilon)) continue;
            any_inside = true;
            const std::vector<double> rs = ray_crossings(M, epsilon, th, scale);
            if (rs.empty()) continue;
            if (rs.back() > r_new) { r_new = rs.back(); th_new = th; }
        }
        if (!any_inside) {
            if (it == 1) return fallback_radius(M, epsilon);
            return {r, std::polar(r, theta_best), false, it};
        }
        if (r_new <= r + tol_abs)
            return {std::max(r, r_new), std::polar(std::max(r, r_new), th_new), false, it};
        r = r_new;
        theta_best = th_new;
    }
    return fallback_radius(M, epsilon);
}

LevelSearchResult pseudospectral_radius(const FiniteDecomposition& fd, double epsilon,
                                        double tol) {
    if (fd.finite_dim() == 0)
        throw NumericalError("pseudospectral_radius: pencil has no finite eigenvalues");
    return pseudospectral_radius_of(fd.generator(), epsilon, tol);
}

KreissResult kreiss_constant_of(const Matrix& M) {
    const Vector eigs = eigenvalues_of(M);
    const double alpha = max_real(eigs);
    if (alpha >= -1e-14 * std::max(1.0, M.norm())) {
        // Unstable (or marginally stable): alpha_eps / eps diverges as eps -> 0.
        return {std::numeric_limits<double>::infinity(), 1e-12, true};
    }

    auto ratio = [&](double eps) {
        return pseudospectral_abscissa_of(M, eps).value / eps;
    };

    // Log sweep, then golden-section refinement of the bracketed maximum.
    const int n_samples = 57;
    std::vector<double> epss(n_samples), vals(n_samples);
    int best = 0;
    for (int i = 0; i < n_samples; ++i) {
        const double e = std::pow(10.0, -12.0 + 14.0 * i / double(n_samples - 1));
        epss[size_t(i)] = e;
        vals[size_t(i)] = ratio(e);
        if (vals[size_t(i)] > vals[size_t(best)]) best = i;
    }

    double K = vals[size_t(best)];
    double eps_star = epss[size_t(best)];
    const double lo = epss[size_t(std::max(0, best - 1))];
    const double hi = epss[size_t(std::min(n_samples - 1, best + 1))];
    // Golden section on log(eps).
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo), b = std::log(hi);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = ratio(std::exp(c)), fd_ = ratio(std::exp(d));
    for (int it = 0; it < 40 && (b - a) > 1e-4; ++it) {
        if (fc > fd_) { b = d; d = c; fd_ = fc; c = b - gr * (b - a); fc = ratio(std::exp(c)); }
        else { a = c; c = d; fc = fd_; d = a + gr * (b - a); fd_ = ratio(std::exp(d)); }
    }
    const double refined = std::max(fc, fd_);
    if (refined > K) { K = refined; eps_star = std::exp(fc > fd_ ? c : d); }

    if (K <= 1.0) {
        // alpha_eps/eps increases to 1 as eps grows; the supremum is the limit.
        return {1.0, std::numeric_limits<double>::infinity(), false};
    }
    return {K, eps_star, false};
}

KreissResult kreiss_constant(const FiniteDecomposition& fd) {
    if (fd.finite_dim() == 0)
        throw NumericalError("kreiss_constant: pencil has no finite eigenvalues");
    return kreiss_constant_of(fd.generator());
}

double growth_lower_bound_timed(double alpha_eps, double epsilon, double tau) {
    if (!(alpha_eps > 0))
        throw NumericalError(
            "growth_lower_bound_timed: requires alpha_eps > 0 (no certified growth)");
    if (!(tau > 0)) throw InputError("growth_lower_bound_timed: tau must be positive");
    const double ea = std::exp(std::min(tau * alpha_eps, 500.0));
    return ea / (1.0 + epsilon * (ea - 1.0) / alpha_eps);
}

ExpCurve exp_norm_curve_of(const Matrix& M, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw InputError("exp_norm_curve: empty t grid");
    for (size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
            throw InputError("exp_norm_curve: t grid must be nonnegative ascending");
    }
    ExpCurve c;
    c.t = t_grid;
    c.norm.reserve(t_grid.size());
    size_t peak_idx = 0;
    for (size_t i = 0; i < t_grid.size(); ++i) {
        const double v = largest_singular_value(expm(t_grid[i] * M));
        c.norm.push_back(v);
        if (v > c.norm[peak_idx]) peak_idx = i;
    }
    c.peak = c.norm[peak_idx];
    c.t_peak = c.t[peak_idx];
    Eigen::JacobiSVD<Matrix> svd(expm(c.t_peak * M), Eigen::ComputeThinV);
    c.worst_y0 = svd.matrixV().col(0);
    return c;
}

ExpCurve exp_norm_curve(const FiniteDecomposition& fd, const std::vector<double>& t_grid) {
    return exp_norm_curve_of(fd.generator(), t_grid);
}

BoundCurves upper_bounds(const FiniteDecomposition& fd, const std::vector<double>& t_grid,
                         const ContourSet& contours, const ResolventField& field) {
    const Matrix& M = fd.generator();
    BoundCurves out;
    out.t = t_grid;
    out.omega = numerical_abscissa_of(M);
    out.spectral_abscissa = spectral_abscissa(fd);

    out.coppell.reserve(t_grid.size());
    for (const double t : t_grid) out.coppell.push_back(std::exp(t * out.omega));

    // Eigenvector-conditioning bound kappa(V) exp(t alpha).
    Eigen::ComplexEigenSolver<Matrix> es(M, true);
    bool ev_ok = es.info() == Eigen::Success;
    if (ev_ok) {
        Matrix V = es.eigenvectors();
        for (Index j = 0; j < V.cols(); ++j) V.col(j).normalize();
        Eigen::JacobiSVD<Matrix> svd(V);
        const double smin = svd.singularValues()(V.cols() - 1);
        out.kappa_V = smin > 0 ? svd.singularValues()(0) / smin
                               : std::numeric_limits<double>::infinity();
    } else {
        out.kappa_V = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(out.kappa_V) || out.kappa_V > 1e12) {
        out.kappa_V = std::numeric_limits<double>::infinity();
        out.warnings.push_back(
            "upper_bounds: eigenvector basis is (nearly) defective; the "
            "conditioning bound is reported as +inf");
    } else {
        out.eigenvector.reserve(t_grid.size());
        for (const double t : t_grid)
            out.eigenvector.push_back(out.kappa_V * std::exp(t * out.spectral_abscissa));
    }

    // Contour bounds, one per extracted level.  The polyline is grid-limited,
    // so the certified enclosing curve is its outward dilation by half a cell:
    // perimeter grows by pi h, the rightmost extent by h/2.
    const double h = contours.cell_diagonal;
    for (const ContourLevel& level : contours.levels) {
        ContourBound cb;
        cb.epsilon = level.epsilon;
        if (level.polylines.empty()) {
            cb.refused = true;
            cb.refusal_reason = "no contour at this level on the grid";
            out.contour.push_back(std::move(cb));
            continue;
        }
        bool all_closed = true;
        for (const Polyline& pl : level.polylines) all_closed &= pl.closed;
        if (!all_closed) {
            cb.refused = true;
            cb.refusal_reason = "open contour at the domain boundary";
            out.contour.push_back(std::move(cb));
            continue;
        }
        // Enclosure: every sampled sublevel point must lie inside some curve.
        bool enclosed = true;
        for (Index j = 0; enclosed && j < field.grid.ny; ++j) {
            for (Index i = 0; enclosed && i < field.grid.nx; ++i) {
                if (!(field.value(i, j) < level.epsilon)) continue;
                bool inside = false;
                for (const Polyline& pl : level.polylines)
                    if (point_in_polygon(pl.vertices, field.grid.z(i, j))) { inside = true; break; }
                enclosed = inside;
            }
        }
        if (!enclosed) {
            cb.refused = true;
            cb.refusal_reason = "contours do not enclose the sublevel set";
            out.contour.push_back(std::move(cb));
            continue;
        }
        cb.length = level.total_length;
        cb.alpha_eps = pseudospectral_abscissa_of(M, level.epsilon).value;
        cb.prefactor = (cb.length + std::numbers::pi * h) /
                       (2.0 * std::numbers::pi * level.epsilon);
        cb.curve.reserve(t_grid.size());
        for (const double t : t_grid)
            cb.curve.push_back(cb.prefactor * std::exp(t * (cb.alpha_eps + 0.5 * h)));
        out.contour.push_back(std::move(cb));
    }

    const KreissResult kr = kreiss_constant_of(M);
    out.kreiss_K = kr.K;
    out.kreiss_bound = std::numbers::e * double(fd.finite_dim()) * kr.K;
    return out;
}

DiscreteReport discrete_report(const FiniteDecomposition& fd, Index k_max,
                               const std::vector<double>& epsilons) {
    const Matrix& M = fd.generator();
    DiscreteReport rep;
    Matrix P = Matrix::Identity(M.rows(), M.rows());
    rep.power_norm.reserve(size_t(k_max) + 1);
    for (Index k = 0; k <= k_max; ++k) {
        rep.power_norm.push_back(largest_singular_value(P));
        if (k < k_max) P = M * P;
    }
    for (const double eps : epsilons)
        rep.rho_eps.emplace_back(eps, pseudospectral_radius_of(M, eps).value);

    const Vector eigs = eigenvalues_of(M);
    for (Index i = 0; i < eigs.size(); ++i)
        rep.spectral_radius = std::max(rep.spectral_radius, std::abs(eigs(i)));

    if (rep.spectral_radius >= 1.0) {
        rep.kreiss_disk_extension = std::numeric_limits<double>::infinity();
    } else {
        double best = 0.0;
        for (int i = 0; i < 33; ++i) {
            const double eps = std::pow(10.0, -8.0 + 9.0 * i / 32.0);
            best = std::max(best,
                            (pseudospectral_radius_of(M, eps).value - 1.0) / eps);
        }
        rep.kreiss_disk_extension = std::max(best, 0.0);
    }
    return rep;
}

TransientReport transient_report(const FiniteDecomposition& fd,
                                 const std::vector<double>& epsilons,
                                 const std::vector<double>& t_grid,
                                 const ContourSet& contours,
                                 const ResolventField& field) {
    TransientReport rep;
    rep.omega = numerical_abscissa(fd);
    rep.alpha = spectral_abscissa(fd);
    for (const double eps : epsilons) {
        const double a = pseudospectral_abscissa(fd, eps).value;
        rep.alpha_eps.emplace_back(eps, a);
        rep.lower_bounds.emplace_back(eps, a / eps);
    }
    rep.kreiss = kreiss_constant(fd);
    rep.curve = exp_norm_curve(fd, t_grid);
    rep.bounds = upper_bounds(fd, t_grid, contours, field);
    return rep;
}

}  // namespace pspec
