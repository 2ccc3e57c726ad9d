#pragma once

#include "pspec/contours.hpp"
#include "pspec/grid.hpp"
#include "pspec/pencil.hpp"

namespace pspec {

/// Numerical abscissa: rightmost extent of W(A, E), i.e. the largest
/// eigenvalue of the Hermitian part of the generator.
double numerical_abscissa(const FiniteDecomposition& fd);
double numerical_abscissa_of(const Matrix& M);

/// Result of a pseudospectral abscissa / radius search.
struct LevelSearchResult {
    double value = 0.0;
    Complex argpoint{};       // boundary point attaining the extent
    bool used_fallback = false;
    int iterations = 0;
};

/// epsilon-pseudospectral abscissa via the criss-cross scheme (vertical
/// searches through imaginary eigenvalues of the 2m x 2m level-set test
/// matrix, horizontal maximization between them).  Falls back to a grid plus
/// bisection refinement on stagnation and flags the result.
LevelSearchResult pseudospectral_abscissa_of(const Matrix& M, double epsilon,
                                             double tol = 1e-10);
LevelSearchResult pseudospectral_abscissa(const FiniteDecomposition& fd, double epsilon,
                                          double tol = 1e-10);

/// epsilon-pseudospectral radius via circle/ray criss-cross.
LevelSearchResult pseudospectral_radius_of(const Matrix& M, double epsilon,
                                           double tol = 1e-10);
LevelSearchResult pseudospectral_radius(const FiniteDecomposition& fd, double epsilon,
                                        double tol = 1e-10);

/// Kreiss constant sup_{eps > 0} alpha_eps / eps with the maximizing epsilon.
/// Unstable pencils get the +inf sentinel together with the certifying
/// epsilon.  For stable pencils the constant is always >= 1 (the ratio tends
/// to 1 as epsilon grows); eps_star is +inf when the supremum is attained in
/// that limit.
struct KreissResult {
    double K = 1.0;
    double eps_star = 0.0;
    bool unstable = false;
};
KreissResult kreiss_constant_of(const Matrix& M);
KreissResult kreiss_constant(const FiniteDecomposition& fd);

/// Time-stamped lower bound exp(tau a) / (1 + eps (exp(tau a) - 1)/a) with
/// a = alpha_eps; requires alpha_eps > 0.
double growth_lower_bound_timed(double alpha_eps, double epsilon, double tau);

/// ||exp(t M)|| samples plus the worst-case initial condition at the peak.
struct ExpCurve {
    std::vector<double> t;
    std::vector<double> norm;
    double peak = 1.0;
    double t_peak = 0.0;
    Vector worst_y0;  // coordinates in the finite block; x0 = Q * worst_y0
};
ExpCurve exp_norm_curve_of(const Matrix& M, const std::vector<double>& t_grid);
ExpCurve exp_norm_curve(const FiniteDecomposition& fd, const std::vector<double>& t_grid);

/// The four upper bounds on ||exp(t M)||.
struct ContourBound {
    double epsilon = 0.0;
    double alpha_eps = 0.0;
    double length = 0.0;      // measured polyline length
    double prefactor = 0.0;   // certified (L + pi h) / (2 pi eps)
    bool refused = false;
    std::string refusal_reason;
    std::vector<double> curve;  // per t-grid entry; empty when refused
};

struct BoundCurves {
    std::vector<double> t;
    std::vector<double> coppell;        // exp(t omega)
    std::vector<double> eigenvector;    // kappa(V) exp(t alpha); empty when refused
    double kappa_V = 0.0;               // +inf when (nearly) defective
    double spectral_abscissa = 0.0;
    double omega = 0.0;
    std::vector<ContourBound> contour;
    double kreiss_K = 0.0;
    double kreiss_bound = 0.0;          // e (n - d) K
    std::vector<std::string> warnings;
};

/// Assemble the bound curves on t_grid.  Contour bounds are taken from the
/// provided contour set (one entry per epsilon present there) and each is
/// refused unless its level's curves are closed and enclose the epsilon
/// sublevel set of `field`.
BoundCurves upper_bounds(const FiniteDecomposition& fd, const std::vector<double>& t_grid,
                         const ContourSet& contours, const ResolventField& field);

/// Discrete-time diagnostics: ||M^k|| and the pseudospectral radius sweep.
struct DiscreteReport {
    std::vector<double> power_norm;             // index k = 0..k_max
    std::vector<std::pair<double, double>> rho_eps;
    double spectral_radius = 0.0;
    double kreiss_disk_extension = 0.0;  // sup_eps (rho_eps - 1)/eps; heuristic
                                         // extension, +inf when rho >= 1
};
DiscreteReport discrete_report(const FiniteDecomposition& fd, Index k_max,
                               const std::vector<double>& epsilons);

/// Everything the transient analysis produces, ready for serialization.
struct TransientReport {
    double omega = 0.0;
    double alpha = 0.0;
    std::vector<std::pair<double, double>> alpha_eps;   // (eps, alpha_eps)
    KreissResult kreiss;
    ExpCurve curve;
    std::vector<std::pair<double, double>> lower_bounds;  // (eps, alpha_eps/eps)
    BoundCurves bounds;
};

TransientReport transient_report(const FiniteDecomposition& fd,
                                 const std::vector<double>& epsilons,
                                 const std::vector<double>& t_grid,
                                 const ContourSet& contours,
                                 const ResolventField& field);

}  // namespace pspec
