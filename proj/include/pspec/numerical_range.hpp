#pragma once

#include "pspec/grid.hpp"
#include "pspec/pencil.hpp"

namespace pspec {

/// Boundary of the numerical range W(A, E) = W(G^{-1} + mu I), traced by the
/// supporting-hyperplane sweep over uniformly sampled angles.
struct NumericalRangeBoundary {
    std::vector<double> theta;
    std::vector<Complex> points;
    double omega = 0.0;  // rightmost extent (numerical abscissa)
};

/// Boundary sweep for an arbitrary square matrix.
NumericalRangeBoundary numerical_range_of(const Matrix& M, Index n_theta = 256);

NumericalRangeBoundary numerical_range(const FiniteDecomposition& fd, Index n_theta = 256);

/// Convexity test on the traced boundary (cross products of consecutive
/// edges, tolerance relative to the squared diameter).
bool is_convex_boundary(const std::vector<Complex>& points, double rel_tol = 1e-8);

/// Count field points inside the epsilon sublevel set that escape
/// W(A, E) dilated by epsilon.  Returns 0 when the spectral inclusion holds
/// on the sample.  The convex boundary polygon is sampled with n_theta
/// angles; its inscribed deficit is absorbed into the dilation slack.
int check_inclusion(const FiniteDecomposition& fd, const ResolventField& field,
                    double epsilon, Index n_theta = 1024);

}  // namespace pspec
