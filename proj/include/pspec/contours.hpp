#pragma once

#include "pspec/grid.hpp"

namespace pspec {

struct Polyline {
    std::vector<Complex> vertices;  // first vertex not repeated for closed curves
    bool closed = false;
    double length = 0.0;
};

struct ContourLevel {
    double epsilon = 0.0;
    std::vector<Polyline> polylines;
    double total_length = 0.0;
};

/// Level curves sigma_min = epsilon, one entry per requested level.  A level
/// outside the field's value range gets an empty polyline list.
struct ContourSet {
    std::vector<ContourLevel> levels;
    double cell_diagonal = 0.0;  // lattice resolution the lengths are limited by
};

/// Marching-squares extraction with linear edge interpolation.  The ambiguous
/// saddle cells are resolved by the cell-average rule; segments are chained
/// exactly through shared lattice edges, so no endpoint-matching tolerance is
/// needed beyond the construction itself.
ContourSet extract_contours(const ResolventField& field, const std::vector<double>& epsilons);

/// Ray-casting point-in-polygon test (vertices without closing repeat).
bool point_in_polygon(const std::vector<Complex>& polygon, Complex z);

}  // namespace pspec
