#pragma once

#include "pspec/pencil.hpp"
#include "pspec/types.hpp"

namespace pspec {

/// Rectangular window in the complex plane with a regular lattice.
struct GridSpec {
    double re_min, re_max, im_min, im_max;
    Index nx = 2, ny = 2;

    GridSpec() = default;
    GridSpec(double r0, double r1, double i0, double i1, Index nx_, Index ny_)
        : re_min(r0), re_max(r1), im_min(i0), im_max(i1), nx(nx_), ny(ny_) {
        if (!(re_min < re_max) || !(im_min < im_max))
            throw InputError("GridSpec: window must have positive extent");
        if (nx < 2 || ny < 2) throw InputError("GridSpec: need nx >= 2 and ny >= 2");
    }

    double x(Index i) const { return re_min + double(i) * ((re_max - re_min) / double(nx - 1)); }
    double y(Index j) const { return im_min + double(j) * ((im_max - im_min) / double(ny - 1)); }
    Complex z(Index i, Index j) const { return {x(i), y(j)}; }
    double dx() const { return (re_max - re_min) / double(nx - 1); }
    double dy() const { return (im_max - im_min) / double(ny - 1); }
    double cell_diagonal() const { return std::hypot(dx(), dy()); }
};

enum class FieldKind { dae, gen1, ruhe };

/// sigma_min(.) sampled on the lattice; the resolvent norm is 1/sigmin.
/// Values at eigenvalues are stored as exactly 0 (the +inf resolvent
/// sentinel).  Layout: value(i, j) for x-index i, y-index j.
struct ResolventField {
    GridSpec grid;
    FieldKind kind = FieldKind::dae;
    Complex mu{};                     // shift used (dae kind)
    Eigen::MatrixXd sigmin;           // ny rows, nx cols: sigmin(j, i)

    double value(Index i, Index j) const { return sigmin(j, i); }
    double min_value() const { return sigmin.minCoeff(); }
    double max_value() const { return sigmin.maxCoeff(); }
};

/// 1/sigma_min(z I - M); +inf when z is an eigenvalue to working precision.
double resolvent_norm(const FiniteDecomposition& fd, Complex z);

/// sigma_min(z I - M) with the eigenvalue sentinel mapped to exact 0.
double sigmin_at(const Matrix& M, Complex z);

/// Field of sigma_min(z I - M) over the lattice, for any square M.  M is
/// pre-triangularized once (a Schur pass) when it is large and dense, so each
/// point costs O(m^2).  Honors the PSPEC_THREADS row-parallel cap; results
/// are identical to sequential evaluation.
ResolventField field_for_matrix(const Matrix& M, const GridSpec& grid,
                                FieldKind kind, Complex mu);

/// Definition-of-the-artifact field: sigma_min(z I - (G^{-1} + mu I)).
ResolventField pseudospectra_grid(const FiniteDecomposition& fd, const GridSpec& grid);

/// Legacy comparison fields: gen1 evaluates sigma_min(z E - A); ruhe
/// evaluates sigma_min(z I - E^{-1} A) and requires invertible E.
ResolventField legacy_grid(const Pencil& p, const GridSpec& grid, FieldKind kind);

}  // namespace pspec
