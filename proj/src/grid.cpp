#include "pspec/grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace pspec {

namespace {

int thread_cap() {
    const char* env = std::getenv("PSPEC_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
}

// Eigenvalue sentinel: sigma_min below machine-level for the shifted matrix
// means z is an eigenvalue to working precision.
double sentinel_cutoff(double mscale, Complex z) {
    return 64.0 * kEps * (mscale + std::abs(z) + 1.0);
}

}  // namespace

double sigmin_at(const Matrix& M, Complex z) {
    const Index m = M.rows();
    if (m == 0) return std::numeric_limits<double>::infinity();
    const double s =
        smallest_singular_value(z * Matrix::Identity(m, m) - M);
    return s <= sentinel_cutoff(M.norm(), z) ? 0.0 : s;
}

double resolvent_norm(const FiniteDecomposition& fd, Complex z) {
    const double s = sigmin_at(fd.generator(), z);
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / s;
}

ResolventField field_for_matrix(const Matrix& M, const GridSpec& grid,
                                FieldKind kind, Complex mu) {
    require_square(M, "field_for_matrix");

    // For large dense inputs triangularize once; sigma_min is invariant under
    // the unitary similarity and each point then needs only O(m^2) work.
    Matrix T = M;
    if (M.rows() > 64 && !M.isUpperTriangular()) T = schur(M).T;
    const double mscale = T.norm();

    ResolventField field;
    field.grid = grid;
    field.kind = kind;
    field.mu = mu;
    field.sigmin.resize(grid.ny, grid.nx);

    const Index m = T.rows();
    auto eval_row = [&](Index j) {
        for (Index i = 0; i < grid.nx; ++i) {
            const Complex z = grid.z(i, j);
            double s = smallest_singular_value(z * Matrix::Identity(m, m) - T);
            if (s <= sentinel_cutoff(mscale, z)) s = 0.0;
            field.sigmin(j, i) = s;
        }
    };

    const int threads = std::min<int>(thread_cap(), int(grid.ny));
    if (threads <= 1) {
        for (Index j = 0; j < grid.ny; ++j) eval_row(j);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(size_t(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                for (Index j = t; j < grid.ny; j += threads) eval_row(j);
            });
        }
        for (auto& th : pool) th.join();
    }
    return field;
}

ResolventField pseudospectra_grid(const FiniteDecomposition& fd, const GridSpec& grid) {
    if (fd.finite_dim() == 0)
        throw NumericalError("pseudospectra_grid: the pencil has no finite eigenvalues");
    return field_for_matrix(fd.generator(), grid, FieldKind::dae, fd.mu);
}

ResolventField legacy_grid(const Pencil& p, const GridSpec& grid, FieldKind kind) {
    if (kind == FieldKind::gen1) {
        ResolventField field;
        field.grid = grid;
        field.kind = kind;
        field.sigmin.resize(grid.ny, grid.nx);
        const double scale = std::max(p.A.norm(), p.E.norm());
        for (Index j = 0; j < grid.ny; ++j) {
            for (Index i = 0; i < grid.nx; ++i) {
                const Complex z = grid.z(i, j);
                double s = smallest_singular_value(z * p.E - p.A);
                if (s <= sentinel_cutoff(scale, z) * std::max(1.0, std::abs(z))) s = 0.0;
                field.sigmin(j, i) = s;
            }
        }
        return field;
    }
    if (kind == FieldKind::ruhe) {
        Matrix EinvA;
        try {
            EinvA = lu_solve(p.E, p.A);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string("legacy_grid: Ruhe's definition needs an "
                                             "invertible E; use the dae kind instead (") +
                                 e.what() + ")");
        }
        return field_for_matrix(EinvA, grid, FieldKind::ruhe, Complex(0, 0));
    }
    throw InputError("legacy_grid: pass kind gen1 or ruhe");
}

}  // namespace pspec
