#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pspec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Raised for malformed user input (files, flags, dimension mismatches).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a computation cannot deliver its contract (singularity,
/// non-convergence, overflow).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Tolerances used across the factorization and decomposition kernels.
/// All values are overridable; the defaults match the library-wide contracts.
struct Tolerances {
    double unitary = 1e-12;      // ||Q*Q - I||_F <= unitary * n
    double recon = 1e-12;        // reconstruction residual, relative
    double solve = 1e-12;        // backward residual of linear solves
    double herm = 1e-12;         // Hermitian symmetry check, relative to ||H||_F
    double rank_factor = 1.0;    // rank cutoff = rank_factor * n * eps * scale
    double consistent = 1e-8;    // consistency residual, relative to ||x0||

    static const Tolerances& defaults() {
        static const Tolerances t{};
        return t;
    }
};

inline constexpr double kEps = 2.220446049250313e-16;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Matrix& m, const std::string& name) {
    if (!m.allFinite())
        throw InputError(name + ": matrix contains NaN or Inf entries");
}

inline void require_square(const Matrix& m, const std::string& name) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw InputError(name + ": expected a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

}  // namespace pspec
