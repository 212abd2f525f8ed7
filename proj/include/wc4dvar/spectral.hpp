#pragma once

#include <tuple>
#include <vector>

#include "wc4dvar/operators.hpp"
#include "wc4dvar/types.hpp"

namespace wc4dvar {

/// Sorted eigenvalues of one coefficient matrix plus signed counts.
struct Spectrum {
    Vector eigenvalues;  // ascending
    int n_plus = 0;
    int n_minus = 0;
    int n_zero = 0;
    double norm = 0.0;  // largest |eigenvalue|

    double min() const { return eigenvalues[0]; }
    double max() const { return eigenvalues[eigenvalues.size() - 1]; }
    /// Extremes split by sign: (most negative, largest negative,
    /// smallest positive, largest positive). Requires both signs present.
    std::tuple<double, double, double, double> signed_extremes() const;
};

/// Cyclic Jacobi eigensolver for dense symmetric matrices (dim <= 4000).
/// Iterates until the off-diagonal Frobenius norm is below 1e-12 * ||A||_F.
Spectrum sym_eig(const Matrix& A);

struct EigenDecomposition {
    Vector values;   // ascending
    Matrix vectors;  // columns match values
};

/// Jacobi with accumulated rotations; needed for matrix functions.
EigenDecomposition sym_eig_full(const Matrix& A);

/// Signed eigenvalue counts (n_plus, n_minus, n_zero) with zero threshold
/// 1e-10 * ||A||.
std::tuple<int, int, int> inertia(const Spectrum& spectrum);

enum class SingularMode { L, LH };

/// Extreme singular values of L (mode L) or of the stacked (L^T H^T)
/// (mode LH), via the Gram matrix L^T L (+ H^T H).
std::pair<double, double> extreme_singular_values(const BlockOperators& ops, SingularMode mode);

/// The twelve extreme values feeding every bound formula.
struct SpectralSummary {
    double psi_min, psi_max;      // eigenvalues of D
    double nu_min, nu_max;        // eigenvalues of H^T R^-1 H
    double rho_min, rho_max;      // eigenvalues of R
    double theta_min, theta_max;  // singular values of (L^T H^T)
    double sigma_min, sigma_max;  // singular values of L
    double tau_min, tau_max;      // tau_min = min(psi_min, rho_min) etc.
};

SpectralSummary summarize(const BlockOperators& ops);

/// Full sorted eigenvalue lists of D and of H^T R^-1 H, needed by the
/// per-index eigenvalue bands.
Vector d_eigenvalues(const BlockOperators& ops);
Vector r_eigenvalues(const BlockOperators& ops);
Vector nu_eigenvalues(const BlockOperators& ops);

}  // namespace wc4dvar
