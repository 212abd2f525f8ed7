#include "wc4dvar/spectral.hpp"

#include <Eigen/Jacobi>
#include <algorithm>
#include <cmath>

namespace wc4dvar {

std::tuple<double, double, double, double> Spectrum::signed_extremes() const {
    require(n_minus > 0 && n_plus > 0, "signed_extremes: spectrum has one sign only");
    const int m = static_cast<int>(eigenvalues.size());
    return {eigenvalues[0], eigenvalues[n_minus - 1], eigenvalues[m - n_plus],
            eigenvalues[m - 1]};
}

namespace {

void check_symmetric(const Matrix& A) {
    require(A.rows() == A.cols(), "sym_eig: matrix not square");
    require(A.rows() <= 4000, "sym_eig: dimension exceeds the desk-scale cap of 4000");
    const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, A.norm()))
        throw NumericalError("sym_eig: input not symmetric (max |A - A^T| = " +
                             std::to_string(asym) + ")");
}

double off_diagonal_norm(const Matrix& A) {
    double sum = 0.0;
    const int m = static_cast<int>(A.rows());
    for (int q = 1; q < m; ++q)
        for (int p = 0; p < q; ++p) sum += A(p, q) * A(p, q);
    return std::sqrt(2.0 * sum);
}

// One cyclic sweep of scalar Jacobi rotations over a small in-cache matrix
// S, accumulating the rotations into Q. Entries at or below `skip` are left
// alone. Returns the number of rotations applied.
int scalar_jacobi_sweep(Matrix& S, Matrix& Q, double skip) {
    const int k = static_cast<int>(S.rows());
    int applied = 0;
    for (int p = 0; p < k - 1; ++p) {
        for (int q = p + 1; q < k; ++q) {
            const double spq = S(p, q);
            if (std::abs(spq) <= skip) continue;
            ++applied;
            const double spp = S(p, p);
            const double sqq = S(q, q);
            // Classical rotation choice: zero S(p,q), smaller angle root.
            const double theta = (sqq - spp) / (2.0 * spq);
            const double t =
                (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(1.0, theta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            // S <- J^T S J with J = I except J(p,p)=J(q,q)=c, J(p,q)=s,
            // J(q,p)=-s; columns first, then rows, then the exact 2x2 core.
            for (int i = 0; i < k; ++i) {
                const double sip = S(i, p), siq = S(i, q);
                S(i, p) = c * sip - s * siq;
                S(i, q) = s * sip + c * siq;
            }
            for (int i = 0; i < k; ++i) {
                const double spi = S(p, i), sqi = S(q, i);
                S(p, i) = c * spi - s * sqi;
                S(q, i) = s * spi + c * sqi;
            }
            S(p, q) = 0.0;
            S(q, p) = 0.0;
            S(p, p) = spp - t * spq;
            S(q, q) = sqq + t * spq;
            for (int i = 0; i < static_cast<int>(Q.rows()); ++i) {
                const double qip = Q(i, p), qiq = Q(i, q);
                Q(i, p) = c * qip - s * qiq;
                Q(i, q) = s * qip + c * qiq;
            }
        }
    }
    return applied;
}

// Cyclic Jacobi sweeps until off(A) <= 1e-12 ||A||_F. The cycle runs over
// index blocks: each block pair is copied into a small working matrix,
// annihilated by scalar rotations in cache, and the accumulated orthogonal
// factor is applied to the big matrix as two panel products. This is the
// textbook block variant of the cyclic method; it performs the same
// rotations but touches memory O(1/block) as often. Deterministic order,
// so repeated runs are bit-identical.
Vector jacobi_eig(Matrix A, Matrix* vectors) {
    const int m = static_cast<int>(A.rows());
    if (vectors) *vectors = Matrix::Identity(m, m);
    if (m == 1) return A.col(0);
    const double target = 1e-12 * A.norm();
    // Rotations at or below this per-entry threshold cannot lift the
    // off-diagonal norm above the target (m * skip < target).
    const double skip = 0.2 * target / m;
    const int max_sweeps = 50;
    const int block = 48;
    int sweep = 0;

    if (m <= 2 * block) {
        Matrix Q = Matrix::Identity(m, m);
        Matrix* q = vectors ? vectors : &Q;
        while (off_diagonal_norm(A) > target) {
            if (++sweep > max_sweeps)
                throw NumericalError("sym_eig: Jacobi did not converge within " +
                                     std::to_string(max_sweeps) + " sweeps");
            scalar_jacobi_sweep(A, *q, skip);
        }
        return A.diagonal();
    }

    std::vector<std::pair<int, int>> blocks;  // (start, size)
    for (int s0 = 0; s0 < m; s0 += block)
        blocks.emplace_back(s0, std::min(block, m - s0));
    const int nb = static_cast<int>(blocks.size());
    Matrix S, Q, P;
    while (off_diagonal_norm(A) > target) {
        if (++sweep > max_sweeps)
            throw NumericalError("sym_eig: Jacobi did not converge within " +
                                 std::to_string(max_sweeps) + " sweeps");
        for (int bi = 0; bi < nb - 1; ++bi) {
            for (int bj = bi + 1; bj < nb; ++bj) {
                const auto [i0, ni] = blocks[bi];
                const auto [j0, nj] = blocks[bj];
                const int k = ni + nj;
                S.resize(k, k);
                S.topLeftCorner(ni, ni) = A.block(i0, i0, ni, ni);
                S.topRightCorner(ni, nj) = A.block(i0, j0, ni, nj);
                S.bottomLeftCorner(nj, ni) = A.block(j0, i0, nj, ni);
                S.bottomRightCorner(nj, nj) = A.block(j0, j0, nj, nj);
                Q = Matrix::Identity(k, k);
                int inner = 0;
                bool any = false;
                while (scalar_jacobi_sweep(S, Q, skip) > 0) {
                    any = true;
                    if (++inner > max_sweeps)
                        throw NumericalError("sym_eig: Jacobi block solve stalled");
                }
                if (!any) continue;
                // A <- G^T A G with G = I except G([I J],[I J]) = Q. Only
                // columns and rows in I and J change. Outside the
                // intersection the new columns are [A(:,I) A(:,J)] * Q;
                // the intersection itself is S (already Q^T S_old Q).
                P.resize(m, k);
                P.leftCols(ni) = A.middleCols(i0, ni);
                P.rightCols(nj) = A.middleCols(j0, nj);
                P = (P * Q).eval();
                P.middleRows(i0, ni) = S.topRows(ni);
                P.middleRows(j0, nj) = S.bottomRows(nj);
                A.middleCols(i0, ni) = P.leftCols(ni);
                A.middleCols(j0, nj) = P.rightCols(nj);
                A.middleRows(i0, ni) = P.leftCols(ni).transpose();
                A.middleRows(j0, nj) = P.rightCols(nj).transpose();
                if (vectors) {
                    P.leftCols(ni) = vectors->middleCols(i0, ni);
                    P.rightCols(nj) = vectors->middleCols(j0, nj);
                    P = (P * Q).eval();
                    vectors->middleCols(i0, ni) = P.leftCols(ni);
                    vectors->middleCols(j0, nj) = P.rightCols(nj);
                }
            }
        }
    }
    return A.diagonal();
}

Spectrum make_spectrum(Vector vals) {
    std::sort(vals.begin(), vals.end());
    Spectrum sp;
    sp.norm = std::max(std::abs(vals[0]), std::abs(vals[vals.size() - 1]));
    const double zero_tol = 1e-10 * sp.norm;
    for (double v : vals) {
        if (v > zero_tol)
            ++sp.n_plus;
        else if (v < -zero_tol)
            ++sp.n_minus;
        else
            ++sp.n_zero;
    }
    sp.eigenvalues = std::move(vals);
    return sp;
}

}  // namespace

Spectrum sym_eig(const Matrix& A) {
    check_symmetric(A);
    return make_spectrum(jacobi_eig(A, nullptr));
}

EigenDecomposition sym_eig_full(const Matrix& A) {
    check_symmetric(A);
    Matrix V;
    Vector vals = jacobi_eig(A, &V);
    // Sort values and columns together.
    const int m = static_cast<int>(vals.size());
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    EigenDecomposition d;
    d.values.resize(m);
    d.vectors.resize(m, m);
    for (int i = 0; i < m; ++i) {
        d.values[i] = vals[order[i]];
        d.vectors.col(i) = V.col(order[i]);
    }
    return d;
}

std::tuple<int, int, int> inertia(const Spectrum& spectrum) {
    return {spectrum.n_plus, spectrum.n_minus, spectrum.n_zero};
}

std::pair<double, double> extreme_singular_values(const BlockOperators& ops,
                                                  SingularMode mode) {
    const Matrix L = ops.dense_L();
    Matrix gram = L.transpose() * L;
    if (mode == SingularMode::LH) {
        const Matrix H = ops.dense_H();
        gram += H.transpose() * H;
    }
    gram = 0.5 * (gram + gram.transpose()).eval();
    const Spectrum sp = sym_eig(gram);
    const double lo = sp.min();
    if (lo < -1e-12 * sp.norm)
        throw NumericalError("extreme_singular_values: negative Gram eigenvalue " +
                             std::to_string(lo));
    return {std::sqrt(std::max(0.0, lo)), std::sqrt(std::max(0.0, sp.max()))};
}

Vector d_eigenvalues(const BlockOperators& ops) {
    std::vector<double> vals;
    for (int i = 0; i < ops.D().num_blocks(); ++i) {
        const Spectrum sp = sym_eig(ops.D().block(i));
        vals.insert(vals.end(), sp.eigenvalues.begin(), sp.eigenvalues.end());
    }
    std::sort(vals.begin(), vals.end());
    return Eigen::Map<Vector>(vals.data(), static_cast<int>(vals.size()));
}

Vector r_eigenvalues(const BlockOperators& ops) {
    std::vector<double> vals;
    for (int i = 0; i < ops.R().num_blocks(); ++i) {
        if (ops.R().block(i).rows() == 0) continue;
        const Spectrum sp = sym_eig(ops.R().block(i));
        vals.insert(vals.end(), sp.eigenvalues.begin(), sp.eigenvalues.end());
    }
    std::sort(vals.begin(), vals.end());
    return Eigen::Map<Vector>(vals.data(), static_cast<int>(vals.size()));
}

Vector nu_eigenvalues(const BlockOperators& ops) {
    const Matrix H = ops.dense_H();
    const Matrix Rinv =
        ops.R().dense().llt().solve(Matrix::Identity(ops.obs_dim(), ops.obs_dim()));
    Matrix HtRiH = H.transpose() * Rinv * H;
    HtRiH = 0.5 * (HtRiH + HtRiH.transpose()).eval();
    Spectrum sp = sym_eig(HtRiH);
    // H^T R^-1 H is positive semidefinite with rank at most p; round-off
    // smears the zero eigenvalues either way, and negative values would
    // break the bound formulas. Snap the zero band to exact zeros.
    for (int i = 0; i < sp.eigenvalues.size(); ++i)
        if (std::abs(sp.eigenvalues[i]) < 1e-10 * sp.norm) sp.eigenvalues[i] = 0.0;
    return sp.eigenvalues;
}

SpectralSummary summarize(const BlockOperators& ops) {
    SpectralSummary s{};
    const Vector psi = d_eigenvalues(ops);
    s.psi_min = psi[0];
    s.psi_max = psi[psi.size() - 1];
    const Vector rho = r_eigenvalues(ops);
    s.rho_min = rho[0];
    s.rho_max = rho[rho.size() - 1];
    const Vector nu = nu_eigenvalues(ops);
    s.nu_min = nu[0];
    s.nu_max = nu[nu.size() - 1];
    auto [sig_lo, sig_hi] = extreme_singular_values(ops, SingularMode::L);
    s.sigma_min = sig_lo;
    s.sigma_max = sig_hi;
    auto [th_lo, th_hi] = extreme_singular_values(ops, SingularMode::LH);
    s.theta_min = th_lo;
    s.theta_max = th_hi;
    s.tau_min = std::min(s.psi_min, s.rho_min);
    s.tau_max = std::max(s.psi_max, s.rho_max);
    return s;
}

}  // namespace wc4dvar
