#include "wc4dvar/krylov.hpp"

#include <chrono>
#include <cmath>

namespace wc4dvar {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

std::pair<Vector, SolveLog> minres(const LinearOperator& apply, const Vector& rhs,
                                   const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const int m = static_cast<int>(rhs.size());
    SolveLog log;
    log.relative_residuals.push_back(1.0);
    Vector x = Vector::Zero(m);

    const double beta1 = rhs.norm();
    if (beta1 == 0.0) {
        log.converged = true;
        log.wall_time = seconds_since(t0);
        return {x, log};
    }

    // Lanczos vectors and the Givens-rotation recurrence of MINRES.
    Vector v = rhs / beta1;
    Vector v_prev = Vector::Zero(m);
    Vector w_prev1 = Vector::Zero(m), w_prev2 = Vector::Zero(m);
    double beta = 0.0;       // beta_j (0 on the first pass)
    double eta = beta1;      // phi-bar: current residual norm
    double c_prev = 1.0, c = 1.0;
    double s_prev = 0.0, s = 0.0;

    for (int j = 0; j < cfg.max_iters; ++j) {
        Vector p = apply(v);
        const double alpha = v.dot(p);
        p -= alpha * v + beta * v_prev;
        const double beta_next = p.norm();
        if (!std::isfinite(alpha) || !std::isfinite(beta_next))
            throw NumericalError("minres: non-finite breakdown at iteration " +
                                 std::to_string(j + 1));

        const double delta = c * alpha - c_prev * s * beta;
        const double rho1 = std::hypot(delta, beta_next);
        const double rho2 = s * alpha + c_prev * c * beta;
        const double rho3 = s_prev * beta;
        if (rho1 == 0.0)
            throw NumericalError("minres: singular reduced system at iteration " +
                                 std::to_string(j + 1));

        c_prev = c;
        s_prev = s;
        c = delta / rho1;
        s = beta_next / rho1;

        Vector w = (v - rho3 * w_prev2 - rho2 * w_prev1) / rho1;
        x += (c * eta) * w;
        eta = -s * eta;

        w_prev2 = std::move(w_prev1);
        w_prev1 = std::move(w);
        v_prev = std::move(v);
        beta = beta_next;
        if (beta_next > 0.0)
            v = p / beta_next;
        else
            v = Vector::Zero(m);

        log.iterations = j + 1;
        log.relative_residuals.push_back(std::abs(eta) / beta1);
        if (std::abs(eta) / beta1 <= cfg.tol || beta_next == 0.0) break;
    }

    log.converged = log.relative_residuals.back() <= cfg.tol;
    log.final_explicit_residual = (rhs - apply(x)).norm() / beta1;
    log.wall_time = seconds_since(t0);
    return {x, log};
}

std::pair<Vector, SolveLog> cg(const LinearOperator& apply, const Vector& rhs,
                               const SolverConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const int m = static_cast<int>(rhs.size());
    SolveLog log;
    log.relative_residuals.push_back(1.0);
    Vector x = Vector::Zero(m);

    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
        log.converged = true;
        log.wall_time = seconds_since(t0);
        return {x, log};
    }

    Vector r = rhs;
    Vector p = r;
    double rr = r.squaredNorm();
    for (int j = 0; j < cfg.max_iters; ++j) {
        const Vector Ap = apply(p);
        const double pAp = p.dot(Ap);
        if (!(pAp > 0.0))
            throw NotSpdError("cg: non-positive curvature at iteration " +
                              std::to_string(j + 1));
        const double alpha = rr / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        const double rr_next = r.squaredNorm();
        log.iterations = j + 1;
        log.relative_residuals.push_back(std::sqrt(rr_next) / rhs_norm);
        if (std::sqrt(rr_next) / rhs_norm <= cfg.tol) break;
        p = r + (rr_next / rr) * p;
        rr = rr_next;
    }

    log.converged = log.relative_residuals.back() <= cfg.tol;
    log.final_explicit_residual = (rhs - apply(x)).norm() / rhs_norm;
    log.wall_time = seconds_since(t0);
    return {x, log};
}

}  // namespace wc4dvar
