#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "wc4dvar/types.hpp"

namespace wc4dvar {

using LinearOperator = std::function<Vector(const Vector&)>;

/// Termination settings. Defaults follow the reference solver protocol:
/// zero initial guess, relative residual 1e-4, at most 400 iterations.
struct SolverConfig {
    double tol = 1e-4;
    int max_iters = 400;
};

struct SolveLog {
    int iterations = 0;
    std::vector<double> relative_residuals;  // entry 0 is always 1
    bool converged = false;
    double wall_time = 0.0;                  // seconds
    double final_explicit_residual = 0.0;    // ||b - A x|| / ||b|| recomputed at exit
};

/// MINRES for symmetric (possibly indefinite) operators. Residual norms
/// come from the rotation recurrence; stagnation is reported, not an error.
std::pair<Vector, SolveLog> minres(const LinearOperator& apply, const Vector& rhs,
                                   const SolverConfig& cfg = {});

/// Conjugate gradients for SPD operators. Detected negative curvature
/// raises NotSpdError.
std::pair<Vector, SolveLog> cg(const LinearOperator& apply, const Vector& rhs,
                               const SolverConfig& cfg = {});

}  // namespace wc4dvar
