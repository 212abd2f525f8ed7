#include "wc4dvar/lorenz96.hpp"

namespace wc4dvar {

void ModelConfig::validate() const {
    require(n >= 4, "ModelConfig: n must be >= 4");
    require(dt >= 0.0, "ModelConfig: dt must be non-negative");
    require(steps >= 1, "ModelConfig: steps must be >= 1");
}

namespace {

inline int wrap(int j, int n) { return ((j % n) + n) % n; }

// Jacobian of the tendency at state u applied to v.
// d f_j / d x_{j-2} = -X_{j-1}, d f_j / d x_{j-1} = X_{j+1} - X_{j-2},
// d f_j / d x_j = -1,           d f_j / d x_{j+1} = X_{j-1}.
Vector jac_apply(const State& u, const Vector& v, int n) {
    Vector out(n);
    for (int j = 0; j < n; ++j) {
        const int jm2 = wrap(j - 2, n), jm1 = wrap(j - 1, n), jp1 = wrap(j + 1, n);
        out[j] = -u[jm1] * v[jm2] + (u[jp1] - u[jm2]) * v[jm1] - v[j] + u[jm1] * v[jp1];
    }
    return out;
}

Vector jac_transpose_apply(const State& u, const Vector& w, int n) {
    Vector out(n);
    for (int i = 0; i < n; ++i) {
        const int im2 = wrap(i - 2, n), im1 = wrap(i - 1, n);
        const int ip1 = wrap(i + 1, n), ip2 = wrap(i + 2, n);
        out[i] = -u[ip1] * w[ip2] + (u[ip2] - u[im1]) * w[ip1] - w[i] + u[im2] * w[im1];
    }
    return out;
}

}  // namespace

State tendency(const State& x, const ModelConfig& cfg) {
    require(static_cast<int>(x.size()) == cfg.n, "tendency: state dimension mismatch");
    const int n = cfg.n;
    Vector out(n);
    for (int j = 0; j < n; ++j) {
        const int jm2 = wrap(j - 2, n), jm1 = wrap(j - 1, n), jp1 = wrap(j + 1, n);
        out[j] = -x[jm2] * x[jm1] + x[jm1] * x[jp1] - x[j] + cfg.forcing;
    }
    return out;
}

std::pair<State, StageData> rk4_step(const State& x, const ModelConfig& cfg) {
    cfg.validate();
    const double dt = cfg.dt;
    StageData sd;
    sd.stages[0] = x;
    const Vector k1 = tendency(sd.stages[0], cfg);
    sd.stages[1] = x + (dt / 2.0) * k1;
    const Vector k2 = tendency(sd.stages[1], cfg);
    sd.stages[2] = x + (dt / 2.0) * k2;
    const Vector k3 = tendency(sd.stages[2], cfg);
    sd.stages[3] = x + dt * k3;
    const Vector k4 = tendency(sd.stages[3], cfg);
    State next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) throw BlowupError("rk4_step: non-finite state", 0);
    return {std::move(next), std::move(sd)};
}

Trajectory integrate(const State& x0, const ModelConfig& cfg,
                     const std::vector<State>* model_error) {
    cfg.validate();
    require(static_cast<int>(x0.size()) == cfg.n, "integrate: x0 dimension mismatch");
    if (model_error) {
        require(static_cast<int>(model_error->size()) == cfg.steps,
                "integrate: model_error must have one entry per step");
        for (const auto& eta : *model_error)
            require(static_cast<int>(eta.size()) == cfg.n,
                    "integrate: model_error entry dimension mismatch");
    }
    Trajectory traj;
    traj.states.reserve(cfg.steps + 1);
    traj.stage_cache.reserve(cfg.steps);
    traj.states.push_back(x0);
    for (int i = 0; i < cfg.steps; ++i) {
        auto [next, sd] = rk4_step(traj.states.back(), cfg);
        if (model_error) next += (*model_error)[i];
        if (!next.allFinite()) throw BlowupError("integrate: non-finite state", i);
        traj.states.push_back(std::move(next));
        traj.stage_cache.push_back(std::move(sd));
    }
    return traj;
}

State tlm_apply(const StageData& stage, const State& dx, const ModelConfig& cfg) {
    const int n = cfg.n;
    require(static_cast<int>(dx.size()) == n, "tlm_apply: vector dimension mismatch");
    for (const auto& s : stage.stages)
        require(static_cast<int>(s.size()) == n, "tlm_apply: stage dimension mismatch");
    const double dt = cfg.dt;
    const Vector dk1 = jac_apply(stage.stages[0], dx, n);
    const Vector dk2 = jac_apply(stage.stages[1], dx + (dt / 2.0) * dk1, n);
    const Vector dk3 = jac_apply(stage.stages[2], dx + (dt / 2.0) * dk2, n);
    const Vector dk4 = jac_apply(stage.stages[3], dx + dt * dk3, n);
    return dx + (dt / 6.0) * (dk1 + 2.0 * dk2 + 2.0 * dk3 + dk4);
}

State adjoint_apply(const StageData& stage, const State& lam, const ModelConfig& cfg) {
    const int n = cfg.n;
    require(static_cast<int>(lam.size()) == n, "adjoint_apply: vector dimension mismatch");
    for (const auto& s : stage.stages)
        require(static_cast<int>(s.size()) == n, "adjoint_apply: stage dimension mismatch");
    const double dt = cfg.dt;
    // Reverse-mode sweep of the stage recursion in tlm_apply.
    Vector acc = lam;
    Vector bk1 = (dt / 6.0) * lam;
    Vector bk2 = (dt / 3.0) * lam;
    Vector bk3 = (dt / 3.0) * lam;
    Vector bk4 = (dt / 6.0) * lam;

    const Vector bd = jac_transpose_apply(stage.stages[3], bk4, n);
    acc += bd;
    bk3 += dt * bd;

    const Vector bc = jac_transpose_apply(stage.stages[2], bk3, n);
    acc += bc;
    bk2 += (dt / 2.0) * bc;

    const Vector bb = jac_transpose_apply(stage.stages[1], bk2, n);
    acc += bb;
    bk1 += (dt / 2.0) * bb;

    acc += jac_transpose_apply(stage.stages[0], bk1, n);
    return acc;
}

Matrix step_jacobian(const StageData& stage, const ModelConfig& cfg) {
    const int n = cfg.n;
    Matrix M(n, n);
    Vector e = Vector::Zero(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        M.col(j) = tlm_apply(stage, e, cfg);
        e[j] = 0.0;
    }
    return M;
}

}  // namespace wc4dvar
