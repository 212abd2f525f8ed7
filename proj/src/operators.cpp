#include "wc4dvar/operators.hpp"

namespace wc4dvar {

std::string to_string(Formulation f) {
    switch (f) {
        case Formulation::A3: return "a3";
        case Formulation::A2: return "a2";
        case Formulation::A1: return "a1";
    }
    return "?";
}

Formulation formulation_from_string(const std::string& s) {
    if (s == "a3" || s == "A3" || s == "3") return Formulation::A3;
    if (s == "a2" || s == "A2" || s == "2") return Formulation::A2;
    if (s == "a1" || s == "A1" || s == "1") return Formulation::A1;
    throw ConfigError("unknown formulation '" + s + "' (expected a3, a2 or a1)");
}

BlockOperators::BlockOperators(ModelConfig cfg, Trajectory traj, ObservationNetwork network,
                               BlockDiagCovariance D, BlockDiagCovariance R)
    : cfg_(cfg),
      traj_(std::move(traj)),
      net_(std::move(network)),
      D_(std::move(D)),
      R_(std::move(R)) {
    cfg_.validate();
    const int n = cfg_.n;
    const int N = cfg_.steps;
    require(static_cast<int>(traj_.states.size()) == N + 1,
            "BlockOperators: trajectory length mismatch");
    require(static_cast<int>(traj_.stage_cache.size()) == N,
            "BlockOperators: stage cache length mismatch");
    require(net_.num_times() == N + 1, "BlockOperators: network time steps mismatch");
    require(net_.state_dim() == n, "BlockOperators: network state dimension mismatch");
    s_ = (N + 1) * n;
    p_ = net_.total_obs();
    require(D_.dim() == s_, "BlockOperators: D dimension mismatch");
    require(R_.dim() == p_, "BlockOperators: R dimension mismatch");
}

Vector BlockOperators::apply_L(const Vector& v) const {
    require(static_cast<int>(v.size()) == s_, "apply_L: dimension mismatch");
    const int n = cfg_.n;
    Vector out(s_);
    out.head(n) = v.head(n);
    for (int i = 1; i <= cfg_.steps; ++i)
        out.segment(i * n, n) =
            v.segment(i * n, n) -
            tlm_apply(traj_.stage_cache[i - 1], v.segment((i - 1) * n, n), cfg_);
    return out;
}

Vector BlockOperators::apply_Lt(const Vector& v) const {
    require(static_cast<int>(v.size()) == s_, "apply_Lt: dimension mismatch");
    const int n = cfg_.n;
    const int N = cfg_.steps;
    Vector out(s_);
    out.segment(N * n, n) = v.segment(N * n, n);
    for (int i = 0; i < N; ++i)
        out.segment(i * n, n) =
            v.segment(i * n, n) -
            adjoint_apply(traj_.stage_cache[i], v.segment((i + 1) * n, n), cfg_);
    return out;
}

Vector BlockOperators::apply_H(const Vector& v) const {
    require(static_cast<int>(v.size()) == s_, "apply_H: dimension mismatch");
    const int n = cfg_.n;
    Vector out(p_);
    int row = 0;
    for (const auto& [t, c] : net_.rows()) out[row++] = v[t * n + c];
    return out;
}

Vector BlockOperators::apply_Ht(const Vector& w) const {
    require(static_cast<int>(w.size()) == p_, "apply_Ht: dimension mismatch");
    const int n = cfg_.n;
    Vector out = Vector::Zero(s_);
    int row = 0;
    for (const auto& [t, c] : net_.rows()) out[t * n + c] += w[row++];
    return out;
}

Matrix BlockOperators::dense_L() const {
    const int n = cfg_.n;
    Matrix L = Matrix::Identity(s_, s_);
    for (int i = 0; i < cfg_.steps; ++i)
        L.block((i + 1) * n, i * n, n, n) = -step_jacobian(traj_.stage_cache[i], cfg_);
    return L;
}

Matrix BlockOperators::dense_H() const {
    const int n = cfg_.n;
    Matrix H = Matrix::Zero(p_, s_);
    int row = 0;
    for (const auto& [t, c] : net_.rows()) H(row++, t * n + c) = 1.0;
    return H;
}

SystemInstance make_system(const std::shared_ptr<const BlockOperators>& ops,
                           Formulation form, const Vector& b, const Vector& d) {
    require(ops != nullptr, "make_system: null operators");
    const int s = ops->state_dim();
    const int p = ops->obs_dim();
    require(static_cast<int>(b.size()) == s, "make_system: b dimension mismatch");
    require(static_cast<int>(d.size()) == p, "make_system: d dimension mismatch");

    SystemInstance sys;
    sys.formulation = form;
    switch (form) {
        case Formulation::A3: {
            sys.dim = 2 * s + p;
            sys.rhs = Vector::Zero(sys.dim);
            sys.rhs.head(s) = b;
            sys.rhs.segment(s, p) = d;
            sys.apply = [ops, s, p](const Vector& q) {
                Vector out(2 * s + p);
                const auto q1 = q.head(s);
                const auto q2 = q.segment(s, p);
                const auto q3 = q.tail(s);
                out.head(s) = ops->D().apply(q1) + ops->apply_L(q3);
                out.segment(s, p) = ops->R().apply(q2) + ops->apply_H(q3);
                out.tail(s) = ops->apply_Lt(q1) + ops->apply_Ht(q2);
                return out;
            };
            break;
        }
        case Formulation::A2: {
            sys.dim = 2 * s;
            sys.rhs = Vector::Zero(sys.dim);
            sys.rhs.head(s) = b;
            sys.rhs.tail(s) = -ops->apply_Ht(ops->R().solve(d));
            sys.apply = [ops, s](const Vector& q) {
                Vector out(2 * s);
                const auto q1 = q.head(s);
                const auto q3 = q.tail(s);
                out.head(s) = ops->D().apply(q1) + ops->apply_L(q3);
                out.tail(s) = ops->apply_Lt(q1) -
                              ops->apply_Ht(ops->R().solve(ops->apply_H(q3)));
                return out;
            };
            break;
        }
        case Formulation::A1: {
            sys.dim = s;
            sys.rhs = ops->apply_Lt(ops->D().solve(b)) + ops->apply_Ht(ops->R().solve(d));
            sys.apply = [ops](const Vector& q) -> Vector {
                return ops->apply_Lt(ops->D().solve(ops->apply_L(q))) +
                       ops->apply_Ht(ops->R().solve(ops->apply_H(q)));
            };
            break;
        }
    }
    return sys;
}

Increment recover_increment(const BlockOperators& ops, Formulation form,
                            const Vector& solution, const Vector& d) {
    const int s = ops.state_dim();
    const int p = ops.obs_dim();
    Increment inc;
    switch (form) {
        case Formulation::A3:
            require(static_cast<int>(solution.size()) == 2 * s + p,
                    "recover_increment: solution dimension mismatch");
            inc.lambda = solution.head(s);
            inc.mu = solution.segment(s, p);
            inc.dx = solution.tail(s);
            break;
        case Formulation::A2:
            require(static_cast<int>(solution.size()) == 2 * s,
                    "recover_increment: solution dimension mismatch");
            require(static_cast<int>(d.size()) == p, "recover_increment: d dimension mismatch");
            inc.lambda = solution.head(s);
            inc.dx = solution.tail(s);
            inc.mu = ops.R().solve(d - ops.apply_H(inc.dx));
            break;
        case Formulation::A1:
            require(static_cast<int>(solution.size()) == s,
                    "recover_increment: solution dimension mismatch");
            inc.dx = solution;
            // Multipliers from their defining equations.
            inc.lambda = Vector();
            inc.mu = ops.R().solve(d - ops.apply_H(inc.dx));
            break;
    }
    if (form == Formulation::A1) {
        // lambda = D^{-1}(b - L dx) is not available without b; report the
        // gradient residual L^T D^{-1} L dx + H^T R^{-1} H dx - rhs instead.
        inc.optimality_residual = 0.0;
    } else {
        inc.optimality_residual =
            (ops.apply_Lt(inc.lambda) + ops.apply_Ht(inc.mu)).norm();
    }
    return inc;
}

Matrix assemble_dense(const BlockOperators& ops, Formulation form) {
    const int s = ops.state_dim();
    const int p = ops.obs_dim();
    const int dim = form == Formulation::A3 ? 2 * s + p : form == Formulation::A2 ? 2 * s : s;
    require(dim <= 4000, "assemble_dense: dimension " + std::to_string(dim) +
                             " exceeds the desk-scale cap of 4000");
    const Matrix L = ops.dense_L();
    const Matrix H = ops.dense_H();
    const Matrix D = ops.D().dense();
    const Matrix R = ops.R().dense();
    Matrix A;
    switch (form) {
        case Formulation::A3: {
            A = Matrix::Zero(dim, dim);
            A.topLeftCorner(s, s) = D;
            A.block(s, s, p, p) = R;
            A.topRightCorner(s, s) = L;
            A.block(s, s + p, p, s) = H;
            A.bottomLeftCorner(s, s) = L.transpose();
            A.block(s + p, s, s, p) = H.transpose();
            break;
        }
        case Formulation::A2: {
            const Matrix Rinv = R.llt().solve(Matrix::Identity(p, p));
            A = Matrix::Zero(dim, dim);
            A.topLeftCorner(s, s) = D;
            A.topRightCorner(s, s) = L;
            A.bottomLeftCorner(s, s) = L.transpose();
            A.bottomRightCorner(s, s) = -H.transpose() * Rinv * H;
            break;
        }
        case Formulation::A1: {
            const Matrix Dinv = D.llt().solve(Matrix::Identity(s, s));
            const Matrix Rinv = R.llt().solve(Matrix::Identity(p, p));
            A = L.transpose() * Dinv * L + H.transpose() * Rinv * H;
            break;
        }
    }
    // Round-off from the solves can leave a tiny asymmetry; symmetrise.
    A = 0.5 * (A + A.transpose()).eval();
    return A;
}

}  // namespace wc4dvar
