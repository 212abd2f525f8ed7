#pragma once

#include <functional>
#include <memory>
#include <string>

#include "wc4dvar/covariance.hpp"
#include "wc4dvar/lorenz96.hpp"
#include "wc4dvar/network.hpp"

namespace wc4dvar {

enum class Formulation { A3, A2, A1 };

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

/// Matrix-free four-dimensional operators L, L^T, H, H^T over one
/// linearisation trajectory, together with the D and R covariances.
/// All applications are pure; a shared instance is safe to read from
/// several solves at once.
class BlockOperators {
public:
    BlockOperators(ModelConfig cfg, Trajectory traj, ObservationNetwork network,
                   BlockDiagCovariance D, BlockDiagCovariance R);

    int state_dim() const { return s_; }  // (N+1)n
    int obs_dim() const { return p_; }
    int num_steps() const { return cfg_.steps; }
    const ModelConfig& model_config() const { return cfg_; }
    const ObservationNetwork& network() const { return net_; }
    const BlockDiagCovariance& D() const { return D_; }
    const BlockDiagCovariance& R() const { return R_; }
    const Trajectory& trajectory() const { return traj_; }

    // Block bidiagonal model operator: block i of L v is v_i - M_{i-1} v_{i-1}.
    Vector apply_L(const Vector& v) const;
    Vector apply_Lt(const Vector& v) const;
    // Observation selection and its transpose (scatter).
    Vector apply_H(const Vector& v) const;
    Vector apply_Ht(const Vector& w) const;

    Matrix dense_L() const;
    Matrix dense_H() const;

private:
    ModelConfig cfg_;
    Trajectory traj_;
    ObservationNetwork net_;
    BlockDiagCovariance D_;
    BlockDiagCovariance R_;
    int s_;
    int p_;
};

/// One of the three linear systems: symmetric operator, right-hand side,
/// and dimension (A3: 2s+p, A2: 2s, A1: s).
struct SystemInstance {
    Formulation formulation;
    int dim;
    std::function<Vector(const Vector&)> apply;
    Vector rhs;
};

/// Assemble the formulation's operator and right-hand side from the
/// increment data b (state space) and d (observation space).
SystemInstance make_system(const std::shared_ptr<const BlockOperators>& ops,
                           Formulation form, const Vector& b, const Vector& d);

/// Increment and multipliers recovered from a solved system, with the
/// optimality residual ||L^T lambda + H^T mu||.
struct Increment {
    Vector dx;
    Vector lambda;
    Vector mu;
    double optimality_residual;
};

Increment recover_increment(const BlockOperators& ops, Formulation form,
                            const Vector& solution, const Vector& d);

/// Explicit dense coefficient matrix, for desk-scale validation.
/// Refuses dimensions above 4000.
Matrix assemble_dense(const BlockOperators& ops, Formulation form);

}  // namespace wc4dvar
