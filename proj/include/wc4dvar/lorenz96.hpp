#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "wc4dvar/types.hpp"

namespace wc4dvar {

/// Lorenz 96 model parameters and integration settings.
struct ModelConfig {
    int n = 40;           ///< state dimension, >= 4 so the cyclic indices are distinct
    double forcing = 8.0; ///< forcing term F
    double dt = 2.5e-2;   ///< RK4 time step
    int steps = 15;       ///< number of time steps N

    void validate() const;
};

using State = Vector;

/// The four RK4 stage states of one step, kept so the step can be
/// linearised later without re-integrating.
struct StageData {
    std::array<State, 4> stages;
};

/// Time-ordered model states x_0..x_N plus per-step stage data.
struct Trajectory {
    std::vector<State> states;       // steps+1 entries
    std::vector<StageData> stage_cache;  // steps entries
};

/// Right-hand side dX^j/dt = -X^{j-2} X^{j-1} + X^{j-1} X^{j+1} - X^j + F
/// with cyclic indices.
State tendency(const State& x, const ModelConfig& cfg);

/// One classical RK4 step. Returns the new state and the stage states.
std::pair<State, StageData> rk4_step(const State& x, const ModelConfig& cfg);

/// Integrate from x0 for cfg.steps steps. If model_error is given it must
/// hold cfg.steps vectors; x_{i+1} = rk4(x_i) + model_error[i].
Trajectory integrate(const State& x0, const ModelConfig& cfg,
                     const std::vector<State>* model_error = nullptr);

/// Jacobian-vector product of the discrete RK4 map, linearised at the
/// cached stage states (differentiation of the scheme itself).
State tlm_apply(const StageData& stage, const State& dx, const ModelConfig& cfg);

/// Transpose of the exact RK4 Jacobian applied to lam.
State adjoint_apply(const StageData& stage, const State& lam, const ModelConfig& cfg);

/// Dense n-by-n Jacobian of the RK4 step (column-by-column tlm_apply).
Matrix step_jacobian(const StageData& stage, const ModelConfig& cfg);

}  // namespace wc4dvar
