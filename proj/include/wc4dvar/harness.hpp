#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "wc4dvar/bounds.hpp"
#include "wc4dvar/covariance.hpp"
#include "wc4dvar/krylov.hpp"
#include "wc4dvar/lorenz96.hpp"
#include "wc4dvar/network.hpp"
#include "wc4dvar/operators.hpp"
#include "wc4dvar/spectral.hpp"

namespace wc4dvar {

/// Identical-twin experiment settings. Defaults reproduce the reference
/// setup: n=40, F=8, dt=2.5e-2, N=15, sigma_o=0.1, sigma_b=0.05,
/// length scale 0.015, network f.
struct ExperimentConfig {
    ModelConfig model;
    CovarianceSpec covariance;
    char network_id = 'f';
    std::optional<ObservationNetwork> explicit_network;
    std::uint64_t master_seed = 1;
    SolverConfig solver;
    int spinup_steps = 1000;  // settle the truth onto the attractor first

    ObservationNetwork network() const;

    static ExperimentConfig from_json_file(const std::filesystem::path& path);
};

/// Synthetic truth, background, observations and the increment data b, d.
struct TwinData {
    Trajectory truth;
    State background;
    Trajectory forecast;  // linearisation trajectory (perfect model from background)
    Vector observations;  // stacked y, dimension p
    Vector b;             // dimension (N+1)n
    Vector d;             // dimension p
};

/// Noise roles split off the master seed.
enum class NoiseRole : std::uint32_t { ModelError = 1, Background = 2, Observation = 3 };

TwinData run_twin(const ExperimentConfig& cfg);

/// Operators over the twin's linearisation trajectory.
std::shared_ptr<const BlockOperators> make_operators(const ExperimentConfig& cfg,
                                                     const TwinData& twin);

/// Everything the reports need about one network instance.
struct NetworkAnalysis {
    char network_id = '?';
    int p = 0;
    std::shared_ptr<const BlockOperators> ops;
    SpectralSummary summary;
    Spectrum a3, a2, a1;
    BoundsReport bounds3, bounds2, bounds1;
    ContainmentVerdict verdict3, verdict2, verdict1;
};

NetworkAnalysis analyze_network(const ExperimentConfig& cfg, const TwinData& twin);

/// Chain of single-observation additions from `base` up to `target`
/// (base must be contained in target), analysed per step.
std::vector<ChainStep> chain_between(const ExperimentConfig& cfg, const TwinData& twin,
                                     const ObservationNetwork& base,
                                     const ObservationNetwork& target);

/// Table artifacts (spectral intervals vs computed extremes for networks
/// a, c, e, f, plus the alternative-bound comparison tables). Writes
/// table2.csv .. table6.csv under out_dir. Returns false if any
/// containment verdict failed.
bool reproduce_tables(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Figure data: full spectra with bound markers and solver residual
/// histories for networks a-f, as CSV series under out_dir.
bool reproduce_figures(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Full property suite for one network: inertia, containment, solver
/// protocol, adjoint identity. Writes verify.json; returns overall verdict.
bool verify(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Artifact writers shared by the CLI subcommands.
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& sp);
void write_residuals_csv(const std::filesystem::path& path, const SolveLog& log);
void write_bounds_json(const std::filesystem::path& path, const NetworkAnalysis& na,
                       Formulation form);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

}  // namespace wc4dvar
