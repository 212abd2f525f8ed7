#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wc4dvar/network.hpp"
#include "wc4dvar/types.hpp"

namespace wc4dvar {

/// Parameters of the background/model-error and observation-error statistics.
struct CovarianceSpec {
    double sigma_b = 5e-2;        ///< background / model-error standard deviation
    double length_scale = 1.5e-2; ///< SOAR correlation length
    double sigma_o = 1e-1;        ///< observation-error standard deviation
    double dx = 1.0 / 40.0;       ///< grid spacing on the unit periodic domain

    void validate() const;
};

/// Deterministic standard-normal stream: mt19937_64 with a Box-Muller
/// transform. The generator is fixed here so that seeded experiments are
/// reproducible across platforms.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

    /// Stream for one noise role of a master-seeded experiment. All roles
    /// derived from one master seed produce independent streams.
    static GaussianSampler for_role(std::uint64_t master_seed, std::uint32_t role);

    double next();
    Vector vector(int dim);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Block diagonal symmetric positive definite covariance with cached
/// Cholesky factors (blocks are B, Q_1..Q_N for D; R_0..R_N for R).
class BlockDiagCovariance {
public:
    explicit BlockDiagCovariance(std::vector<Matrix> blocks);

    int dim() const { return dim_; }
    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const Matrix& block(int i) const { return blocks_.at(i); }

    Vector apply(const Vector& v) const;  // C v
    Vector solve(const Vector& v) const;  // C^{-1} v via Cholesky
    Vector sample(GaussianSampler& rng) const;  // G z, G the lower Cholesky factor
    Matrix dense() const;

private:
    std::vector<Matrix> blocks_;
    std::vector<Eigen::LLT<Matrix>> cholesky_;
    int dim_ = 0;
};

/// SOAR covariance B = sigma_b^2 (1 + d/l) exp(-d/l) with d the periodic
/// arc distance min(|i-j|, n-|i-j|) * dx.
Matrix soar_matrix(int n, const CovarianceSpec& spec);

/// D = blockdiag(B, Q, ..., Q) with N copies of Q.
BlockDiagCovariance build_D(const Matrix& B, const Matrix& Q, int N);

/// R = sigma_o^2 I partitioned per time step (steps with no observations
/// contribute empty blocks). Requires at least one observation.
BlockDiagCovariance build_R(const ObservationNetwork& network, double sigma_o);

/// Draw from N(0, cov) with a stream seeded by `seed`.
Vector sample_gaussian(const BlockDiagCovariance& cov, std::uint64_t seed);

}  // namespace wc4dvar
