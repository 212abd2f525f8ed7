#include "wc4dvar/covariance.hpp"

#include <cmath>
#include <numbers>

namespace wc4dvar {

void CovarianceSpec::validate() const {
    require(sigma_b > 0.0, "CovarianceSpec: sigma_b must be positive");
    require(length_scale > 0.0, "CovarianceSpec: length_scale must be positive");
    require(sigma_o > 0.0, "CovarianceSpec: sigma_o must be positive");
    require(dx > 0.0, "CovarianceSpec: dx must be positive");
}

GaussianSampler GaussianSampler::for_role(std::uint64_t master_seed, std::uint32_t role) {
    // splitmix64 of (master, role) keeps the role streams well separated.
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (role + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return GaussianSampler(z ^ (z >> 31));
}

double GaussianSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on uniforms built from the top 53 bits.
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = (gen_() >> 11) * 0x1.0p-53;
    const double u2 = (gen_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

Vector GaussianSampler::vector(int dim) {
    Vector z(dim);
    for (int i = 0; i < dim; ++i) z[i] = next();
    return z;
}

BlockDiagCovariance::BlockDiagCovariance(std::vector<Matrix> blocks)
    : blocks_(std::move(blocks)) {
    require(!blocks_.empty(), "BlockDiagCovariance: needs at least one block");
    cholesky_.reserve(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const Matrix& b = blocks_[i];
        require(b.rows() == b.cols(), "BlockDiagCovariance: block not square");
        if (b.rows() == 0) {
            cholesky_.emplace_back();
            continue;
        }
        const double sym = (b - b.transpose()).cwiseAbs().maxCoeff();
        if (sym > 1e-14 * std::max(1.0, b.cwiseAbs().maxCoeff()))
            throw NotSpdError("BlockDiagCovariance: block " + std::to_string(i) +
                              " not symmetric");
        cholesky_.emplace_back(b);
        if (cholesky_.back().info() != Eigen::Success)
            throw NotSpdError("BlockDiagCovariance: Cholesky failed on block " +
                              std::to_string(i));
        dim_ += static_cast<int>(b.rows());
    }
}

Vector BlockDiagCovariance::apply(const Vector& v) const {
    require(static_cast<int>(v.size()) == dim_, "BlockDiagCovariance::apply: dimension mismatch");
    Vector out(dim_);
    int off = 0;
    for (const auto& b : blocks_) {
        const int m = static_cast<int>(b.rows());
        if (m > 0) out.segment(off, m) = b * v.segment(off, m);
        off += m;
    }
    return out;
}

Vector BlockDiagCovariance::solve(const Vector& v) const {
    require(static_cast<int>(v.size()) == dim_, "BlockDiagCovariance::solve: dimension mismatch");
    Vector out(dim_);
    int off = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const int m = static_cast<int>(blocks_[i].rows());
        if (m > 0) out.segment(off, m) = cholesky_[i].solve(v.segment(off, m));
        off += m;
    }
    return out;
}

Vector BlockDiagCovariance::sample(GaussianSampler& rng) const {
    Vector out(dim_);
    int off = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const int m = static_cast<int>(blocks_[i].rows());
        if (m > 0)
            out.segment(off, m) = cholesky_[i].matrixL() * rng.vector(m);
        off += m;
    }
    return out;
}

Matrix BlockDiagCovariance::dense() const {
    Matrix out = Matrix::Zero(dim_, dim_);
    int off = 0;
    for (const auto& b : blocks_) {
        const int m = static_cast<int>(b.rows());
        if (m > 0) out.block(off, off, m, m) = b;
        off += m;
    }
    return out;
}

Matrix soar_matrix(int n, const CovarianceSpec& spec) {
    require(n >= 2, "soar_matrix: n must be >= 2");
    spec.validate();
    Matrix B(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const int k = std::min(i - j, n - (i - j));
            const double d = k * spec.dx;
            const double a = d / spec.length_scale;
            const double c = (1.0 + a) * std::exp(-a);
            B(i, j) = B(j, i) = spec.sigma_b * spec.sigma_b * c;
        }
    }
    Eigen::LLT<Matrix> llt(B);
    if (llt.info() != Eigen::Success) {
        const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(B).eigenvalues().minCoeff();
        throw NotSpdError("soar_matrix: not SPD, smallest eigenvalue " + std::to_string(lmin));
    }
    return B;
}

BlockDiagCovariance build_D(const Matrix& B, const Matrix& Q, int N) {
    require(B.rows() == Q.rows() && B.cols() == Q.cols(),
            "build_D: B and Q must have equal dimensions");
    require(N >= 0, "build_D: N must be non-negative");
    std::vector<Matrix> blocks;
    blocks.reserve(N + 1);
    blocks.push_back(B);
    for (int i = 0; i < N; ++i) blocks.push_back(Q);
    return BlockDiagCovariance(std::move(blocks));
}

BlockDiagCovariance build_R(const ObservationNetwork& network, double sigma_o) {
    require(sigma_o > 0.0, "build_R: sigma_o must be positive");
    if (network.total_obs() == 0)
        throw ConfigError("build_R: network has no observations");
    std::vector<Matrix> blocks;
    blocks.reserve(network.num_times());
    for (int t = 0; t < network.num_times(); ++t) {
        const int p_t = network.obs_at(t);
        blocks.push_back(sigma_o * sigma_o * Matrix::Identity(p_t, p_t));
    }
    return BlockDiagCovariance(std::move(blocks));
}

Vector sample_gaussian(const BlockDiagCovariance& cov, std::uint64_t seed) {
    GaussianSampler rng(seed);
    return cov.sample(rng);
}

}  // namespace wc4dvar
