#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "wc4dvar/covariance.hpp"

using namespace wc4dvar;

namespace {

CovarianceSpec reference_spec() {
    CovarianceSpec spec;
    spec.sigma_b = 5e-2;
    spec.length_scale = 1.5e-2;
    spec.sigma_o = 1e-1;
    spec.dx = 1.0 / 40.0;
    return spec;
}

}  // namespace

TEST_CASE("soar matrix is symmetric circulant with sigma_b^2 diagonal") {
    const CovarianceSpec spec = reference_spec();
    const int n = 40;
    const Matrix B = soar_matrix(n, spec);
    CHECK((B - B.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < n; ++i)
        CHECK(B(i, i) == doctest::Approx(spec.sigma_b * spec.sigma_b).epsilon(1e-15));
    // Circulant: entry depends only on the cyclic offset.
    for (int k = 1; k < n; ++k)
        for (int i = 1; i < n; ++i)
            CHECK(B(i, (i + k) % n) == doctest::Approx(B(0, k)).epsilon(1e-15));
    // Periodic arc distance: offsets k and n-k coincide.
    CHECK(B(0, 1) == doctest::Approx(B(0, n - 1)).epsilon(1e-15));
}

TEST_CASE("soar correlation values match the closed form") {
    CovarianceSpec spec = reference_spec();
    spec.sigma_b = 1.0;
    const Matrix B = soar_matrix(8, spec);
    const double d = std::min(3, 8 - 3) * spec.dx;
    const double a = d / spec.length_scale;
    CHECK(B(0, 3) == doctest::Approx((1.0 + a) * std::exp(-a)).epsilon(1e-15));
}

TEST_CASE("full D smallest eigenvalue at reference parameters") {
    const CovarianceSpec spec = reference_spec();
    const Matrix B = soar_matrix(40, spec);
    // D is block diagonal with identical blocks, so its spectrum equals B's.
    const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(B).eigenvalues().minCoeff();
    CHECK(lmin == doctest::Approx(5.93e-4).epsilon(0.05));
}

TEST_CASE("block diagonal apply and solve invert each other") {
    const CovarianceSpec spec = reference_spec();
    const Matrix B = soar_matrix(12, spec);
    const BlockDiagCovariance D = build_D(B, B, 3);
    REQUIRE(D.dim() == 4 * 12);
    GaussianSampler rng(42);
    const Vector v = rng.vector(D.dim());
    const Vector w = D.solve(D.apply(v));
    CHECK((w - v).norm() <= 1e-10 * v.norm());
    // Dense form agrees with blockwise apply.
    CHECK((D.dense() * v - D.apply(v)).norm() <= 1e-12 * v.norm());
}

TEST_CASE("block diagonal spectrum is the union of block spectra") {
    Matrix A(2, 2), C(2, 2);
    A << 2.0, 0.0, 0.0, 3.0;
    C << 5.0, 1.0, 1.0, 5.0;
    const BlockDiagCovariance cov({A, C});
    const Vector evals = Eigen::SelfAdjointEigenSolver<Matrix>(cov.dense()).eigenvalues();
    CHECK(evals[0] == doctest::Approx(2.0));
    CHECK(evals[1] == doctest::Approx(3.0));
    CHECK(evals[2] == doctest::Approx(4.0));
    CHECK(evals[3] == doctest::Approx(6.0));
}

TEST_CASE("R blocks follow the per-time observation counts") {
    const ObservationNetwork net = named_network('c', 40, 15);
    const BlockDiagCovariance R = build_R(net, 0.1);
    CHECK(R.dim() == net.total_obs());
    CHECK(R.num_blocks() == 16);
    for (int t = 0; t < 16; ++t) CHECK(R.block(t).rows() == net.obs_at(t));
    // All diagonal entries are sigma_o^2.
    const Vector v = Vector::Ones(R.dim());
    CHECK((R.apply(v) - 0.01 * v).norm() <= 1e-15);
}

TEST_CASE("build_R rejects empty networks") {
    std::vector<std::vector<int>> none(16);
    const ObservationNetwork net(40, none);
    CHECK_THROWS_AS(build_R(net, 0.1), ConfigError);
}

TEST_CASE("sampler is deterministic and role streams differ") {
    GaussianSampler a = GaussianSampler::for_role(1, 2);
    GaussianSampler b = GaussianSampler::for_role(1, 2);
    GaussianSampler c = GaussianSampler::for_role(1, 3);
    const Vector va = a.vector(32), vb = b.vector(32), vc = c.vector(32);
    CHECK((va - vb).norm() == 0.0);
    CHECK((va - vc).norm() > 1e-3);
}

TEST_CASE("samples reproduce the covariance in Monte Carlo") {
    CovarianceSpec spec = reference_spec();
    spec.sigma_b = 1.0;
    spec.dx = 1.0 / 6.0;
    const Matrix B = soar_matrix(6, spec);
    const BlockDiagCovariance cov({B});
    GaussianSampler rng(7);
    const int trials = 20000;
    Matrix acc = Matrix::Zero(6, 6);
    for (int k = 0; k < trials; ++k) {
        const Vector x = cov.sample(rng);
        acc += x * x.transpose();
    }
    acc /= trials;
    // Standard error of second moments is O(1/sqrt(trials)).
    CHECK((acc - B).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("non SPD block is rejected") {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(BlockDiagCovariance({bad}), NotSpdError);
    Matrix asym(2, 2);
    asym << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(BlockDiagCovariance({asym}), NotSpdError);
}
