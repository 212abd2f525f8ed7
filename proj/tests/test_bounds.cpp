#include <doctest.h>

#include <cmath>

#include "wc4dvar/bounds.hpp"
#include "wc4dvar/spectral.hpp"

using namespace wc4dvar;

namespace {

std::shared_ptr<BlockOperators> small_ops(char network_id, double sigma_o = 0.1,
                                          double sigma_b = 5e-2) {
    ModelConfig cfg;
    cfg.n = 6;
    cfg.steps = 3;
    const Trajectory traj = integrate(
        Vector::Constant(cfg.n, cfg.forcing) + 0.2 * Vector::LinSpaced(cfg.n, -1.0, 1.0), cfg);
    const ObservationNetwork net = named_network(network_id, cfg.n, cfg.steps);
    CovarianceSpec spec;
    spec.dx = 1.0 / cfg.n;
    spec.sigma_o = sigma_o;
    spec.sigma_b = sigma_b;
    const Matrix B = soar_matrix(cfg.n, spec);
    return std::make_shared<BlockOperators>(cfg, traj, net, build_D(B, B, cfg.steps),
                                            build_R(net, sigma_o));
}

SpectralSummary collapsed_summary() {
    // psi = rho = tau = 1 and theta = sigma = 1 shrink every square root
    // to sqrt(5), collapsing the intervals to golden-ratio endpoints.
    SpectralSummary s{};
    s.psi_min = s.psi_max = 1.0;
    s.rho_min = s.rho_max = 1.0;
    s.nu_min = s.nu_max = 1.0;
    s.theta_min = s.theta_max = 1.0;
    s.sigma_min = s.sigma_max = 1.0;
    s.tau_min = s.tau_max = 1.0;
    return s;
}

}  // namespace

TEST_CASE("collapsed summary gives golden ratio endpoints for the 3x3 system") {
    const BoundsReport r = bounds_a3(collapsed_summary());
    const double lo = 0.5 * (1.0 - std::sqrt(5.0));
    const double hi = 0.5 * (1.0 + std::sqrt(5.0));
    REQUIRE(r.negative.has_value());
    CHECK(r.negative->lo == doctest::Approx(lo).epsilon(1e-15));
    CHECK(r.negative->hi == doctest::Approx(lo).epsilon(1e-15));
    CHECK(r.positive.lo == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.positive.hi == doctest::Approx(hi).epsilon(1e-15));
}

TEST_CASE("collapsed summary collapses the 1x1 interval to a point") {
    const BoundsReport r = bounds_a1(collapsed_summary());
    CHECK_FALSE(r.negative.has_value());
    CHECK(r.positive.lo == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.positive.hi == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("2x2 negative upper bound picks the sharper beta") {
    // With nu_min = 0 (partial observations), beta1 uses sigma_min only.
    SpectralSummary s = collapsed_summary();
    s.nu_min = 0.0;
    const BoundsReport r = bounds_a2(s);
    CHECK(r.beta1 == doctest::Approx(0.5 * (1.0 - std::sqrt(5.0))).epsilon(1e-14));
    CHECK(r.beta2 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.beta3 == doctest::Approx(0.5 * (1.0 - std::sqrt(5.0))).epsilon(1e-14));
    REQUIRE(r.negative.has_value());
    // beta1 = beta3 < beta2 here; the rule takes beta1 as min{b1, max{b2,b3}}.
    CHECK(r.negative->hi == doctest::Approx(r.beta1).epsilon(1e-14));
    CHECK(r.beta_choice == 1);
}

TEST_CASE("2x2 beta rule switches to beta2/beta3 when beta1 is larger") {
    SpectralSummary s = collapsed_summary();
    s.sigma_min = 0.0;  // beta1 = (psi_max - nu_min)/2 - ... degenerates to 0
    s.nu_min = 0.0;
    const BoundsReport r = bounds_a2(s);
    CHECK(r.beta1 == doctest::Approx(0.0).epsilon(1e-14));
    const double b23 = std::max(r.beta2, r.beta3);
    CHECK(r.negative->hi == doctest::Approx(b23).epsilon(1e-14));
    CHECK((r.beta_choice == 2 || r.beta_choice == 3));
}

TEST_CASE("all computed spectra are contained at small scale") {
    for (char id : {'a', 'c', 'f'}) {
        const auto ops = small_ops(id);
        const SpectralSummary s = summarize(*ops);
        const Spectrum sp3 = sym_eig(assemble_dense(*ops, Formulation::A3));
        const Spectrum sp2 = sym_eig(assemble_dense(*ops, Formulation::A2));
        const Spectrum sp1 = sym_eig(assemble_dense(*ops, Formulation::A1));
        CHECK(check_containment(bounds_a3(s), sp3).contained);
        CHECK(check_containment(bounds_a2(s), sp2).contained);
        CHECK(check_containment(bounds_a1(s), sp1).contained);
    }
}

TEST_CASE("containment detects violations") {
    const auto ops = small_ops('c');
    const SpectralSummary s = summarize(*ops);
    const Spectrum sp = sym_eig(assemble_dense(*ops, Formulation::A3));
    BoundsReport squeezed = bounds_a3(s);
    squeezed.positive.hi *= 0.5;  // push the top eigenvalues outside
    const ContainmentVerdict v = check_containment(squeezed, sp);
    CHECK_FALSE(v.contained);
    CHECK(v.violations > 0);
    CHECK(v.worst_violation > 0.0);
}

TEST_CASE("individual bands cover the sorted eigenvalues") {
    const auto ops = small_ops('c');
    const SpectralSummary s = summarize(*ops);
    const IndividualBands bands =
        individual_bounds(s, d_eigenvalues(*ops), r_eigenvalues(*ops), nu_eigenvalues(*ops));
    const int sd = ops->state_dim();
    const int p = ops->obs_dim();

    const Spectrum sp3 = sym_eig(assemble_dense(*ops, Formulation::A3));
    REQUIRE(static_cast<int>(bands.a3_positive.size()) == sd + p);
    // k-th largest positive eigenvalue against band k.
    const double slack = 1e-10 * sp3.norm;
    for (int k = 0; k < sd + p; ++k) {
        const double ev = sp3.eigenvalues[2 * sd + p - 1 - k];
        CHECK(bands.a3_positive[k].contains(ev, slack));
    }
    for (int k = 0; k < sp3.n_minus; ++k) {
        const double ev = sp3.eigenvalues[k];
        CHECK(ev >= bands.a3_negative.lo - slack);
        CHECK(ev < 0.0);
    }

    const Spectrum sp2 = sym_eig(assemble_dense(*ops, Formulation::A2));
    REQUIRE(static_cast<int>(bands.a2_positive.size()) == sd);
    REQUIRE(static_cast<int>(bands.a2_negative.size()) == sd);
    const double slack2 = 1e-10 * sp2.norm;
    for (int k = 0; k < sd; ++k) {
        const double pos = sp2.eigenvalues[2 * sd - 1 - k];
        CHECK(bands.a2_positive[k].contains(pos, slack2));
        const double neg = sp2.eigenvalues[sd - 1 - k];
        CHECK(bands.a2_negative[k].contains(neg, slack2));
    }
}

TEST_CASE("alternative bounds contain the spectra and share tau_min") {
    const auto ops = small_ops('c', 1.5, 1.0);
    const SpectralSummary s = summarize(*ops);
    const Spectrum sp3 = sym_eig(assemble_dense(*ops, Formulation::A3));
    const Spectrum sp2 = sym_eig(assemble_dense(*ops, Formulation::A2));
    const Spectrum sp1 = sym_eig(assemble_dense(*ops, Formulation::A1));
    const AlternativeBoundInputs in = compute_alternative_inputs(*ops, sp1);
    const AlternativeBounds an = bounds_an(s, in);

    CHECK(an.a3_positive.lo == s.tau_min);
    CHECK(in.a1_min > 0.0);
    CHECK(in.xi > 0.0);

    auto [n3_lo, n3_hi, p3_lo, p3_hi] = sp3.signed_extremes();
    CHECK(n3_lo >= an.a3_negative.lo - 1e-10 * sp3.norm);
    CHECK(n3_hi <= an.a3_negative.hi + 1e-10 * sp3.norm);
    CHECK(p3_hi <= an.a3_positive.hi + 1e-10 * sp3.norm);

    auto [n2_lo, n2_hi, p2_lo, p2_hi] = sp2.signed_extremes();
    CHECK(n2_lo >= an.a2_negative.lo - 1e-10 * sp2.norm);
    CHECK(n2_hi <= an.a2_negative.hi + 1e-10 * sp2.norm);
    CHECK(p2_lo >= an.a2_positive.lo - 1e-10 * sp2.norm);
    CHECK(p2_hi <= an.a2_positive.hi + 1e-10 * sp2.norm);
}

TEST_CASE("monotonicity report rejects chains that skip observations") {
    std::vector<ChainStep> chain(2);
    const auto ops = small_ops('c');
    const SpectralSummary s = summarize(*ops);
    for (auto& step : chain) {
        step.summary = s;
        step.a3 = sym_eig(assemble_dense(*ops, Formulation::A3));
        step.a2 = sym_eig(assemble_dense(*ops, Formulation::A2));
        step.a1 = sym_eig(assemble_dense(*ops, Formulation::A1));
    }
    chain[0].p = 4;
    chain[1].p = 6;  // jumps by two
    const MonotonicityReport rep = monotonicity_report(chain);
    CHECK_FALSE(rep.chain_valid);
    // Identical steps trivially satisfy every inequality.
    CHECK(rep.lemma1_theta);
    CHECK(rep.thm7_a1_all);
}
