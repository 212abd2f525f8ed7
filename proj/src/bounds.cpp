#include "wc4dvar/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace wc4dvar {

BoundsReport bounds_a3(const SpectralSummary& s) {
    BoundsReport r;
    r.formulation = Formulation::A3;
    const double tmin = s.tau_min, tmax = s.tau_max;
    r.negative = Interval{0.5 * (tmin - std::sqrt(tmin * tmin + 4.0 * s.theta_max * s.theta_max)),
                          0.5 * (tmax - std::sqrt(tmax * tmax + 4.0 * s.theta_min * s.theta_min))};
    r.positive = Interval{tmin,
                          0.5 * (tmax + std::sqrt(tmax * tmax + 4.0 * s.theta_max * s.theta_max))};
    return r;
}

BoundsReport bounds_a2(const SpectralSummary& s) {
    BoundsReport r;
    r.formulation = Formulation::A2;
    const double pmin = s.psi_min, pmax = s.psi_max;
    const double nmin = s.nu_min, nmax = s.nu_max;
    r.beta1 = 0.5 * (pmax - nmin -
                     std::sqrt((pmax + nmin) * (pmax + nmin) + 4.0 * s.sigma_min * s.sigma_min));
    r.beta2 = -s.theta_min * s.theta_min / s.rho_max;
    r.beta3 = 0.5 * (pmax - std::sqrt(pmax * pmax + 4.0 * s.theta_min * s.theta_min));

    double neg_hi;
    const double b23 = std::max(r.beta2, r.beta3);
    if (r.beta1 <= b23) {
        neg_hi = r.beta1;
        r.beta_choice = 1;
    } else {
        neg_hi = b23;
        r.beta_choice = r.beta3 >= r.beta2 ? 3 : 2;
    }
    const double neg_lo =
        0.5 * (pmin - nmax -
               std::sqrt((pmin + nmax) * (pmin + nmax) + 4.0 * s.sigma_max * s.sigma_max));
    r.negative = Interval{neg_lo, neg_hi};
    r.positive =
        Interval{0.5 * (pmin - nmax +
                        std::sqrt((pmin + nmax) * (pmin + nmax) + 4.0 * s.sigma_min * s.sigma_min)),
                 0.5 * (pmax - nmin +
                        std::sqrt((pmax + nmin) * (pmax + nmin) + 4.0 * s.sigma_max * s.sigma_max))};
    return r;
}

BoundsReport bounds_a1(const SpectralSummary& s) {
    BoundsReport r;
    r.formulation = Formulation::A1;
    r.positive = Interval{s.theta_min * s.theta_min / s.tau_max,
                          s.theta_max * s.theta_max / s.tau_min};
    return r;
}

AlternativeBoundInputs compute_alternative_inputs(const BlockOperators& ops,
                                                  const Spectrum& a1_spectrum) {
    AlternativeBoundInputs in{};
    in.a1_min = a1_spectrum.min();
    in.a1_max = a1_spectrum.max();
    if (in.a1_min <= 0.0)
        throw NotSpdError("compute_alternative_inputs: A1 spectrum not positive");

    const int s = ops.state_dim();
    const Matrix L = ops.dense_L();
    const Matrix Dinv = ops.D().dense().llt().solve(Matrix::Identity(s, s));
    Matrix LDL = L.transpose() * Dinv * L;
    LDL = 0.5 * (LDL + LDL.transpose()).eval();
    in.ldl_max = sym_eig(LDL).max();

    // xi = max |eig(A1^{-1/2} LDL A1^{-1/2})| via the symmetric square root.
    const Matrix A1 = assemble_dense(ops, Formulation::A1);
    const EigenDecomposition ed = sym_eig_full(A1);
    if (ed.values[0] <= 0.0)
        throw NotSpdError("compute_alternative_inputs: dense A1 not positive definite");
    const Matrix inv_sqrt =
        ed.vectors * ed.values.cwiseSqrt().cwiseInverse().asDiagonal() * ed.vectors.transpose();
    Matrix S = inv_sqrt * LDL * inv_sqrt;
    S = 0.5 * (S + S.transpose()).eval();
    const Spectrum sp = sym_eig(S);
    in.xi = std::max(std::abs(sp.min()), std::abs(sp.max()));
    return in;
}

AlternativeBounds bounds_an(const SpectralSummary& s, const AlternativeBoundInputs& in) {
    AlternativeBounds b{};
    const double tmin = s.tau_min, tmax = s.tau_max;
    b.a3_negative =
        Interval{0.5 * (tmax - std::sqrt(tmax * tmax + 4.0 * tmax * in.a1_max)),
                 0.5 * (tmin - std::sqrt(tmin * tmin + 4.0 * tmin * in.a1_min))};
    b.a3_positive =
        Interval{tmin, 0.5 * (tmax + std::sqrt(tmax * tmax + 4.0 * tmax * in.a1_max))};
    b.a2_negative = Interval{-in.a1_max,
                             -in.a1_min / (1.0 + in.xi * in.a1_min / s.psi_min)};
    b.a2_positive =
        Interval{s.psi_min,
                 0.5 * (s.psi_max +
                        std::sqrt(s.psi_max * s.psi_max + 4.0 * s.psi_max * in.ldl_max))};
    b.xi = in.xi;
    return b;
}

ContainmentVerdict check_containment(const BoundsReport& report, const Spectrum& spectrum,
                                     double slack_scale) {
    ContainmentVerdict v;
    const double slack = slack_scale * spectrum.norm;
    const double zero_tol = 1e-10 * spectrum.norm;
    for (double ev : spectrum.eigenvalues) {
        const Interval* band = nullptr;
        if (ev < -zero_tol) {
            if (!report.negative)
                band = nullptr;  // negative eigenvalue in an SPD formulation
            else
                band = &*report.negative;
        } else {
            band = &report.positive;
        }
        double dist = 0.0;
        if (!band) {
            dist = -ev;
        } else if (!band->contains(ev, slack)) {
            dist = ev < band->lo ? band->lo - ev : ev - band->hi;
        }
        if (dist > 0.0) {
            v.contained = false;
            ++v.violations;
            v.worst_violation = std::max(v.worst_violation, dist);
        }
    }
    return v;
}

IndividualBands individual_bounds(const SpectralSummary& s, const Vector& d_eigs,
                                  const Vector& r_eigs, const Vector& nu_eigs) {
    IndividualBands bands;
    // omega: eigenvalues of D and R merged, descending.
    std::vector<double> omega(d_eigs.begin(), d_eigs.end());
    omega.insert(omega.end(), r_eigs.begin(), r_eigs.end());
    std::sort(omega.begin(), omega.end(), std::greater<>());
    bands.a3_positive.reserve(omega.size());
    for (double w : omega)
        bands.a3_positive.push_back(Interval{w - s.theta_max, w + s.theta_max});
    bands.a3_negative = Interval{-s.theta_max, 0.0};

    // psi descending for the positive A2 bands.
    std::vector<double> psi(d_eigs.begin(), d_eigs.end());
    std::sort(psi.begin(), psi.end(), std::greater<>());
    bands.a2_positive.reserve(psi.size());
    for (double w : psi)
        bands.a2_positive.push_back(Interval{w - s.sigma_max, w + s.sigma_max});

    // Negative A2 eigenvalues in descending order pair with nu ascending.
    std::vector<double> nu(nu_eigs.begin(), nu_eigs.end());
    std::sort(nu.begin(), nu.end());
    bands.a2_negative.reserve(nu.size());
    for (double w : nu)
        bands.a2_negative.push_back(Interval{-w - s.sigma_max, -w + s.sigma_max});
    return bands;
}

namespace {

bool geq(double a, double b, double tol) { return a >= b - tol; }
bool leq(double a, double b, double tol) { return a <= b + tol; }

}  // namespace

MonotonicityReport monotonicity_report(const std::vector<ChainStep>& chain, double slack) {
    require(chain.size() >= 2, "monotonicity_report: chain needs at least two steps");
    MonotonicityReport rep;
    bool cor2_applicable = true, cor2_holds = true;
    bool cor5_applicable = true, cor5_holds = true;

    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        const ChainStep& a = chain[k];
        const ChainStep& b = chain[k + 1];
        if (b.p != a.p + 1) rep.chain_valid = false;
        const SpectralSummary& sa = a.summary;
        const SpectralSummary& sb = b.summary;

        // Summary values and the intervals built from them inherit the
        // eigensolver's absolute error, which scales with the Gram matrix
        // norms; widen the slack accordingly.
        const double stol =
            slack * std::max({1.0, sa.theta_max * sa.theta_max, sb.theta_max * sb.theta_max,
                              sa.nu_max, sb.nu_max, sa.tau_max, sb.tau_max});

        rep.lemma1_theta &= geq(sb.theta_min, sa.theta_min, stol) &&
                            geq(sb.theta_max, sa.theta_max, stol);
        rep.lemma2_rho &= leq(sb.rho_min, sa.rho_min, stol) &&
                          geq(sb.rho_max, sa.rho_max, stol);
        if (a.diagonal_R && b.diagonal_R)
            rep.lemma3_nu &= geq(sb.nu_max, sa.nu_max, stol);

        // A3 extremes: negatives and largest positive move away from zero,
        // smallest positive approaches zero. Computed eigenvalues carry
        // absolute error proportional to the spectrum norm, so eigenvalue
        // comparisons widen the slack by that norm.
        {
            const double es = slack * std::max({1.0, a.a3.norm, b.a3.norm});
            auto [an_lo, an_hi, ap_lo, ap_hi] = a.a3.signed_extremes();
            auto [bn_lo, bn_hi, bp_lo, bp_hi] = b.a3.signed_extremes();
            rep.thm3_a3_extremes &= bn_lo <= an_lo + es && bn_hi <= an_hi + es &&
                                    bp_lo <= ap_lo + es && bp_hi >= ap_hi - es;
        }
        // A2 extremes (diagonal R): negatives move away, positives approach zero.
        if (a.diagonal_R && b.diagonal_R) {
            const double es = slack * std::max({1.0, a.a2.norm, b.a2.norm});
            auto [an_lo, an_hi, ap_lo, ap_hi] = a.a2.signed_extremes();
            auto [bn_lo, bn_hi, bp_lo, bp_hi] = b.a2.signed_extremes();
            rep.thm5_a2_extremes &= bn_lo <= an_lo + es && bn_hi <= an_hi + es &&
                                    bp_lo <= ap_lo + es && bp_hi <= ap_hi + es;
            // Every A1 eigenvalue non-decreasing (same dimension throughout).
            const double e1 = slack * std::max({1.0, a.a1.norm, b.a1.norm});
            for (int i = 0; i < a.a1.eigenvalues.size(); ++i)
                rep.thm7_a1_all &= b.a1.eigenvalues[i] >= a.a1.eigenvalues[i] - e1;
        }

        const BoundsReport b3a = bounds_a3(sa), b3b = bounds_a3(sb);
        const BoundsReport b2a = bounds_a2(sa), b2b = bounds_a2(sb);
        const BoundsReport b1a = bounds_a1(sa), b1b = bounds_a1(sb);

        // Interval endpoints divide by the smallest covariance eigenvalues,
        // amplifying the summary error by up to 1/tau_min.
        const double btol =
            stol * (1.0 + 1.0 / std::min({sa.tau_min, sb.tau_min, 1.0}));

        rep.cor1_a3_pos_interval &= leq(b3b.positive.lo, b3a.positive.lo, btol) &&
                                    geq(b3b.positive.hi, b3a.positive.hi, btol);

        // Negative A3 bounds move away from zero only when the tau extremes
        // are pinned by D; otherwise the direction is left open.
        if (sa.tau_max == sa.psi_max && sb.tau_max == sb.psi_max &&
            sa.tau_min == sa.psi_min && sb.tau_min == sb.psi_min) {
            cor2_holds &= leq(b3b.negative->hi, b3a.negative->hi, btol) &&
                          leq(b3b.negative->lo, b3a.negative->lo, btol);
        } else {
            cor2_applicable = false;
        }

        if ((b2a.beta_choice == 1 || b2a.beta_choice == 3) &&
            (b2b.beta_choice == 1 || b2b.beta_choice == 3)) {
            cor5_holds &= leq(b2b.negative->hi, b2a.negative->hi, btol);
        } else {
            cor5_applicable = false;
        }

        if (a.diagonal_R && b.diagonal_R)
            rep.cor6_a2_neg_lower &= leq(b2b.negative->lo, b2a.negative->lo, btol);

        rep.cor7_pos_nesting &= geq(b2a.positive.lo, b3a.positive.lo, btol) &&
                                leq(b2a.positive.hi, b3a.positive.hi, btol) &&
                                geq(b2b.positive.lo, b3b.positive.lo, btol) &&
                                leq(b2b.positive.hi, b3b.positive.hi, btol);

        rep.cor8_a1_upper &= geq(b1b.positive.hi, b1a.positive.hi, btol);
    }

    if (cor2_applicable) rep.cor2_a3_neg_bounds = cor2_holds;
    if (cor5_applicable) rep.cor5_a2_neg_upper = cor5_holds;
    return rep;
}

}  // namespace wc4dvar
