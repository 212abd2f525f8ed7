#pragma once

#include <optional>
#include <vector>

#include "wc4dvar/operators.hpp"
#include "wc4dvar/spectral.hpp"
#include "wc4dvar/types.hpp"

namespace wc4dvar {

struct Interval {
    double lo;
    double hi;
    bool contains(double x, double slack) const { return x >= lo - slack && x <= hi + slack; }
    double width() const { return hi - lo; }
};

/// Containment of a computed spectrum in the negative/positive intervals.
struct ContainmentVerdict {
    bool contained = true;
    int violations = 0;
    double worst_violation = 0.0;  // distance of the worst offender to its interval
};

/// Closed-form spectral intervals for one formulation, with the pieces of
/// the negative upper bound for the 2x2 case.
struct BoundsReport {
    Formulation formulation;
    std::optional<Interval> negative;  // absent for the SPD 1x1 system
    Interval positive;
    // 2x2 negative-upper-bound candidates; beta_choice is which one decided.
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
    int beta_choice = 0;
};

/// 3x3 block intervals:
///   I- = [ (tau_min - sqrt(tau_min^2 + 4 theta_max^2))/2,
///          (tau_max - sqrt(tau_max^2 + 4 theta_min^2))/2 ]
///   I+ = [ tau_min, (tau_max + sqrt(tau_max^2 + 4 theta_max^2))/2 ]
BoundsReport bounds_a3(const SpectralSummary& s);

/// 2x2 block intervals with the beta1/beta2/beta3 negative upper bound.
BoundsReport bounds_a2(const SpectralSummary& s);

/// 1x1 block interval [theta_min^2 / tau_max, theta_max^2 / tau_min].
BoundsReport bounds_a1(const SpectralSummary& s);

/// Extreme eigenvalues of A1 and L^T D^-1 L plus the xi factor of the
/// alternative 2x2 bound, all computed densely.
struct AlternativeBoundInputs {
    double a1_min, a1_max;
    double ldl_max;  // largest eigenvalue of L^T D^-1 L
    double xi;       // max |eig(A1^{-1/2} L^T D^-1 L A1^{-1/2})|
};

AlternativeBoundInputs compute_alternative_inputs(const BlockOperators& ops,
                                                  const Spectrum& a1_spectrum);

/// The Axelsson-Neytcheva style intervals for A3 and A2.
struct AlternativeBounds {
    Interval a3_negative, a3_positive;
    Interval a2_negative, a2_positive;
    double xi;
};

AlternativeBounds bounds_an(const SpectralSummary& s, const AlternativeBoundInputs& in);

/// Check every eigenvalue of `spectrum` against the report's intervals
/// with slack `slack_scale * spectrum.norm`.
ContainmentVerdict check_containment(const BoundsReport& report, const Spectrum& spectrum,
                                     double slack_scale = 1e-10);

/// Per-index eigenvalue bands, in descending-eigenvalue order (band k
/// matches the k-th largest eigenvalue of its sign group).
struct IndividualBands {
    std::vector<Interval> a3_positive;  // (N+1)n + p bands around the D/R eigenvalues
    Interval a3_negative;               // one band [-theta_max, 0) for all negatives
    std::vector<Interval> a2_positive;  // (N+1)n bands around psi_k
    std::vector<Interval> a2_negative;  // (N+1)n bands around -nu_k
};

IndividualBands individual_bounds(const SpectralSummary& s, const Vector& d_eigs,
                                  const Vector& r_eigs, const Vector& nu_eigs);

/// One link of a nested-network chain (networks differing by a single
/// added observation), with everything the monotonicity claims inspect.
struct ChainStep {
    int p = 0;
    bool diagonal_R = true;
    SpectralSummary summary;
    Spectrum a3, a2, a1;
};

/// Verdicts for the observation-monotonicity results, evaluated over a
/// chain ordered by single-observation additions. Claims the source
/// analysis leaves open are reported as nullopt, never asserted.
struct MonotonicityReport {
    bool chain_valid = true;
    bool lemma1_theta = true;        // theta extremes never decrease
    bool lemma2_rho = true;          // rho_min never increases, rho_max never decreases
    bool lemma3_nu = true;           // nu_max never decreases (diagonal R)
    bool thm3_a3_extremes = true;    // A3 extreme eigenvalue directions
    bool thm5_a2_extremes = true;    // A2 extreme eigenvalue directions (diagonal R)
    bool thm7_a1_all = true;         // every A1 eigenvalue non-decreasing (diagonal R)
    bool cor1_a3_pos_interval = true;    // A3 positive interval expands
    std::optional<bool> cor2_a3_neg_bounds;  // only when tau extremes come from D
    std::optional<bool> cor5_a2_neg_upper;   // only when beta1/beta3 decides
    bool cor6_a2_neg_lower = true;   // A2 negative lower bound moves away (diagonal R)
    bool cor7_pos_nesting = true;    // A2 positive interval inside A3 positive interval
    bool cor8_a1_upper = true;       // A1 upper bound moves away from zero
};

MonotonicityReport monotonicity_report(const std::vector<ChainStep>& chain,
                                       double slack = 1e-12);

}  // namespace wc4dvar
