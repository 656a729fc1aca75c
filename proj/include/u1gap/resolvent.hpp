#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "u1gap/linalg.hpp"
#include "u1gap/spectral.hpp"
#include "u1gap/twist.hpp"

namespace u1gap {

/// alpha grid has no admissible prefix.
struct NoAdmissibleAlphaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rectangle with vertical sides through E_-, E_+ and horizontal sides at +-i y0.
struct Contour {
    double e_minus = 0.0;
    double e_plus = 0.0;
    double y0 = 0.0;
    /// y0 - ||L||.
    double c3 = 0.0;
};

/// E_- = min E_0 - dE/2, E_+ = max E_0 + dE/2, y0 = ||L|| + max(1, dE).
Contour choose_contour(const SpectralData& spectral, double l_norm);

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    RVector nodes;
    RVector weights;
};
QuadratureRule gauss_legendre(int n);

struct QuadratureOptions {
    int initial_nodes = 32;
    int max_nodes = 4096;
    double defect_tolerance = 1e-8;
    double stability_tolerance = 1e-8;
    int threads = 1;
};

struct TwistedProjector {
    CMatrix P;
    double norm = 0.0;
    /// ||P^2 - P||_F / max(1, ||P||_F)
    double idempotence_defect = 0.0;
    /// | ||P_n|| - ||P_{n/2}|| | at acceptance.
    double doubling_change = 0.0;
    int nodes_per_segment = 0;
    double trace_real = 0.0;
    bool used_conjugate_symmetry = false;
    bool contour_inflated = false;
};

/// (1 / 2 pi i) contour integral of (z - H')^{-1} over the rectangle, one dense LU per node.
/// Node count per side doubles until the idempotence defect and the norm change both fall
/// below tolerance. A non-finite solve triggers one retry with y0 doubled.
TwistedProjector contour_project(const CMatrix& hprime, const Contour& contour,
                                 const QuadratureOptions& options = {});

/// exp(log_g) as a diagonal, applied as G^{-1} P G for P = V V^dagger.
CMatrix twisted_projector_oracle(const GroundProjector& p, const RVector& log_g);
/// ||G^{-1} V V^dagger G|| through the q x q Gram matrices.
double twisted_projector_norm(const GroundProjector& p, const RVector& log_g);

struct GapMarginReport {
    double alpha = 0.0;
    double f = 0.0;
    double k_norm = 0.0;
    double l_norm = 0.0;
    double double_commutator_norm = 0.0;
    double margin = 0.0;  // dE/2 - ||K|| - f
    double c4_required = 0.0;

    bool admissible() const { return margin >= c4_required; }
};

/// f = sqrt(||[L,[H,L]]|| / (2 dE) + 2 (dcalE / dE) ||L||^2).
double f_value(double double_commutator_norm, double l_norm, const SpectralData& spectral);

GapMarginReport gap_margin(const SparseOp& h, const TwistOperators& tw, const SpectralData& spectral,
                           double c4_fraction = 0.125);

/// |<Phi_+, L Phi_->| <= f ||Phi_+|| ||Phi_-|| for `trials` seeded gaussian Phi plus the
/// extremal Phi built from the top singular pair of (1 - P) L P. Reports the worst case.
LemmaReport check_matrix_element_lemma(const SparseOp& l, const GroundProjector& p, double f,
                                       int trials, std::uint64_t seed);

/// Largest grid alpha of the contiguous admissible prefix (reports sorted by alpha).
double alpha0_search(const std::vector<GapMarginReport>& reports);

struct Alpha0Scan {
    double alpha0 = 0.0;
    std::vector<GapMarginReport> reports;  // up to and including the first failure
};

/// Lazy version of alpha0_search: walks the ascending grid and stops at the first
/// inadmissible point.
Alpha0Scan scan_alpha0(const Lattice& lat, const SectorModel& model, const TwistProfile& profile,
                       const SpectralData& spectral, const std::vector<double>& grid,
                       double c4_fraction = 0.125);

/// ||(H' - z)^{-1}|| at one point, via the smallest singular value of H' - z.
double resolvent_norm(const CMatrix& hprime, cplx z);

struct ResolventSamples {
    std::vector<double> right;   // z = E_+ + i y
    std::vector<double> left;    // z = E_- + i y
    std::vector<double> top;     // z = x + i y0
    std::vector<double> bottom;  // z = x - i y0
    double sup(const std::vector<double>& v) const;
};

/// Samples each side at `per_side` Gauss-Legendre points plus both endpoints.
ResolventSamples sample_resolvent(const CMatrix& hprime, const Contour& contour, int per_side);

/// Vertical sides against 1 / C4 (and the sharper 1 / (dE/2 - ||K|| - f), 1 / (dE/2 - ||K||)),
/// horizontal sides against 1 / C3.
std::vector<LemmaReport> check_resolvent_lemmas(const ResolventSamples& samples,
                                                const Contour& contour,
                                                const GapMarginReport& margin);

/// ||P(2 alpha)|| <= (1 / 2 pi) [2 y0 (sup_right + sup_left) + (E_+ - E_-)(sup_top + sup_bottom)]
/// with sampled sups; the ceiling version (lemma constants in place of samples) is in
/// constants["rhs_ceiling"].
LemmaReport norm_P2alpha_bound(double p_norm, const Contour& contour,
                               const ResolventSamples& samples, const GapMarginReport& margin);

/// Constants C, C' with rhs = C R^{D/2} + C' when y0 = C2 R^{D/2}; the ceilings are the
/// sums of the two vertical and the two horizontal side ceilings.
struct ProjectorBoundConstants {
    double C = 0.0;
    double C_prime = 0.0;
    double evaluate(double R, double D) const;
};
ProjectorBoundConstants projector_bound_constants(double C2, double e_span, double vertical_ceiling,
                                                  double horizontal_ceiling);

}  // namespace u1gap
