#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "u1gap/lattice.hpp"
#include "u1gap/linalg.hpp"
#include "u1gap/model.hpp"

namespace u1gap {

/// Gauge factor exponent above the guard; G would not be representable.
struct GaugeOverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

/// Open interval (1 - D/2, 3/2 - D/2).
std::pair<double, double> kappa_window(double D);
/// Window midpoint 5/4 - D/2.
double default_kappa(double D);

/// theta_l = R^{1-D/2} (R^{-kappa} - 1) at l = m, R^{1-D/2} ((d/R)^kappa - 1) for
/// 1 <= d <= R, and 0 beyond R.
struct TwistProfile {
    Site m = 0;
    int R = 0;
    double kappa = 0.0;
    double D = 1.0;
    std::vector<int> dist;  // graph distance from m
    std::vector<double> theta;

    /// R^{1-D/2} (1 - R^{-kappa}) = theta_n - theta_m for dist(n, m) = R.
    double decay_exponent() const;
};

TwistProfile build_theta(const DistanceField& field, int R, double kappa, double D);

/// theta identically zero (no twist); used when the lattice has no pair at distance >= 2.
TwistProfile trivial_profile(const DistanceField& field, double D);

/// log G(alpha) per basis state: -alpha sum_i theta_i q_i, with q_i the local U(1) charge.
/// With this sign G^{-1} X G = e^{alpha (theta_i - theta_j)} X for any X moving one unit
/// of charge from j to i.
RVector log_gauge(const Eigen::MatrixXd& charges, const std::vector<double>& theta, double alpha);

/// Diagonal G(alpha); throws GaugeOverflowError when max |log G| > 600.
SparseOp build_G(const Eigen::MatrixXd& charges, const std::vector<double>& theta, double alpha);

inline constexpr double kGaugeLogLimit = 600.0;

/// Bonds {i, j} of A_{1,R}(m), oriented so dist(i) <= dist(j), with 1 <= dist(i) <= R - 1.
/// Every other bond has theta_i = theta_j and drops out of K and L.
std::vector<Bond> annulus_bonds(const Lattice& lat, const TwistProfile& profile);

struct TwistOperators {
    double alpha = 0.0;
    SparseOp K;
    SparseOp L;
    std::vector<Bond> bonds;
};

/// K = sum_A (cosh x - 1)(a F + a* F^dagger), L = -i sum_A sinh x (a F - a* F^dagger), with
/// x = 2 alpha (theta_i - theta_j) and a F the transfer term of bond {i, j}. Then
/// G(2 alpha)^{-1} H G(2 alpha) = H + K + i L.
TwistOperators build_KL(const Lattice& lat, const SectorModel& model, const TwistProfile& profile,
                        double alpha);

/// H' = H + K + i L.
SparseOp twisted_hamiltonian(const SectorModel& model, const TwistOperators& tw);

/// [L, [H, L]] (hermitian for hermitian H, L).
SparseOp double_commutator(const SparseOp& h, const SparseOp& l);

struct LemmaReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    std::map<std::string, double> constants;

    bool passed() const { return margin >= 0.0; }
};

LemmaReport make_report(std::string name, double lhs, double rhs,
                        std::map<std::string, double> constants = {});

/// Geometry and coupling data the three norm lemmas depend on.
struct LemmaConstants {
    double C0 = 0.0;
    double D = 1.0;
    double kappa = 0.0;
    int R = 0;
    double transfer_max = 0.0;
    double pair_norm_sym = 0.0;
    double pair_norm_antisym = 0.0;
    /// Largest local bond-term norm; enters the proof constant C1.
    double bond_term_max = 0.0;
};

LemmaConstants lemma_constants(const SectorModel& model, const TwistProfile& profile, double C0,
                               double bond_term_max);

/// (2 kappa + D - 1) / (2 kappa + D - 2).
double kappa_ratio(double kappa, double D);

/// J max ||F + F^dagger|| C0^2 (cosh 2a - 1) kappa_ratio.
double lemma_K_rhs(const LemmaConstants& c, double alpha);
/// J max ||F - F^dagger|| C0^2 |sinh 2a| (1 + R^{D/2} / (kappa + D - 1)).
double lemma_L_rhs(const LemmaConstants& c, double alpha);
/// C1 sinh^2(2a) kappa_ratio.
double lemma_double_rhs(double C1, const LemmaConstants& c, double alpha);
/// C1 = 24 C0^4 J max^2 * 16 ||F - F^dagger||^2 h max, from the counting in the proof.
double proof_C1(const LemmaConstants& c);

/// Report builders from precomputed norms.
LemmaReport lemma_K_report(double k_norm, const LemmaConstants& c, double alpha);
LemmaReport lemma_L_report(double l_norm, const LemmaConstants& c, double alpha);
LemmaReport lemma_double_report(double dc_norm, const LemmaConstants& c, double alpha, double C1);

LemmaReport check_lemma_K(const TwistOperators& tw, const LemmaConstants& c);
LemmaReport check_lemma_L(const TwistOperators& tw, const LemmaConstants& c);
/// Reports the smallest C1 that would make the inequality hold ("C1_min") next to the
/// constant actually used.
LemmaReport check_lemma_double(const SparseOp& h, const TwistOperators& tw, const LemmaConstants& c,
                               double C1);

/// Largest value of |theta_i - theta_j| - kappa R^{1 - kappa - D/2} r^{kappa - 1} over the
/// annulus bonds, r = dist(i). Nonpositive when the proof's difference bound holds.
double theta_difference_slack(const Lattice& lat, const TwistProfile& profile);

/// max / min of the minimal C1 values over a grid; flags alpha dependence above 5 %.
struct C1Diagnostic {
    double c1_min = 0.0;
    double c1_max = 0.0;
    bool alpha_independent = false;
};
C1Diagnostic diagnose_C1(const std::vector<LemmaReport>& double_reports);

/// Largest norm of a bond term h_b over the model's bonds (XXZ: J^XY ||F+F^+|| + |J^Z| S^2).
double xxz_bond_term_max(const XXZCouplings& couplings, int two_s);
double hubbard_bond_term_max(const HubbardParams& params, double pair_norm_sym);

}  // namespace u1gap
