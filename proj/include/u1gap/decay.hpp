#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "u1gap/hilbert.hpp"
#include "u1gap/linalg.hpp"
#include "u1gap/model.hpp"
#include "u1gap/spectral.hpp"
#include "u1gap/twist.hpp"

namespace u1gap {

struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorrelationRecord {
    Site m = 0;
    Site n = 0;
    int R = 0;
    cplx value;
    double abs() const { return std::abs(value); }
};

/// S_m^+ S_n^- on the sector (m = n gives the onsite product).
SparseOp spin_pair_operator(const SpinSectorBasis& basis, Site m, Site n);

/// Tr(S_m^+ S_n^- P) / q.
CorrelationRecord transverse_correlation(const GroundProjector& p, Index q, Site m, Site n,
                                         const SpinSectorBasis& basis, int R);

/// Ground-sector fermion correlations between sites m and n.
struct FermionCorrelations {
    cplx hop_up;    // <c+_{m up} c_{n up}>
    cplx hop_down;  // <c+_{m dn} c_{n dn}>
    cplx pair;      // <c+_{m up} c+_{m dn} c_{n up} c_{n dn}>
    std::optional<cplx> spin;  // <S_m^+ S_n^->, Pauli normalization
};

/// Exact norms of the fermion pair operators (two-site Fock space, m != n).
struct FermionPairNorms {
    double hop;
    double pair;
    double spin;
};
FermionPairNorms fermion_pair_norms();

SparseOp fermion_pair_operator(const FermionSectorBasis& basis, Site m, Site n);
/// S_m^+ S_n^- = 4 c+_{m up} c_{m dn} c+_{n dn} c_{n up}.
SparseOp fermion_spin_pair_operator(const FermionSectorBasis& basis, Site m, Site n);

/// Spin correlation is rejected when the field has a transverse component.
FermionCorrelations fermion_correlations(const GroundProjector& p, Index q, Site m, Site n,
                                         const FermionSectorBasis& basis,
                                         const HubbardParams& params, bool want_spin = true);

/// e^{alpha (theta_m - theta_n)} Tr(A P(alpha)) - Tr(A P) with P(alpha) = G^{-1} P G,
/// evaluated through the ground vectors. Returns the absolute defect and the reference value.
struct GaugeIdentityCheck {
    cplx direct;
    cplx twisted;
    double defect = 0.0;
};
GaugeIdentityCheck gauge_identity(const SparseOp& a, const GroundProjector& p,
                                  const Eigen::MatrixXd& charges, const TwistProfile& profile,
                                  Site n, double alpha);

struct BoundChainReport {
    Site m = 0;
    Site n = 0;
    int R = 0;
    double alpha = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double p2alpha_norm = 0.0;
    double identity_defect = 0.0;
};

/// rhs = ||S+S-|| ||P(2 alpha)|| exp(-alpha (1 - R^{-kappa}) R^{1 - D/2}).
BoundChainReport verify_bound_chain(const CorrelationRecord& record, double pair_norm,
                                    double p2alpha_norm, const TwistProfile& profile, double alpha);

struct DecayFit {
    double gamma = 0.0;
    double prefactor = 0.0;
    double rms = 0.0;
    double theory_exponent = 0.0;  // 1 - D/2
    double free_exponent = 0.0;
    double free_gamma = 0.0;
    double free_prefactor = 0.0;
    double free_rms = 0.0;
    /// free_exponent >= theory_exponent: decay at least as fast as the bound.
    bool at_least_theory = false;
    int points = 0;
};

struct FitOptions {
    int min_distance = 2;
    double zero_threshold = 1e-12;
    int min_points = 4;
    double p_lo = 0.05;
    double p_hi = 3.0;
    double p_step = 0.001;
};

/// Envelope max |C| per distance, then log|C| = log A - gamma R^{1 - D/2} by least squares,
/// plus a grid search over a free exponent p.
DecayFit fit_decay(const std::vector<CorrelationRecord>& records, double D,
                   const FitOptions& options = {});

}  // namespace u1gap
