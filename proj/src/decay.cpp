#include "u1gap/decay.hpp"

#include <array>
#include <cmath>
#include <map>

namespace u1gap {

SparseOp spin_pair_operator(const SpinSectorBasis& basis, Site m, Site n)
{
    const std::array<SpinFactor, 2> f{SpinFactor{m, SpinOp::Plus}, SpinFactor{n, SpinOp::Minus}};
    return spin_product(basis, basis, f);
}

CorrelationRecord transverse_correlation(const GroundProjector& p, Index q, Site m, Site n,
                                         const SpinSectorBasis& basis, int R)
{
    return {m, n, R, ground_expectation(spin_pair_operator(basis, m, n), p, q)};
}

SparseOp fermion_pair_operator(const FermionSectorBasis& basis, Site m, Site n)
{
    using M = FermionSectorBasis;
    const std::array<FermionFactor, 4> f{FermionFactor{M::mode(m, 0), FermionOp::Create},
                                         FermionFactor{M::mode(m, 1), FermionOp::Create},
                                         FermionFactor{M::mode(n, 0), FermionOp::Annihilate},
                                         FermionFactor{M::mode(n, 1), FermionOp::Annihilate}};
    return fermion_product(basis, basis, f);
}

SparseOp fermion_spin_pair_operator(const FermionSectorBasis& basis, Site m, Site n)
{
    using M = FermionSectorBasis;
    const std::array<FermionFactor, 4> f{FermionFactor{M::mode(m, 0), FermionOp::Create},
                                         FermionFactor{M::mode(m, 1), FermionOp::Annihilate},
                                         FermionFactor{M::mode(n, 1), FermionOp::Create},
                                         FermionFactor{M::mode(n, 0), FermionOp::Annihilate}};
    return SparseOp(4.0 * fermion_product(basis, basis, f));
}

FermionPairNorms fermion_pair_norms()
{
    const auto fock = FermionSectorBasis::fock(2);
    return {operator_norm(CMatrix(fermion_hop(fock, 0, 2))),
            operator_norm(CMatrix(fermion_pair_operator(fock, 0, 1))),
            operator_norm(CMatrix(fermion_spin_pair_operator(fock, 0, 1)))};
}

FermionCorrelations fermion_correlations(const GroundProjector& p, Index q, Site m, Site n,
                                         const FermionSectorBasis& basis,
                                         const HubbardParams& params, bool want_spin)
{
    using M = FermionSectorBasis;
    if (want_spin && params.has_transverse_field()) {
        throw std::invalid_argument(
            "spin correlation needs a field of the form (0, 0, B_i); transverse component present");
    }
    FermionCorrelations c;
    c.hop_up = ground_expectation(fermion_hop(basis, M::mode(m, 0), M::mode(n, 0)), p, q);
    c.hop_down = ground_expectation(fermion_hop(basis, M::mode(m, 1), M::mode(n, 1)), p, q);
    c.pair = ground_expectation(fermion_pair_operator(basis, m, n), p, q);
    if (want_spin) {
        c.spin = ground_expectation(fermion_spin_pair_operator(basis, m, n), p, q);
    }
    return c;
}

GaugeIdentityCheck gauge_identity(const SparseOp& a, const GroundProjector& p,
                                  const Eigen::MatrixXd& charges, const TwistProfile& profile,
                                  Site n, double alpha)
{
    const RVector lg = log_gauge(charges, profile.theta, alpha);
    const RVector g = lg.array().exp();
    const CMatrix& v = p.vectors();
    // Tr(A G^{-1} V V^+ G) = Tr(V^+ G A G^{-1} V)
    const CMatrix right = a * (g.cwiseInverse().asDiagonal() * v);
    const CMatrix left = g.asDiagonal() * v;
    const cplx tr_twisted = (left.adjoint() * right).trace();
    const cplx tr_direct = (v.adjoint() * (a * v)).trace();
    const double shift = alpha * (profile.theta[static_cast<std::size_t>(profile.m)] -
                                  profile.theta[static_cast<std::size_t>(n)]);
    GaugeIdentityCheck out;
    out.direct = tr_direct;
    out.twisted = std::exp(shift) * tr_twisted;
    out.defect = std::abs(out.twisted - out.direct);
    return out;
}

BoundChainReport verify_bound_chain(const CorrelationRecord& record, double pair_norm,
                                    double p2alpha_norm, const TwistProfile& profile, double alpha)
{
    BoundChainReport r;
    r.m = record.m;
    r.n = record.n;
    r.R = record.R;
    r.alpha = alpha;
    r.lhs = record.abs();
    r.p2alpha_norm = p2alpha_norm;
    r.rhs = pair_norm * p2alpha_norm * std::exp(-alpha * profile.decay_exponent());
    r.margin = r.rhs - r.lhs;
    return r;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit least_squares(const RVector& x, const RVector& y)
{
    Eigen::MatrixXd a(x.size(), 2);
    a.col(0) = x;
    a.col(1).setOnes();
    const Eigen::Vector2d sol = a.colPivHouseholderQr().solve(y);
    const RVector res = a * sol - y;
    return {sol(0), sol(1), std::sqrt(res.squaredNorm() / static_cast<double>(x.size()))};
}

}  // namespace

DecayFit fit_decay(const std::vector<CorrelationRecord>& records, double D, const FitOptions& options)
{
    std::map<int, double> envelope;
    for (const auto& r : records) {
        if (r.R < options.min_distance || !(r.abs() > options.zero_threshold)) {
            continue;
        }
        auto& e = envelope[r.R];
        e = std::max(e, r.abs());
    }
    if (static_cast<int>(envelope.size()) < options.min_points) {
        throw InsufficientDataError("insufficient data: need nonzero correlations at " +
                                    std::to_string(options.min_points) + " distinct distances");
    }
    RVector rs(static_cast<Index>(envelope.size()));
    RVector logs(rs.size());
    Index k = 0;
    for (const auto& [R, v] : envelope) {
        rs(k) = R;
        logs(k) = std::log(v);
        ++k;
    }
    DecayFit fit;
    fit.points = static_cast<int>(rs.size());
    fit.theory_exponent = 1.0 - 0.5 * D;
    const auto fixed = least_squares(rs.array().pow(fit.theory_exponent).matrix(), logs);
    fit.gamma = -fixed.slope;
    fit.prefactor = std::exp(fixed.intercept);
    fit.rms = fixed.rms;
    bool first = true;
    const int steps = static_cast<int>(std::llround((options.p_hi - options.p_lo) / options.p_step));
    for (int s = 0; s <= steps; ++s) {
        const double p = options.p_lo + s * options.p_step;
        const auto lf = least_squares(rs.array().pow(p).matrix(), logs);
        if (first || lf.rms < fit.free_rms) {
            first = false;
            fit.free_exponent = p;
            fit.free_gamma = -lf.slope;
            fit.free_prefactor = std::exp(lf.intercept);
            fit.free_rms = lf.rms;
        }
    }
    fit.at_least_theory = fit.free_exponent >= fit.theory_exponent && fit.free_gamma > 0.0;
    return fit;
}

}  // namespace u1gap
