#include <doctest.h>

#include <cmath>

#include "u1gap/decay.hpp"
#include "u1gap/resolvent.hpp"

using namespace u1gap;

TEST_CASE("spin correlations on two sites")
{
    const double J = 1.0;
    const auto lat = build_chain(2, false);
    const SpinSectorBasis b(1, 2, 0);
    const auto model = assemble_xxz(lat, XXZCouplings::homogeneous(lat, J, 0.0), b);
    const auto gs = analyze_ground_sector(model.hamiltonian);
    // singlet-like ground state (|ud> - |du>)/sqrt 2
    const auto c = transverse_correlation(gs.projector, gs.spectral.q, 0, 1, b, 1);
    CHECK(std::abs(c.value - cplx(-0.5, 0.0)) < 1e-12);
    CHECK(c.R == 1);

    // onsite: S+S- = S^2 - Sz^2 + Sz = 1/2 + Sz for S = 1/2
    const SpinSectorBasis b6(1, 6, 2);
    const auto l6 = build_chain(6, false);
    const auto g6 = analyze_ground_sector(
        assemble_xxz(l6, XXZCouplings::random(l6, 1.0, 1.0, 5), b6).hamiltonian);
    for (int site = 0; site < 6; ++site) {
        const cplx onsite = transverse_correlation(g6.projector, g6.spectral.q, site, site, b6, 0).value;
        const cplx sz = ground_expectation(spin_z(b6, site), g6.projector, g6.spectral.q);
        CHECK(std::abs(onsite - (0.5 + sz)) < 1e-12);
    }
    // C(m,n) = conj C(n,m)
    const auto mn = transverse_correlation(g6.projector, g6.spectral.q, 1, 4, b6, 3).value;
    const auto nm = transverse_correlation(g6.projector, g6.spectral.q, 4, 1, b6, 3).value;
    CHECK(std::abs(mn - std::conj(nm)) < 1e-12);
}

TEST_CASE("fermion correlations")
{
    const auto lat = build_chain(2, false);
    const FermionSectorBasis one(2, 1, 1);
    const auto hp = HubbardParams::homogeneous(lat, 1.0, 0.0);
    const auto gs = analyze_ground_sector(assemble_hubbard(lat, hp, one).hamiltonian);
    const auto c = fermion_correlations(gs.projector, gs.spectral.q, 0, 1, one, hp);
    CHECK(std::abs(c.hop_up - cplx(0.5, 0.0)) < 1e-12);
    CHECK(std::abs(c.hop_down) < 1e-14);
    CHECK(std::abs(c.pair) < 1e-14);
    REQUIRE(c.spin.has_value());
    CHECK(std::abs(*c.spin) < 1e-14);

    const auto norms = fermion_pair_norms();
    CHECK(norms.hop == doctest::Approx(1.0));
    CHECK(norms.pair == doctest::Approx(1.0));
    CHECK(norms.spin == doctest::Approx(4.0));

    // half filling, all sectors pooled: correlations stay below the operator norms
    const auto l4 = build_chain(4, false);
    const FermionSectorBasis half(4, 4, 0);
    const auto h4 = HubbardParams::homogeneous(l4, 1.0, 2.0, 0.3);
    const auto g4 = analyze_ground_sector(assemble_hubbard(l4, h4, half).hamiltonian);
    for (int n = 1; n < 4; ++n) {
        const auto f = fermion_correlations(g4.projector, g4.spectral.q, 0, n, half, h4);
        CHECK(std::abs(f.hop_up) <= norms.hop + 1e-12);
        CHECK(std::abs(f.pair) <= norms.pair + 1e-12);
        CHECK(std::abs(*f.spin) <= norms.spin + 1e-12);
        // spin-flip symmetry of the Sz = 0 sector
        CHECK(std::abs(f.hop_up - f.hop_down) < 1e-10);
    }

    auto tf = h4;
    tf.B.assign(4, {0.0, 0.0, 0.0});
    tf.B[2] = {0.3, 0.0, 0.1};
    CHECK_THROWS_WITH(fermion_correlations(g4.projector, g4.spectral.q, 0, 1, half, tf),
                      doctest::Contains("transverse"));
    CHECK_NOTHROW(fermion_correlations(g4.projector, g4.spectral.q, 0, 1, half, tf, false));
}

TEST_CASE("particle-number superselection in the Fock space")
{
    // N-changing operators have zero expectation in a number eigenstate
    const auto fock = FermionSectorBasis::fock(2);
    const FermionSectorBasis sector(2, 2, 0);
    const auto lat = build_chain(2, false);
    const auto gs = analyze_ground_sector(assemble_hubbard(lat, HubbardParams::homogeneous(lat, 1.0, 3.0), sector).hamiltonian);
    CMatrix embedded = CMatrix::Zero(fock.dim(), gs.projector.rank());
    for (Index s = 0; s < sector.dim(); ++s) {
        embedded.row(fock.index_of(sector.mask(s)).value()) = gs.projector.vectors().row(s);
    }
    const GroundProjector pf(embedded);
    for (int mode = 0; mode < 4; ++mode) {
        const SparseOp c = embed_fermion_operator(fock, fock, mode, FermionOp::Annihilate);
        CHECK(std::abs(ground_expectation(c, pf, pf.rank())) == 0.0);
        const SparseOp cc = c * embed_fermion_operator(fock, fock, (mode + 1) % 4, FermionOp::Annihilate);
        CHECK(std::abs(ground_expectation(cc, pf, pf.rank())) == 0.0);
    }
    CHECK(std::abs(ground_expectation(total_number(fock), pf, pf.rank()) - cplx(2.0, 0.0)) < 1e-12);
}

TEST_CASE("gauge identity and bound chain")
{
    const auto lat = build_chain(8, false);
    const SpinSectorBasis b(1, 8, 0);
    const auto model = assemble_xxz(lat, XXZCouplings::homogeneous(lat, 1.0, 4.0), b);
    const auto gs = analyze_ground_sector(model.hamiltonian);
    const auto profile = build_theta(distances_from(lat, 1), 5, 0.75, 1.0);
    for (int n = 2; n < 8; ++n) {
        for (const double alpha : {0.0, 0.3, 1.0}) {
            const auto id = gauge_identity(spin_pair_operator(b, 1, n), gs.projector, model.charges, profile, n, alpha);
            CHECK(id.defect <= 1e-10 * std::max(1.0, std::abs(id.direct)));
        }
    }
    const auto rec = transverse_correlation(gs.projector, gs.spectral.q, 1, 6, b, 5);
    const auto r0 = verify_bound_chain(rec, model.correlation_pair_norm, 1.0, profile, 0.0);
    CHECK(r0.rhs == doctest::Approx(model.correlation_pair_norm));
    CHECK(r0.margin >= 0.0);
    for (const double alpha : {0.1, 0.5, 1.0}) {
        const double p2 = twisted_projector_norm(gs.projector, log_gauge(model.charges, profile.theta, 2 * alpha));
        const auto r = verify_bound_chain(rec, model.correlation_pair_norm, p2, profile, alpha);
        CHECK(r.rhs == doctest::Approx(model.correlation_pair_norm * p2 * std::exp(-alpha * profile.decay_exponent())));
        CHECK(r.margin >= 0.0);
    }
}

TEST_CASE("decay fit")
{
    std::vector<CorrelationRecord> recs;
    for (int R = 1; R <= 24; ++R) {
        recs.push_back({0, R, R, cplx(3.0 * std::exp(-0.4 * std::sqrt(static_cast<double>(R))), 0.0)});
        // smaller entries at the same distance do not change the envelope
        recs.push_back({1, R + 1, R, cplx(0.0, 1e-3 * std::exp(-0.4 * std::sqrt(static_cast<double>(R))))});
    }
    const auto fit = fit_decay(recs, 1.0);
    CHECK(fit.gamma == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.rms < 1e-12);
    CHECK(fit.free_exponent == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fit.at_least_theory);
    CHECK(fit.points == 23);  // R >= 2

    std::vector<CorrelationRecord> zeros;
    for (int R = 2; R < 10; ++R) {
        zeros.push_back({0, R, R, cplx(R % 3 == 0 ? 0.1 : 1e-13, 0.0)});
    }
    CHECK_THROWS_WITH_AS(fit_decay(zeros, 1.0), doctest::Contains("insufficient data"), InsufficientDataError);
}
