#include <doctest.h>

#include <cmath>

#include "u1gap/resolvent.hpp"

using namespace u1gap;

namespace {

struct Setup {
    Lattice lat;
    SpinSectorBasis basis;
    SectorModel model;
    GroundSector gs;
    TwistProfile profile;
    double C0;
};

Setup xxz_chain(int n, int m_site, int R, double jxy = 1.0, double jz = 4.0)
{
    auto lat = build_chain(n, false);
    SpinSectorBasis b(1, n, 0);
    auto model = assemble_xxz(lat, XXZCouplings::homogeneous(lat, jxy, jz), b);
    auto gs = analyze_ground_sector(model.hamiltonian);
    auto profile = build_theta(distances_from(lat, m_site), R, 0.75, 1.0);
    return {std::move(lat), std::move(b), std::move(model), std::move(gs), std::move(profile), 2.0};
}

}  // namespace

TEST_CASE("gauss-legendre rules")
{
    for (int n : {1, 2, 5, 32, 64}) {
        const auto r = gauss_legendre(n);
        CHECK(r.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
        // exact for polynomials of degree 2n - 1
        for (int deg = 0; deg <= 2 * n - 1 && deg <= 40; ++deg) {
            const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
            double q = 0.0;
            for (Index k = 0; k < r.nodes.size(); ++k) {
                q += r.weights(k) * std::pow(r.nodes(k), deg);
            }
            CHECK(std::abs(q - exact) < 1e-13);
        }
    }
    CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("contour on the two-site XY model")
{
    const double J = 0.7;
    const auto lat = build_chain(2, false);
    const SpinSectorBasis b(1, 2, 0);
    const auto model = assemble_xxz(lat, XXZCouplings::homogeneous(lat, J, 0.0), b);
    const auto gs = analyze_ground_sector(model.hamiltonian);
    const auto c = choose_contour(gs.spectral, 0.0);
    CHECK(c.e_minus == doctest::Approx(-2 * J));
    CHECK(std::abs(c.e_plus) < 1e-14);
    CHECK(c.y0 == doctest::Approx(std::max(1.0, 2 * J)));
    CHECK(c.c3 == doctest::Approx(c.y0));

    const auto tp = contour_project(CMatrix(model.hamiltonian), c);
    CHECK((tp.P - gs.projector.dense()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(tp.trace_real == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(tp.used_conjugate_symmetry);
}

TEST_CASE("contour projector at alpha = 0 is the spectral projector")
{
    auto s = xxz_chain(6, 0, 4);
    const CMatrix h(s.model.hamiltonian);
    const auto c = choose_contour(s.gs.spectral, 0.0);
    QuadratureOptions opt;
    opt.threads = 2;
    const auto tp = contour_project(h, c, opt);
    CHECK((tp.P - s.gs.projector.dense()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(tp.trace_real == doctest::Approx(s.gs.spectral.q).epsilon(1e-9));
    CHECK(tp.norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tp.idempotence_defect < 1e-8);
    CHECK(tp.doubling_change < 1e-8);
    // thread count does not change the sum
    opt.threads = 1;
    const auto serial = contour_project(h, c, opt);
    CHECK((serial.P - tp.P).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("twisted projector against the conjugation oracle")
{
    auto s = xxz_chain(8, 1, 5);
    const double alpha = 0.04;
    const auto tw = build_KL(s.lat, s.model, s.profile, alpha);
    const CMatrix hp(twisted_hamiltonian(s.model, tw));
    const double l_norm = operator_norm(tw.L);
    const auto c = choose_contour(s.gs.spectral, l_norm);
    const auto tp = contour_project(hp, c);
    const RVector lg = log_gauge(s.model.charges, s.profile.theta, 2 * alpha);
    const CMatrix oracle = twisted_projector_oracle(s.gs.projector, lg);
    CHECK((tp.P - oracle).norm() / oracle.norm() <= 1e-6);
    CHECK(tp.norm == doctest::Approx(twisted_projector_norm(s.gs.projector, lg)).epsilon(1e-8));
    CHECK(tp.norm >= 1.0 - 1e-12);
    CHECK(std::abs(tp.trace_real - s.gs.spectral.q) < 1e-8);
}

TEST_CASE("f and the gap margin")
{
    SpectralData sd;
    sd.gap = 2.0;
    sd.spread = 0.0;
    CHECK(f_value(0.0, 5.0, sd) == 0.0);
    CHECK(f_value(4.0, 0.0, sd) == doctest::Approx(1.0));
    sd.spread = 0.5;
    CHECK(f_value(4.0, 1.0, sd) == doctest::Approx(std::sqrt(1.0 + 0.5)));

    auto s = xxz_chain(8, 1, 5);
    const auto r0 = gap_margin(s.model.hamiltonian, build_KL(s.lat, s.model, s.profile, 0.0), s.gs.spectral);
    CHECK(r0.f == 0.0);
    CHECK(r0.margin == doctest::Approx(s.gs.spectral.gap / 2));
    CHECK(r0.c4_required == doctest::Approx(s.gs.spectral.gap / 8));
    CHECK(r0.admissible());
    const auto big = gap_margin(s.model.hamiltonian, build_KL(s.lat, s.model, s.profile, 1.0), s.gs.spectral);
    CHECK_FALSE(big.admissible());
}

TEST_CASE("matrix element lemma")
{
    auto s = xxz_chain(8, 1, 5);
    for (const double alpha : {0.02, 0.2}) {
        const auto tw = build_KL(s.lat, s.model, s.profile, alpha);
        const auto dc = double_commutator(s.model.hamiltonian, tw.L);
        const double f = f_value(operator_norm(dc), operator_norm(tw.L), s.gs.spectral);
        const auto rep = check_matrix_element_lemma(tw.L, s.gs.projector, f, 100, 7);
        CHECK(rep.passed());
        CHECK(rep.lhs <= rep.rhs);
        // deterministic under a fixed seed
        CHECK(check_matrix_element_lemma(tw.L, s.gs.projector, f, 100, 7).lhs == rep.lhs);
    }
}

TEST_CASE("alpha0 search")
{
    auto rep = [](double a, double margin) {
        GapMarginReport r;
        r.alpha = a;
        r.margin = margin;
        r.c4_required = 1.0;
        return r;
    };
    CHECK(alpha0_search({rep(0.1, 2), rep(0.2, 2), rep(0.3, 0.5)}) == 0.2);
    // a later admissible point does not extend the prefix
    CHECK(alpha0_search({rep(0.1, 2), rep(0.2, 0.5), rep(0.3, 2)}) == 0.1);
    CHECK(alpha0_search({rep(0.1, 2), rep(0.2, 2)}) == 0.2);
    CHECK_THROWS_AS(alpha0_search({rep(0.1, 0.5), rep(0.2, 2)}), NoAdmissibleAlphaError);
    CHECK_THROWS_AS(alpha0_search({}), NoAdmissibleAlphaError);
}

TEST_CASE("resolvent bounds at alpha = 0")
{
    auto s = xxz_chain(6, 0, 4);
    const CMatrix h(s.model.hamiltonian);
    const auto c = choose_contour(s.gs.spectral, 0.0);
    // on the vertical sides the distance to the spectrum is at least dE/2
    CHECK(resolvent_norm(h, cplx(c.e_plus, 0.0)) == doctest::Approx(2.0 / s.gs.spectral.gap).epsilon(1e-8));
    const auto samples = sample_resolvent(h, c, 16);
    CHECK(samples.right.size() == 18);
    CHECK(samples.sup(samples.right) <= 2.0 / s.gs.spectral.gap * (1 + 1e-10));
    CHECK(samples.sup(samples.top) <= 1.0 / c.y0 * (1 + 1e-10));

    const auto margin = gap_margin(s.model.hamiltonian, build_KL(s.lat, s.model, s.profile, 0.0), s.gs.spectral);
    for (const auto& r : check_resolvent_lemmas(samples, c, margin)) {
        CHECK(r.passed());
    }
    const auto pb = norm_P2alpha_bound(1.0, c, samples, margin);
    CHECK(pb.passed());
    CHECK(pb.rhs <= pb.constants.at("rhs_ceiling"));
}

TEST_CASE("projector bound grows like R^{D/2}")
{
    const auto k = projector_bound_constants(1.5, 3.0, 2.0, 0.7);
    const double D = 1.0;
    const double a = k.evaluate(4, D);
    const double b = k.evaluate(9, D);
    const double c = k.evaluate(16, D);
    // sqrt(R) = 2, 3, 4: equal increments
    CHECK(b - a == doctest::Approx(c - b));
    CHECK(b - a == doctest::Approx(k.C));
}
