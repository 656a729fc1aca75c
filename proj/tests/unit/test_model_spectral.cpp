#include <doctest.h>

#include <cmath>
#include <random>

#include "u1gap/model.hpp"
#include "u1gap/spectral.hpp"

using namespace u1gap;

namespace {

XXZCouplings majumdar_ghosh(const Lattice& lat)
{
    XXZCouplings c;
    const int n = lat.num_sites();
    for (auto [i, j] : lat.bonds()) {
        const int d = std::min(std::abs(i - j), n - std::abs(i - j));
        const double J = d == 1 ? 1.0 : 0.5;
        c.jxy.push_back(0.5 * J);
        c.jz.push_back(J);
    }
    return c;
}

std::vector<double> dense_spectrum(const SparseOp& h)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(h), Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace

TEST_CASE("two-site XXZ spectra")
{
    const auto lat = build_chain(2, false);
    const SpinSectorBasis b(1, 2, 0);
    const double J = 0.7;
    const auto xy = assemble_xxz(lat, XXZCouplings::homogeneous(lat, J, 0.0), b);
    const auto ev = dense_spectrum(xy.hamiltonian);
    CHECK(ev[0] == doctest::Approx(-J));
    CHECK(ev[1] == doctest::Approx(J));
    const CMatrix ising(assemble_xxz(lat, XXZCouplings::homogeneous(lat, 0.0, J), b).hamiltonian);
    CHECK(std::abs(ising(0, 0) - cplx(-J / 4, 0)) < 1e-15);
    CHECK(std::abs(ising(1, 1) - cplx(-J / 4, 0)) < 1e-15);
    CHECK(std::abs(ising(0, 1)) == 0.0);
    CHECK_THROWS_WITH(assemble_xxz(lat, XXZCouplings{{1.0}, {}}, b), doctest::Contains("missing coupling"));
}

TEST_CASE("XY term in cartesian form")
{
    const auto lat = build_chain(3, true);
    const auto c = XXZCouplings::random(lat, 1.0, 1.0, 7);
    for (int two_s : {1, 2}) {
        const auto full = SpinSectorBasis::full(two_s, 3);
        const XXZCouplings xy{c.jxy, std::vector<double>(c.jz.size(), 0.0)};
        const auto h = assemble_xxz(lat, xy, full).hamiltonian;
        CHECK(max_abs_entry(SparseOp(h - xy_cartesian_form(lat, xy, full))) < 1e-12);
    }
}

TEST_CASE("local terms")
{
    const auto lat = build_chain(3, false);
    const auto c = XXZCouplings::random(lat, 1.0, 2.0, 3);
    const SpinSectorBasis b(1, 3, 1);
    const auto terms = local_terms(lat, c, b);
    CHECK(terms.size() == 2);
    SparseOp sum(b.dim(), b.dim());
    for (const auto& t : terms) {
        sum += t;
    }
    CHECK(max_abs_entry(SparseOp(sum - assemble_xxz(lat, c, b).hamiltonian)) < 1e-12);
    // Norm bound by the triangle inequality with exact pair norms.
    const auto norms = spin_pair_norms(1);
    const auto full = SpinSectorBasis::full(1, 3);
    const auto full_terms = local_terms(lat, c, full);
    for (std::size_t k = 0; k < full_terms.size(); ++k) {
        CHECK(operator_norm(CMatrix(full_terms[k])) <=
              c.jxy_max() * norms.symmetric + c.jz_max() * norms.zz + 1e-12);
        // Support: commutes with spin operators away from the bond.
        const int away = k == 0 ? 2 : 0;
        CHECK(max_abs_entry(commutator(full_terms[k], spin_z(full, away))) < 1e-15);
        CHECK(max_abs_entry(commutator(full_terms[k], embed_spin_operator(full, full, away, SpinOp::Plus))) <
              1e-15);
    }
}

TEST_CASE("U(1) symmetry and hermiticity")
{
    const auto lat = build_sierpinski(1);
    const auto full = SpinSectorBasis::full(1, lat.num_sites());
    const auto h = assemble_xxz(lat, XXZCouplings::random(lat, 1.0, 1.0, 11), full).hamiltonian;
    CHECK(is_hermitian(h));
    CHECK(max_abs_entry(commutator(h, total_spin_z(full))) < 1e-12);

    const auto chain = build_chain(3, false);
    HubbardParams p = HubbardParams::homogeneous(chain, cplx(1.0, 0.3), 2.0, 0.5);
    p.B = {{0.0, 0.0, 0.4}, {0.0, 0.0, -0.2}, {0.0, 0.0, 0.1}};
    const auto fock = FermionSectorBasis::fock(3);
    const auto hf = assemble_hubbard(chain, p, fock).hamiltonian;
    CHECK(is_hermitian(hf));
    CHECK(max_abs_entry(commutator(hf, total_number(fock))) < 1e-12);
    CHECK(max_abs_entry(commutator(hf, total_fermion_sz(fock))) < 1e-12);
    p.B[1] = {0.3, 0.0, 0.0};
    const auto ht = assemble_hubbard(chain, p, fock).hamiltonian;
    CHECK(max_abs_entry(commutator(ht, total_number(fock))) < 1e-12);
    CHECK(max_abs_entry(commutator(ht, total_fermion_sz(fock))) > 0.1);
}

TEST_CASE("Hubbard validation")
{
    const auto chain = build_chain(2, false);
    HubbardParams p = HubbardParams::homogeneous(chain, 1.0, 0.0, 1.0);
    p.range_limit = 0;
    CHECK_THROWS(assemble_hubbard(chain, p, FermionSectorBasis(2, 2)));
    HubbardParams q;
    CHECK_THROWS(assemble_hubbard(chain, q, FermionSectorBasis(2, 2)));
}

TEST_CASE("atomic limit avoids double occupancy")
{
    const auto chain = build_chain(2, false);
    const FermionSectorBasis b(2, 2);
    const auto model = assemble_hubbard(chain, HubbardParams::homogeneous(chain, 0.0, 3.0), b);
    const auto ev = lowest_eigenpairs(model.hamiltonian, b.dim());
    for (Index k = 0; k < ev.values.size(); ++k) {
        if (std::abs(ev.values(k)) > 1e-12) {
            continue;  // ground manifold sits at E = 0
        }
        for (int site = 0; site < 2; ++site) {
            const CMatrix d(fermion_number(b, 2 * site) * fermion_number(b, 2 * site + 1));
            CHECK(std::abs((ev.vectors.col(k).adjoint() * d * ev.vectors.col(k))(0, 0)) < 1e-12);
        }
    }
}

TEST_CASE("lowest eigenpairs")
{
    std::vector<Triplet> t;
    for (int k = 0; k < 5; ++k) {
        t.emplace_back(k, k, cplx(5.0 - k, 0.0));
    }
    const auto diag = from_triplets(5, 5, t);
    const auto ev = lowest_eigenpairs(diag, 9);
    REQUIRE(ev.values.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(ev.values(k) == doctest::Approx(1.0 + k));
    }
    std::vector<Triplet> bad{{0, 1, cplx(1.0, 0.0)}};
    CHECK_THROWS(lowest_eigenpairs(from_triplets(2, 2, bad), 2));
}

TEST_CASE("block Lanczos agrees with dense diagonalization")
{
    const auto lat = build_chain(12, false);
    const SpinSectorBasis b(1, 12, 0);
    const auto h = assemble_xxz(lat, XXZCouplings::random(lat, 1.0, 2.0, 5), b).hamiltonian;
    const auto dense = dense_lowest(CMatrix(h), 6);
    LanczosOptions opt;
    const auto lan = block_lanczos_lowest(h.rows(), [&](const CMatrix& x) { return CMatrix(h * x); }, 6, opt);
    for (int k = 0; k < 6; ++k) {
        CHECK(lan.values(k) == doctest::Approx(dense.values(k)).epsilon(1e-10));
        CHECK((h * lan.vectors.col(k) - lan.values(k) * lan.vectors.col(k)).norm() < 1e-8);
    }
}

TEST_CASE("ground sector detection")
{
    const auto lat = build_chain(2, false);
    const SpinSectorBasis b(1, 2, 0);
    const double J = 1.3;
    const auto gs = analyze_ground_sector(assemble_xxz(lat, XXZCouplings::homogeneous(lat, J, 0.0), b).hamiltonian);
    CHECK(gs.spectral.q == 1);
    CHECK(gs.spectral.gap == doctest::Approx(2 * J));
    CHECK(gs.spectral.mean_ground == doctest::Approx(-J));

    CHECK_THROWS_AS(detect_ground_sector({0.0, 1e-4, 2e-4}, 1e-6, 1e-3), NoGapError);
    CHECK_THROWS_AS(detect_ground_sector({0.0, 0.0}, 1e-6, 1e-3), NoGapError);
    CHECK_THROWS(detect_ground_sector({1.0, 0.0}, 1e-6, 1e-3));

    // invariance under a global shift
    const std::vector<double> e{-2.0, -2.0 + 1e-9, -1.0, 0.5};
    const auto a = detect_ground_sector(e, 1e-6, 1e-3);
    std::vector<double> shifted;
    for (const double x : e) {
        shifted.push_back(x + 17.25);
    }
    const auto s = detect_ground_sector(shifted, 1e-6, 1e-3);
    CHECK(a.q == 2);
    CHECK(s.q == a.q);
    CHECK(s.gap == doctest::Approx(a.gap).epsilon(1e-12));
    CHECK(a.spread < a.gap);
}

TEST_CASE("Majumdar-Ghosh dimer degeneracy")
{
    for (int n : {8, 12}) {
        const auto lat = build_zigzag_chain(n, true);
        const SpinSectorBasis b(1, n, 0);
        const auto gs = analyze_ground_sector(assemble_xxz(lat, majumdar_ghosh(lat), b).hamiltonian);
        CHECK(gs.spectral.q == 2);
        CHECK(gs.spectral.spread <= 1e-9);
        CHECK(gs.spectral.gap > 0.0);
        CHECK(gs.spectral.min_ground() == doctest::Approx(-0.375 * n));  // -3J/8 per site
    }
}

TEST_CASE("gapless spectrum under tight gap tolerance")
{
    const auto lat = build_chain(12, false);
    const SpinSectorBasis b(1, 12, 0);
    SpectralOptions opt;
    opt.gap_min = 0.5;
    CHECK_THROWS_WITH_AS(
        analyze_ground_sector(assemble_xxz(lat, XXZCouplings::homogeneous(lat, 1.0, 0.0), b).hamiltonian, opt),
        doctest::Contains("no uniform gap detected"), NoGapError);
}

TEST_CASE("ground expectations")
{
    const auto lat = build_chain(2, false);
    const SpinSectorBasis b(1, 2, 0);
    const auto h = assemble_xxz(lat, XXZCouplings::homogeneous(lat, 1.0, 0.0), b).hamiltonian;
    const auto gs = analyze_ground_sector(h);
    const auto& P = gs.projector;
    CHECK(std::abs(ground_expectation(identity_op(2), P, 1) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(ground_expectation(spin_flip(b, 0, 1), P, 1) - cplx(-0.5, 0.0)) < 1e-12);
    CHECK(std::abs(ground_expectation(h, P, 1) - gs.spectral.mean_ground) < 1e-12);
    CHECK_THROWS(ground_expectation(h, P, 2));

    // projector algebra and conjugation symmetry on a random model
    const auto chain = build_chain(8, true);
    const SpinSectorBasis s8(1, 8, 0);
    const auto g8 = analyze_ground_sector(assemble_xxz(chain, XXZCouplings::random(chain, 1.0, 3.0, 2), s8).hamiltonian);
    const CMatrix p = g8.projector.dense();
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(hermiticity_defect(p) < 1e-10);
    CHECK(std::abs(p.trace().real() - g8.spectral.q) < 1e-10);
    const SparseOp a = spin_flip(s8, 1, 4);
    const cplx va = ground_expectation(a, g8.projector, g8.spectral.q);
    const cplx vd = ground_expectation(SparseOp(a.adjoint()), g8.projector, g8.spectral.q);
    CHECK(std::abs(vd - std::conj(va)) < 1e-10);
    CHECK(std::abs(ground_expectation(SparseOp(a + SparseOp(a.adjoint())), g8.projector, g8.spectral.q).imag()) < 1e-10);
}
