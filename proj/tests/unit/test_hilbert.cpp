#include <doctest.h>

#include <array>
#include <cmath>

#include "u1gap/hilbert.hpp"

using namespace u1gap;

namespace {

double dense_norm(const SparseOp& a)
{
    return operator_norm(CMatrix(a));
}

// Number of ways to write sum k_i = target with 0 <= k_i <= 2S, by dynamic programming.
long sector_count(int two_s, int sites, int target)
{
    std::vector<long> ways(static_cast<std::size_t>(target + 1), 0);
    ways[0] = 1;
    for (int s = 0; s < sites; ++s) {
        std::vector<long> next(ways.size(), 0);
        for (int t = 0; t <= target; ++t) {
            for (int k = 0; k <= two_s && k <= t; ++k) {
                next[t] += ways[t - k];
            }
        }
        ways = next;
    }
    return ways[target];
}

}  // namespace

TEST_CASE("spin sector enumeration")
{
    const auto b = enumerate_spin_sector(0.5, 2, 0.0);
    REQUIRE(b.dim() == 2);
    // up-down first, then down-up
    CHECK(b.m(0, 0) == 0.5);
    CHECK(b.m(0, 1) == -0.5);
    CHECK(b.m(1, 0) == -0.5);
    CHECK(enumerate_spin_sector(0.5, 4, 2.0).dim() == 1);
    CHECK(enumerate_spin_sector(1.0, 2, 0.0).dim() == 3);
    CHECK_THROWS(enumerate_spin_sector(0.5, 3, 0.0));
    CHECK_THROWS(enumerate_spin_sector(0.5, 2, 2.0));
    for (int two_s : {1, 2, 3}) {
        for (int sites : {3, 4, 5}) {
            for (int k = 0; k <= two_s * sites; ++k) {
                const int two_m = two_s * sites - 2 * k;
                const SpinSectorBasis basis(two_s, sites, two_m);
                CHECK(basis.dim() == sector_count(two_s, sites, k));
                for (Index s = 0; s < basis.dim(); ++s) {
                    CHECK(basis.two_total_m(s) == two_m);
                    CHECK(basis.index_of(basis.key(s)).value() == s);
                }
                for (Index s = 1; s < basis.dim(); ++s) {
                    CHECK(basis.key(s - 1) < basis.key(s));
                }
            }
        }
    }
}

TEST_CASE("ladder operators")
{
    const auto full1 = SpinSectorBasis::full(1, 1);
    CHECK(dense_norm(embed_spin_operator(full1, full1, 0, SpinOp::Plus)) == doctest::Approx(1.0));
    const auto full2 = SpinSectorBasis::full(2, 1);
    CHECK(dense_norm(embed_spin_operator(full2, full2, 0, SpinOp::Plus)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    const auto b = enumerate_spin_sector(0.5, 2, 0.0);
    const CMatrix flip(spin_flip(b, 0, 1));
    // <up down| S1+ S2- |down up> = 1
    CHECK(std::abs(flip(0, 1) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(flip(1, 0)) < 1e-15);
}

TEST_CASE("spin algebra on small spaces")
{
    for (int two_s : {1, 2, 3}) {
        const auto full = SpinSectorBasis::full(two_s, 2);
        const SparseOp p = embed_spin_operator(full, full, 0, SpinOp::Plus);
        const SparseOp m = embed_spin_operator(full, full, 0, SpinOp::Minus);
        const SparseOp z = spin_z(full, 0);
        // [S+, S-] = 2 Sz, [Sz, S+] = S+
        CHECK(max_abs_entry(SparseOp(commutator(p, m) - 2.0 * z)) < 1e-12);
        CHECK(max_abs_entry(SparseOp(commutator(z, p) - p)) < 1e-12);
        // operators on different sites commute
        const SparseOp p1 = embed_spin_operator(full, full, 1, SpinOp::Plus);
        CHECK(max_abs_entry(commutator(p, p1)) < 1e-12);
    }
}

TEST_CASE("sector operators stay inside the sector")
{
    const SpinSectorBasis sector(1, 5, 1);
    const SpinSectorBasis up(1, 5, 3);
    const SparseOp flip = spin_flip(sector, 1, 3);
    CHECK(flip.rows() == sector.dim());
    CHECK(embed_spin_operator(sector, up, 2, SpinOp::Plus).rows() == up.dim());
    CHECK_THROWS(embed_spin_operator(sector, sector, 2, SpinOp::Plus));
}

TEST_CASE("fermion basis")
{
    const FermionSectorBasis b(3, 2);
    CHECK(b.dim() == 15);
    for (Index s = 0; s < b.dim(); ++s) {
        CHECK(__builtin_popcountll(b.mask(s)) == 2);
        CHECK(b.index_of(b.mask(s)).value() == s);
    }
    CHECK(FermionSectorBasis(2, 2, 0).dim() == 4);
    CHECK(FermionSectorBasis::fock(2).dim() == 16);
}

TEST_CASE("CAR algebra")
{
    const auto fock = FermionSectorBasis::fock(1);  // two modes
    const auto id = identity_op(fock.dim());
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const SparseOp ca = embed_fermion_operator(fock, fock, a, FermionOp::Annihilate);
            const SparseOp cbd = embed_fermion_operator(fock, fock, b, FermionOp::Create);
            const SparseOp cb = embed_fermion_operator(fock, fock, b, FermionOp::Annihilate);
            const SparseOp anti = ca * cbd + cbd * ca;
            CHECK(max_abs_entry(SparseOp(anti - (a == b ? 1.0 : 0.0) * id)) < 1e-12);
            CHECK(max_abs_entry(SparseOp(ca * cb + cb * ca)) < 1e-12);
        }
    }
    // c1^+ c2^+ |0> = - c2^+ c1^+ |0>
    const auto f2 = FermionSectorBasis::fock(1);
    const SparseOp c0 = embed_fermion_operator(f2, f2, 0, FermionOp::Create);
    const SparseOp c1 = embed_fermion_operator(f2, f2, 1, FermionOp::Create);
    const CVector vac = CVector::Unit(f2.dim(), f2.index_of(0).value());
    const CVector lhs = c0 * (c1 * vac);
    const CVector rhs = c1 * (c0 * vac);
    CHECK(lhs.norm() == doctest::Approx(1.0));
    CHECK((lhs + rhs).norm() < 1e-15);
}

TEST_CASE("number operator")
{
    const FermionSectorBasis b(2, 1);
    for (int mode = 0; mode < 4; ++mode) {
        const CMatrix n(fermion_number(b, mode));
        for (Index s = 0; s < b.dim(); ++s) {
            CHECK(n(s, s).real() == (b.occupied(s, mode) ? 1.0 : 0.0));
        }
    }
    CHECK(max_abs_entry(SparseOp(total_number(b) - identity_op(b.dim()))) < 1e-15);
}
